// Copyright 2026 The VBD Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "oracles.h"
#include "test_env.h"
#include "vbd/edit_distance.h"
#include "vbd/errors.h"
#include "vbd/text.h"

namespace vbd {
namespace {

Term Pcd(const std::string& local) { return Term::Iri("http://example.org/pcd#" + local); }

Lexicon SmallLexicon() {
  Lexicon lex;
  for (const char* w : {"the", "patient", "has", "and", "with", "a", "of", "since"}) {
    lex.AddWord(w, 100);
  }
  for (const char* w : {"the", "has", "and", "with", "a", "of", "since"}) lex.AddStopword(w);
  lex.AddAbbreviation("dr.");
  lex.AddPhrase("fever", Pcd("fever"));
  lex.AddPhrase("fever with chills", Pcd("fever_with_chills"));
  lex.AddPhrase("loss of appetite", Pcd("loss_of_appetite"));
  lex.AddPhrase("headache", Pcd("headache"));
  lex.AddWord("fewer", 50);
  lex.AddMapping(Pcd("fever"), {ConceptMapping::Kind::kProperty, VbdIri("has_Fever"),
                                Term::Boolean(true)});
  lex.AddMapping(Pcd("fever_with_chills"),
                 {ConceptMapping::Kind::kProperty, VbdIri("has_Fever"), Term::Boolean(true)});
  lex.AddMapping(Pcd("fever_with_chills"), {ConceptMapping::Kind::kProperty,
                                            VbdIri("has_Chills"), Term::Boolean(true)});
  lex.AddMapping(Pcd("headache"), {ConceptMapping::Kind::kClass, Term(), VbdIri("sick")});
  return lex;
}

TEST(EditDistanceTest, MatchesOracle) {
  std::mt19937_64 rng(5);
  const std::string alphabet = "abcde";
  for (int i = 0; i < 2000; ++i) {
    std::string a, b;
    for (std::size_t k = rng() % 8; k > 0; --k) a += alphabet[rng() % alphabet.size()];
    for (std::size_t k = rng() % 8; k > 0; --k) b += alphabet[rng() % alphabet.size()];
    std::size_t d = oracle::Levenshtein(a, b);
    ASSERT_EQ(EditDistance(a, b), d) << a << " " << b;
    for (std::size_t limit = 0; limit < 4; ++limit) {
      EXPECT_EQ(BoundedEditDistance(a, b, limit), std::min(d, limit + 1));
    }
  }
}

TEST(EditDistanceTest, NearestNames) {
  std::vector<std::string> names = {"has_Fever", "has_Fevers", "has_Rash", "has_Age"};
  EXPECT_EQ(NearestNames("has_Fevr", names, 2, 5),
            (std::vector<std::string>{"has_Fever", "has_Fevers"}));
  EXPECT_EQ(NearestNames("has_Fevr", names, 2, 1), (std::vector<std::string>{"has_Fever"}));
  EXPECT_TRUE(NearestNames("zzz", names, 2, 5).empty());
}

TEST(SentenceSplitTest, RespectsAbbreviationsAndQuotes) {
  Lexicon lex = SmallLexicon();
  std::vector<Sentence> s =
      SplitSentences("Seen by Dr. Rao today. \"Fever?\" she asked.  Then 2 doses! done", lex);
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s[0].text, "Seen by Dr. Rao today.");
  EXPECT_EQ(s[1].text, "\"Fever?\" she asked.");
  EXPECT_EQ(s[2].text, "Then 2 doses! done");
  EXPECT_EQ(s[1].begin, 23u);
}

TEST(SentenceSplitTest, GoldNotes) {
  const KnowledgeBase& kb = testing::SharedKb();
  std::istringstream in(testing::ReadFile(testing::DataDir() + "/sentence_gold.txt"));
  std::vector<std::vector<std::string>> notes(1);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] == '#') continue;
    if (line.empty()) {
      if (!notes.back().empty()) notes.emplace_back();
      continue;
    }
    notes.back().push_back(line);
  }
  std::size_t total = 0;
  for (const std::vector<std::string>& gold : notes) {
    if (gold.empty()) continue;
    std::string text;
    for (const std::string& g : gold) text += (text.empty() ? "" : " ") + g;
    std::vector<std::string> got;
    for (const Sentence& s : SplitSentences(text, kb.lexicon)) got.push_back(s.text);
    EXPECT_EQ(got, gold);
    total += gold.size();
  }
  EXPECT_EQ(total, 40u);
}

TEST(TokenizeTest, WordsPunctuationAndOffsets) {
  std::vector<Token> t = Tokenize("Joint-pain, Pt's  101.5!", 10);
  ASSERT_EQ(t.size(), 7u);
  EXPECT_EQ(t[0].text, "joint-pain");
  EXPECT_TRUE(t[0].is_word);
  EXPECT_EQ(t[0].begin, 10u);
  EXPECT_EQ(t[0].end, 20u);
  EXPECT_EQ(t[1].text, ",");
  EXPECT_FALSE(t[1].is_word);
  EXPECT_EQ(t[2].text, "pt's");
  EXPECT_EQ(t[3].text, "101");
  EXPECT_EQ(t[4].text, ".");
  EXPECT_EQ(t[6].text, "!");
}

TEST(StopwordTest, PhraseWordsSurvive) {
  Lexicon lex = SmallLexicon();
  std::vector<Token> kept = RemoveStopwords(Tokenize("the loss of appetite and fever"), lex);
  std::vector<std::string> words;
  for (const Token& t : kept) words.push_back(t.text);
  EXPECT_EQ(words, (std::vector<std::string>{"loss", "of", "appetite", "fever"}));
}

TEST(SpellCorrectTest, RanksByDistanceThenFrequency) {
  Lexicon lex = SmallLexicon();
  EXPECT_EQ(SpellCorrect("Fever", lex), (std::vector<std::string>{"fever"}));
  std::vector<std::string> c = SpellCorrect("feaver", lex);
  ASSERT_FALSE(c.empty());
  EXPECT_EQ(c.front(), "fever");
  EXPECT_EQ(c, oracle::RankCorrections("feaver", lex));
  // "feer" is one edit from fever (freq 1) and fewer (freq 50).
  EXPECT_EQ(SpellCorrect("feer", lex).front(), "fewer");
  EXPECT_TRUE(SpellCorrect("xyzzyq", lex).empty());
}

TEST(SpellCorrectPropertyTest, MatchesOracleOnShippedDictionary) {
  const Lexicon& lex = testing::SharedKb().lexicon;
  std::vector<std::string> words;
  for (const auto& [w, f] : lex.dictionary()) {
    if (w.size() >= 4) words.push_back(w);
  }
  std::sort(words.begin(), words.end());
  std::mt19937_64 rng(42);
  for (int i = 0; i < 150; ++i) {
    std::string typo = oracle::InjectTypo(words[rng() % words.size()], rng);
    ASSERT_EQ(SpellCorrect(typo, lex), oracle::RankCorrections(typo, lex)) << typo;
  }
}

TEST(ExtractTest, GreedyLongestMatch) {
  Lexicon lex = SmallLexicon();
  std::string text = "The patient has fever with chills and a headache";
  std::vector<EntityMention> m = ExtractEntities(Tokenize(text), lex, text);
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m[0].concept_iri, Pcd("fever_with_chills"));
  EXPECT_EQ(m[0].surface, "fever with chills");
  EXPECT_FALSE(m[0].corrected);
  EXPECT_EQ(m[1].concept_iri, Pcd("headache"));
}

TEST(ExtractTest, CorrectedMentionsAreFlagged) {
  Lexicon lex = SmallLexicon();
  std::vector<EntityMention> m = ExtractFromText("Patient has feaver. Also headahce.", lex);
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m[0].concept_iri, Pcd("fever"));
  EXPECT_EQ(m[0].surface, "feaver");
  EXPECT_TRUE(m[0].corrected);
  EXPECT_EQ(m[1].concept_iri, Pcd("headache"));
}

TEST(ExtractTest, ShortAndNumericWordsAreNotCorrected) {
  Lexicon lex = SmallLexicon();
  lex.AddPhrase("ok", Pcd("ok"));
  EXPECT_TRUE(ExtractFromText("ik 12 fe", lex).empty());
}

TEST(EmitRdfTest, MultiValuedMappingsAndClasses) {
  Lexicon lex = SmallLexicon();
  Term p = VbdIri("patient9");
  std::vector<Triple> t =
      EmitRdf(ExtractFromText("fever with chills, fever and headache", lex), p, lex);
  std::vector<Triple> expected = {{p, RdfType(), VbdIri("patient")},
                                  {p, RdfType(), VbdIri("sick")},
                                  {p, VbdIri("has_Chills"), Term::Boolean(true)},
                                  {p, VbdIri("has_Fever"), Term::Boolean(true)}};
  std::sort(expected.begin() + 1, expected.end());
  EXPECT_EQ(t, expected);
}

TEST(EmitRdfTest, UnmappedConceptThrows) {
  Lexicon lex = SmallLexicon();
  lex.AddPhrase("rash", Pcd("rash"));
  EXPECT_THROW(EmitRdf(ExtractFromText("rash", lex), VbdIri("p"), lex), UnmappedConceptError);
}

TEST(LexiconTest, ShippedLexiconIsComplete) {
  const Lexicon& lex = testing::SharedKb().lexicon;
  EXPECT_GT(lex.dictionary().size(), 3000u);
  EXPECT_TRUE(lex.IsAbbreviation("Dr."));
  for (const auto& [phrase, concept_iri] : lex.vocabulary()) {
    EXPECT_TRUE(lex.mappings().contains(concept_iri)) << phrase;
    std::istringstream words(phrase);
    std::string w;
    while (words >> w) EXPECT_TRUE(lex.InDictionary(w)) << w;
  }
  for (const std::string& s : lex.stopwords()) EXPECT_TRUE(lex.InDictionary(s)) << s;
}

TEST(LexiconTest, LoadErrorsNameFileAndLine) {
  testing::TempDir dir;
  auto write = [&](const std::string& name, const std::string& body) {
    std::ofstream(dir.path() + "/" + name) << body;
  };
  write("dictionary.txt", "fever\t10\n");
  write("stopwords.txt", "the\n");
  write("vocabulary.tsv", "fever\tpcd:fever\n");
  write("mapping.tsv", "# header\npcd:fever\tproperty\thas_Fever\n");
  PrefixTable prefixes = PrefixTable::Standard();
  prefixes.Set("pcd", "http://example.org/pcd#");
  try {
    LoadLexicon(dir.path(), prefixes);
    FAIL();
  } catch (const LoadError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_NE(e.file().find("mapping.tsv"), std::string::npos);
  }
  write("mapping.tsv", "pcd:fever\tproperty\thas_Fever\ttrue\n");
  EXPECT_EQ(LoadLexicon(dir.path(), prefixes).mappings().size(), 1u);
}

TEST(CorpusTest, ParsesShippedCorpus) {
  const KnowledgeBase& kb = testing::SharedKb();
  std::vector<AnnotatedSentence> corpus = ParseAnnotatedCorpus(
      testing::ReadFile(kb.directory + "/corpus/annotated.tsv"), kb.prefixes);
  EXPECT_GE(corpus.size(), 60u);
  std::set<std::string> diseases;
  for (const AnnotatedSentence& s : corpus) diseases.insert(s.disease);
  EXPECT_EQ(diseases.size(), 6u);
  EXPECT_THROW(ParseAnnotatedCorpus("only\ttwo\n", kb.prefixes), LoadError);
}

TEST(CorpusTest, CleanCorpusIsFullyExtracted) {
  const KnowledgeBase& kb = testing::SharedKb();
  ExtractionReport r = EvaluateExtraction(
      ParseAnnotatedCorpus(testing::ReadFile(kb.directory + "/corpus/annotated.tsv"),
                           kb.prefixes),
      kb.lexicon);
  EXPECT_DOUBLE_EQ(r.total.percent, 100.0);
  EXPECT_DOUBLE_EQ(r.total.recall, 100.0);
  EXPECT_EQ(r.rows.size(), 6u);
  EXPECT_EQ(r.ToTsv().substr(0, 8), "disease\t");
}

TEST(CorpusTest, EmptyCorpusReport) {
  ExtractionReport r = EvaluateExtraction({}, SmallLexicon());
  EXPECT_TRUE(r.rows.empty());
  EXPECT_DOUBLE_EQ(r.total.percent, 100.0);
}

}  // namespace
}  // namespace vbd
