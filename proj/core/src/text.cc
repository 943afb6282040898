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

#include "vbd/text.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <utility>

#include "vbd/edit_distance.h"
#include "vbd/errors.h"

namespace vbd {

namespace {

constexpr std::size_t kMaxEdits = 2;

std::string Lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string Trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> SplitTabs(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    out.push_back(Trim(line.substr(start, tab - start)));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return out;
}

std::vector<std::string> SplitWords(std::string_view phrase) {
  std::vector<std::string> out;
  std::istringstream in{std::string(phrase)};
  std::string word;
  while (in >> word) out.push_back(Lower(word));
  return out;
}

bool IsWordChar(char c) {
  unsigned char u = static_cast<unsigned char>(c);
  return std::isalnum(u) || u >= 0x80;
}

bool IsAlphaWord(std::string_view w) {
  return !w.empty() && std::all_of(w.begin(), w.end(), [](char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '-' || c == '\'';
  });
}

// Resolves a lexicon cell: <iri>, pfx:name, bare name (empty prefix),
// "string", true/false or an integer.
Term ResolveCell(const std::string& cell, const PrefixTable& prefixes,
                 const std::string& file, std::size_t line) {
  if (cell.empty()) throw LoadError(file, line, "empty field");
  if (cell.front() == '<' && cell.back() == '>') {
    return Term::Iri(cell.substr(1, cell.size() - 2));
  }
  if (cell.size() >= 2 && cell.front() == '"' && cell.back() == '"') {
    return Term::String(cell.substr(1, cell.size() - 2));
  }
  if (cell == "true" || cell == "false") return Term::Boolean(cell == "true");
  if (std::all_of(cell.begin(), cell.end(),
                  [](char c) { return std::isdigit(static_cast<unsigned char>(c)) || c == '-'; })) {
    return Term::Literal(cell, Datatype::kInteger);
  }
  std::string prefixed = cell.find(':') == std::string::npos ? ":" + cell : cell;
  std::optional<std::string> iri = prefixes.Expand(prefixed);
  if (!iri) throw LoadError(file, line, "unknown prefix in '" + cell + "'");
  return Term::Iri(*iri);
}

template <typename Fn>
void ForEachLine(const std::string& path, bool required, Fn&& fn) {
  std::ifstream in(path);
  if (!in) {
    if (required) throw LoadError(path, 0, "cannot open file");
    return;
  }
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string trimmed = Trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    fn(line, line_no);
  }
}

// Normalized word for matching: the token itself if known or not a word,
// else the best spelling correction.
std::vector<std::string> NormalizeTokens(const std::vector<Token>& tokens,
                                         const Lexicon& lexicon,
                                         std::vector<bool>* corrected) {
  std::vector<std::string> words;
  words.reserve(tokens.size());
  if (corrected) corrected->assign(tokens.size(), false);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const Token& t = tokens[i];
    if (!t.is_word || lexicon.InDictionary(t.text) || !IsAlphaWord(t.text) ||
        t.text.size() < 3) {
      words.push_back(t.text);
      continue;
    }
    std::vector<std::string> candidates = SpellCorrect(t.text, lexicon);
    if (candidates.empty()) {
      words.push_back(t.text);
    } else {
      words.push_back(candidates.front());
      if (corrected) (*corrected)[i] = true;
    }
  }
  return words;
}

struct PhraseMatch {
  std::size_t begin;  // token index
  std::size_t length;
  const Term* concept_iri;
};

std::vector<PhraseMatch> LongestMatches(const std::vector<std::string>& words,
                                        const Lexicon& lexicon) {
  std::vector<PhraseMatch> out;
  std::size_t i = 0;
  while (i < words.size()) {
    std::size_t longest = std::min(lexicon.max_phrase_words(), words.size() - i);
    bool found = false;
    for (std::size_t n = longest; n >= 1; --n) {
      if (const Term* concept_iri = lexicon.LookupPhrase(words, i, n)) {
        out.push_back({i, n, concept_iri});
        i += n;
        found = true;
        break;
      }
    }
    if (!found) ++i;
  }
  return out;
}

}  // namespace

void Lexicon::AddWord(std::string_view word, std::uint64_t frequency) {
  dictionary_[Lower(word)] = frequency;
}

void Lexicon::AddStopword(std::string_view word) {
  stopwords_.insert(Lower(word));
}

void Lexicon::AddAbbreviation(std::string_view abbreviation) {
  abbreviations_.insert(Lower(abbreviation));
}

void Lexicon::AddPhrase(std::string_view phrase, const Term& concept_iri) {
  std::vector<std::string> words = SplitWords(phrase);
  if (words.empty()) return;
  std::string key;
  for (const std::string& w : words) {
    if (!key.empty()) key += ' ';
    key += w;
    dictionary_.try_emplace(w, 1);
  }
  vocabulary_[key] = concept_iri;
  max_phrase_words_ = std::max(max_phrase_words_, words.size());
}

void Lexicon::AddMapping(const Term& concept_iri, ConceptMapping mapping) {
  mappings_[concept_iri].push_back(std::move(mapping));
}

bool Lexicon::InDictionary(std::string_view word) const {
  return dictionary_.contains(std::string(word));
}

std::uint64_t Lexicon::Frequency(std::string_view word) const {
  auto it = dictionary_.find(std::string(word));
  return it == dictionary_.end() ? 0 : it->second;
}

bool Lexicon::IsStopword(std::string_view word) const {
  return stopwords_.contains(std::string(word));
}

bool Lexicon::IsAbbreviation(std::string_view word) const {
  return abbreviations_.contains(Lower(word));
}

const Term* Lexicon::LookupPhrase(const std::vector<std::string>& words,
                                  std::size_t begin, std::size_t n) const {
  if (begin + n > words.size()) return nullptr;
  std::string key;
  for (std::size_t i = begin; i < begin + n; ++i) {
    if (!key.empty()) key += ' ';
    key += words[i];
  }
  auto it = vocabulary_.find(key);
  return it == vocabulary_.end() ? nullptr : &it->second;
}

Lexicon LoadLexicon(const std::string& directory, const PrefixTable& prefixes) {
  Lexicon lexicon;
  const std::string dictionary = directory + "/dictionary.txt";
  ForEachLine(dictionary, true, [&](const std::string& line, std::size_t n) {
    std::vector<std::string> cells = SplitTabs(line);
    std::uint64_t frequency = 1;
    if (cells.size() > 1) {
      try {
        frequency = std::stoull(cells[1]);
      } catch (const std::exception&) {
        throw LoadError(dictionary, n, "bad frequency '" + cells[1] + "'");
      }
    }
    lexicon.AddWord(cells[0], frequency);
  });
  ForEachLine(directory + "/stopwords.txt", true,
              [&](const std::string& line, std::size_t) {
                lexicon.AddStopword(Trim(line));
              });
  ForEachLine(directory + "/abbreviations.txt", false,
              [&](const std::string& line, std::size_t) {
                lexicon.AddAbbreviation(Trim(line));
              });
  const std::string vocabulary = directory + "/vocabulary.tsv";
  ForEachLine(vocabulary, true, [&](const std::string& line, std::size_t n) {
    std::vector<std::string> cells = SplitTabs(line);
    if (cells.size() != 2) {
      throw LoadError(vocabulary, n, "expected 'phrase<TAB>concept_iri'");
    }
    std::vector<std::string> words = SplitWords(cells[0]);
    if (words.size() == 1 && lexicon.IsStopword(words[0])) {
      throw LoadError(vocabulary, n,
                      "single-word phrase '" + words[0] + "' is a stopword");
    }
    lexicon.AddPhrase(cells[0], ResolveCell(cells[1], prefixes, vocabulary, n));
  });
  const std::string mapping = directory + "/mapping.tsv";
  ForEachLine(mapping, true, [&](const std::string& line, std::size_t n) {
    std::vector<std::string> cells = SplitTabs(line);
    ConceptMapping m;
    if (cells.size() == 4 && cells[1] == "property") {
      m.kind = ConceptMapping::Kind::kProperty;
      m.predicate = ResolveCell(cells[2], prefixes, mapping, n);
      m.value = ResolveCell(cells[3], prefixes, mapping, n);
    } else if (cells.size() == 3 && cells[1] == "class") {
      m.kind = ConceptMapping::Kind::kClass;
      m.value = ResolveCell(cells[2], prefixes, mapping, n);
    } else {
      throw LoadError(mapping, n,
                      "expected 'concept_iri<TAB>property<TAB>predicate<TAB>value' "
                      "or 'concept_iri<TAB>class<TAB>class'");
    }
    lexicon.AddMapping(ResolveCell(cells[0], prefixes, mapping, n), std::move(m));
  });
  return lexicon;
}

std::vector<Sentence> SplitSentences(std::string_view text,
                                     const Lexicon& lexicon) {
  std::vector<Sentence> out;
  auto emit = [&](std::size_t begin, std::size_t end) {
    while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
    if (begin < end) {
      out.push_back({std::string(text.substr(begin, end - begin)), begin, end});
    }
  };
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c != '.' && c != '!' && c != '?') continue;
    std::size_t j = i + 1;
    while (j < text.size() && (text[j] == '"' || text[j] == '\'' ||
                               text[j] == ')' || text[j] == ']')) {
      ++j;
    }
    bool boundary = false;
    if (j == text.size()) {
      boundary = true;
    } else if (std::isspace(static_cast<unsigned char>(text[j]))) {
      std::size_t k = j;
      while (k < text.size() && std::isspace(static_cast<unsigned char>(text[k]))) ++k;
      if (k == text.size()) {
        boundary = true;
      } else {
        unsigned char next = static_cast<unsigned char>(text[k]);
        boundary = std::isupper(next) || std::isdigit(next) || next == '"' ||
                   next == '(';
      }
    }
    if (boundary && c == '.') {
      std::size_t w = i;
      while (w > start && !std::isspace(static_cast<unsigned char>(text[w - 1]))) --w;
      std::string_view word = text.substr(w, i + 1 - w);
      while (!word.empty() && (word.front() == '(' || word.front() == '"')) {
        word.remove_prefix(1);
      }
      if (lexicon.IsAbbreviation(word)) boundary = false;
    }
    if (boundary) {
      emit(start, j);
      start = j;
      i = j - 1;
    }
  }
  emit(start, text.size());
  return out;
}

std::vector<Token> Tokenize(std::string_view text, std::size_t base) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (IsWordChar(c)) {
      std::size_t start = i;
      while (i < text.size()) {
        if (IsWordChar(text[i])) {
          ++i;
        } else if ((text[i] == '-' || text[i] == '\'') && i + 1 < text.size() &&
                   IsWordChar(text[i + 1])) {
          i += 2;
        } else {
          break;
        }
      }
      out.push_back({Lower(text.substr(start, i - start)), base + start,
                     base + i, true});
      continue;
    }
    out.push_back({std::string(1, c), base + i, base + i + 1, false});
    ++i;
  }
  return out;
}

std::vector<Token> RemoveStopwords(const std::vector<Token>& tokens,
                                   const Lexicon& lexicon) {
  std::vector<std::string> words = NormalizeTokens(tokens, lexicon, nullptr);
  std::vector<bool> protect(tokens.size(), false);
  for (const PhraseMatch& m : LongestMatches(words, lexicon)) {
    for (std::size_t k = m.begin; k < m.begin + m.length; ++k) protect[k] = true;
  }
  std::vector<Token> out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (protect[i] || !lexicon.IsStopword(tokens[i].text)) out.push_back(tokens[i]);
  }
  return out;
}

std::vector<std::string> SpellCorrect(std::string_view word,
                                      const Lexicon& lexicon) {
  std::string lower = Lower(word);
  if (lexicon.InDictionary(lower)) return {lower};
  struct Candidate {
    std::size_t distance;
    std::uint64_t frequency;
    const std::string* word;
  };
  std::vector<Candidate> candidates;
  for (const auto& [entry, frequency] : lexicon.dictionary()) {
    std::size_t d = BoundedEditDistance(lower, entry, kMaxEdits);
    if (d <= kMaxEdits) candidates.push_back({d, frequency, &entry});
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& a, const Candidate& b) {
              if (a.distance != b.distance) return a.distance < b.distance;
              if (a.frequency != b.frequency) return a.frequency > b.frequency;
              return *a.word < *b.word;
            });
  std::vector<std::string> out;
  out.reserve(candidates.size());
  for (const Candidate& c : candidates) out.push_back(*c.word);
  return out;
}

std::vector<EntityMention> ExtractEntities(const std::vector<Token>& tokens,
                                           const Lexicon& lexicon,
                                           std::string_view source) {
  std::vector<bool> corrected;
  std::vector<std::string> words = NormalizeTokens(tokens, lexicon, &corrected);
  std::vector<EntityMention> out;
  for (const PhraseMatch& m : LongestMatches(words, lexicon)) {
    EntityMention mention;
    mention.concept_iri = *m.concept_iri;
    mention.begin = tokens[m.begin].begin;
    mention.end = tokens[m.begin + m.length - 1].end;
    if (mention.end <= source.size()) {
      mention.surface = std::string(source.substr(mention.begin, mention.end - mention.begin));
    }
    for (std::size_t k = m.begin; k < m.begin + m.length; ++k) {
      mention.corrected = mention.corrected || corrected[k];
    }
    out.push_back(std::move(mention));
  }
  return out;
}

std::vector<EntityMention> ExtractFromText(std::string_view text,
                                           const Lexicon& lexicon) {
  std::vector<EntityMention> out;
  for (const Sentence& s : SplitSentences(text, lexicon)) {
    std::vector<Token> tokens = Tokenize(s.text, s.begin);
    for (EntityMention& m : ExtractEntities(tokens, lexicon, text)) {
      out.push_back(std::move(m));
    }
  }
  return out;
}

std::vector<Triple> EmitRdf(const std::vector<EntityMention>& mentions,
                            const Term& patient, const Lexicon& lexicon) {
  std::set<Triple> facts;
  std::set<std::string> unmapped;
  for (const EntityMention& m : mentions) {
    auto it = lexicon.mappings().find(m.concept_iri);
    if (it == lexicon.mappings().end()) {
      unmapped.insert(m.concept_iri.ToString());
      continue;
    }
    for (const ConceptMapping& mapping : it->second) {
      if (mapping.kind == ConceptMapping::Kind::kClass) {
        facts.insert({patient, RdfType(), mapping.value});
      } else {
        facts.insert({patient, mapping.predicate, mapping.value});
      }
    }
  }
  if (!unmapped.empty()) {
    throw UnmappedConceptError({unmapped.begin(), unmapped.end()});
  }
  Triple typed{patient, RdfType(), VbdIri("patient")};
  facts.erase(typed);
  std::vector<Triple> out{typed};
  out.insert(out.end(), facts.begin(), facts.end());
  return out;
}

std::vector<AnnotatedSentence> ParseAnnotatedCorpus(
    std::string_view text, const PrefixTable& prefixes) {
  std::vector<AnnotatedSentence> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string trimmed = Trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    std::vector<std::string> cells = SplitTabs(line);
    if (cells.size() != 3) {
      throw LoadError("corpus", line_no,
                      "expected 'disease<TAB>sentence<TAB>concepts'");
    }
    AnnotatedSentence sentence{cells[0], cells[1], {}};
    std::stringstream concept_list(cells[2]);
    std::string concept_iri;
    while (std::getline(concept_list, concept_iri, ',')) {
      concept_iri = Trim(concept_iri);
      if (!concept_iri.empty()) {
        sentence.gold.push_back(ResolveCell(concept_iri, prefixes, "corpus", line_no));
      }
    }
    out.push_back(std::move(sentence));
  }
  return out;
}

std::string ExtractionReport::ToTsv() const {
  std::string out = "disease\textracted\tmatching\tgold\tpercent\trecall\n";
  char buf[64];
  auto row = [&](const ExtractionRow& r) {
    std::snprintf(buf, sizeof(buf), "%.2f\t%.2f", r.percent, r.recall);
    out += r.disease + '\t' + std::to_string(r.extracted) + '\t' +
           std::to_string(r.matching) + '\t' + std::to_string(r.gold) + '\t' +
           buf + '\n';
  };
  for (const ExtractionRow& r : rows) row(r);
  row(total);
  return out;
}

ExtractionReport EvaluateExtraction(
    const std::vector<AnnotatedSentence>& corpus, const Lexicon& lexicon) {
  std::map<std::string, ExtractionRow> by_disease;
  ExtractionRow total{"total"};
  for (const AnnotatedSentence& s : corpus) {
    std::vector<EntityMention> mentions = ExtractFromText(s.text, lexicon);
    std::multiset<Term> gold(s.gold.begin(), s.gold.end());
    std::size_t matching = 0;
    for (const EntityMention& m : mentions) {
      auto it = gold.find(m.concept_iri);
      if (it != gold.end()) {
        gold.erase(it);
        ++matching;
      }
    }
    ExtractionRow& r = by_disease[s.disease];
    r.disease = s.disease;
    for (ExtractionRow* target : {&r, &total}) {
      target->extracted += mentions.size();
      target->matching += matching;
      target->gold += s.gold.size();
    }
  }
  auto finish = [](ExtractionRow& r) {
    r.percent = r.extracted ? 100.0 * static_cast<double>(r.matching) /
                                  static_cast<double>(r.extracted)
                            : (r.gold ? 0.0 : 100.0);
    r.recall = r.gold ? 100.0 * static_cast<double>(r.matching) /
                            static_cast<double>(r.gold)
                      : 100.0;
  };
  ExtractionReport report;
  for (auto& [disease, r] : by_disease) {
    finish(r);
    report.rows.push_back(r);
  }
  finish(total);
  report.total = total;
  return report;
}

}  // namespace vbd
