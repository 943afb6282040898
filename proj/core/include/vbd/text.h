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

#ifndef VBD_TEXT_H_
#define VBD_TEXT_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "vbd/term.h"
#include "vbd/turtle.h"

namespace vbd {

// How an extracted concept becomes RDF: a data/object property assertion
// (patient, predicate, value) or a class assertion (patient rdf:type value).
struct ConceptMapping {
  enum class Kind { kProperty, kClass };
  Kind kind = Kind::kProperty;
  Term predicate;  // property IRI; unused for kClass
  Term value;      // object term, or the class IRI
};

class Lexicon {
 public:
  // Word forms are stored lowercase.
  void AddWord(std::string_view word, std::uint64_t frequency);
  void AddStopword(std::string_view word);
  void AddAbbreviation(std::string_view abbreviation);
  // Adds the phrase and each of its words (at frequency 1 if absent) to the
  // dictionary.
  void AddPhrase(std::string_view phrase, const Term& concept_iri);
  // A concept may map to several assertions.
  void AddMapping(const Term& concept_iri, ConceptMapping mapping);

  bool InDictionary(std::string_view word) const;
  std::uint64_t Frequency(std::string_view word) const;
  bool IsStopword(std::string_view word) const;
  bool IsAbbreviation(std::string_view word) const;

  const std::unordered_map<std::string, std::uint64_t>& dictionary() const {
    return dictionary_;
  }
  const std::set<std::string>& stopwords() const { return stopwords_; }
  const std::set<std::string>& abbreviations() const { return abbreviations_; }
  // Phrase (space-joined lowercase words) -> concept.
  const std::map<std::string, Term>& vocabulary() const { return vocabulary_; }
  const std::map<Term, std::vector<ConceptMapping>>& mappings() const { return mappings_; }
  std::size_t max_phrase_words() const { return max_phrase_words_; }

  // Phrase of `words[begin, begin + n)` if it is in the vocabulary.
  const Term* LookupPhrase(const std::vector<std::string>& words,
                           std::size_t begin, std::size_t n) const;

 private:
  std::unordered_map<std::string, std::uint64_t> dictionary_;
  std::set<std::string> stopwords_;
  std::set<std::string> abbreviations_;
  std::map<std::string, Term> vocabulary_;
  std::map<Term, std::vector<ConceptMapping>> mappings_;
  std::size_t max_phrase_words_ = 0;
};

// Lexicon directory layout:
//   dictionary.txt     word <TAB> frequency
//   stopwords.txt      one word per line
//   abbreviations.txt  one abbreviation per line, with its final '.'
//   vocabulary.tsv     phrase <TAB> concept
//   mapping.tsv        concept <TAB> property <TAB> predicate <TAB> value
//                      concept <TAB> class <TAB> class
// Blank lines and lines starting with '#' are ignored. Names are resolved
// with `prefixes`. Throws LoadError naming the file and line.
Lexicon LoadLexicon(const std::string& directory,
                    const PrefixTable& prefixes);

struct Sentence {
  std::string text;
  std::size_t begin = 0;  // byte offsets into the source text
  std::size_t end = 0;
};

// Boundaries at '.', '!' or '?' (plus any closing quotes or brackets) that are
// followed by whitespace and an uppercase letter or digit, or by the end of
// the text. A '.' ending a known abbreviation does not split. Sentences start
// at their first non-whitespace character.
std::vector<Sentence> SplitSentences(std::string_view text,
                                     const Lexicon& lexicon);

struct Token {
  std::string text;  // lowercased
  std::size_t begin = 0;
  std::size_t end = 0;
  bool is_word = false;  // letters/digits, possibly with inner '-' or '\''
};

// Words and single punctuation characters; whitespace separates but is not
// emitted. Offsets are relative to `text` plus `base`.
std::vector<Token> Tokenize(std::string_view text, std::size_t base = 0);

// Drops stopword tokens, except those covered by a vocabulary phrase match.
std::vector<Token> RemoveStopwords(const std::vector<Token>& tokens,
                                   const Lexicon& lexicon);

// [word] if the word is in the dictionary; otherwise dictionary words within
// two edits ranked by (distance, descending frequency, word). Empty when
// nothing is close enough.
std::vector<std::string> SpellCorrect(std::string_view word,
                                      const Lexicon& lexicon);

struct EntityMention {
  Term concept_iri;
  std::string surface;  // original text of the span
  std::size_t begin = 0;
  std::size_t end = 0;
  bool corrected = false;

  bool operator==(const EntityMention&) const = default;
};

// Greedy left-to-right longest match against the vocabulary after per-token
// spell correction. Phrase words must be consecutive tokens. `source` is the
// text the token offsets refer to (for surface spans).
std::vector<EntityMention> ExtractEntities(const std::vector<Token>& tokens,
                                           const Lexicon& lexicon,
                                           std::string_view source);

// Sentence split, tokenize and extract over a whole document.
std::vector<EntityMention> ExtractFromText(std::string_view text,
                                           const Lexicon& lexicon);

// (patient rdf:type :patient) followed by one triple per distinct mapped
// concept, sorted. Throws UnmappedConceptError listing unmapped concepts.
std::vector<Triple> EmitRdf(const std::vector<EntityMention>& mentions,
                            const Term& patient, const Lexicon& lexicon);

struct AnnotatedSentence {
  std::string disease;
  std::string text;
  std::vector<Term> gold;  // concepts, repeated if mentioned repeatedly
};

// Format: disease <TAB> sentence <TAB> concept[,concept...]
std::vector<AnnotatedSentence> ParseAnnotatedCorpus(
    std::string_view text, const PrefixTable& prefixes);

struct ExtractionRow {
  std::string disease;
  std::size_t extracted = 0;  // mentions produced
  std::size_t matching = 0;   // mentions agreeing with gold (multiset)
  std::size_t gold = 0;       // gold annotations
  // matching / extracted (100 when nothing was extracted and gold is empty).
  double percent = 0;
  double recall = 0;  // matching / gold, as a percentage
};

struct ExtractionReport {
  std::vector<ExtractionRow> rows;  // sorted by disease
  ExtractionRow total;
  std::string ToTsv() const;
};

ExtractionReport EvaluateExtraction(
    const std::vector<AnnotatedSentence>& corpus, const Lexicon& lexicon);

}  // namespace vbd

#endif  // VBD_TEXT_H_
