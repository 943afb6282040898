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

#ifndef VBD_KB_H_
#define VBD_KB_H_

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "vbd/graph.h"
#include "vbd/metrics.h"
#include "vbd/ontology.h"
#include "vbd/rules.h"
#include "vbd/text.h"
#include "vbd/turtle.h"

namespace vbd {

enum class SuggestionBucket {
  kSuspected,
  kFindings,
  kRecommendedTests,
  kPrescriptions,
  kPrescriptionDuration,
  kPrescriptionDay,
};

std::string_view SuggestionBucketName(SuggestionBucket bucket);
bool SuggestionBucketFromName(std::string_view name, SuggestionBucket* out);

// Maps a derived predicate to the Suggestions bucket it feeds.
struct BucketRule {
  Term predicate;
  SuggestionBucket bucket;
  // For kSuspected: the disease class the predicate points at (the predicate
  // itself when absent).
  Term target;
};

struct KnowledgeBase {
  std::string directory;
  PrefixTable prefixes;
  Graph ontology;
  OntologySchema schema;
  std::vector<Rule> rules;
  Lexicon lexicon;
  std::map<std::string, Graph> fixtures;  // file stem -> facts
  std::vector<BucketRule> buckets;
  std::vector<std::string> warnings;

  const Rule* FindRule(const std::string& id) const;
  // nullptr when the predicate feeds no bucket.
  const BucketRule* FindBucket(const Term& predicate) const;
  // Declared class, object property or data property names (local names),
  // sorted.
  std::vector<std::string> DeclaredNames() const;
};

// Directory layout:
//   ontology.ttl
//   rules/<name>.rules       rule files; the stem (table2, table3, table4,
//                            prose) is the default source of its rules
//   lexicon/                 see LoadLexicon
//   fixtures/<name>.ttl      patient facts
//   suggestions.tsv          predicate <TAB> bucket [<TAB> disease class]
// Throws LoadError naming the file and line of the first problem.
KnowledgeBase LoadKb(const std::string& directory);

struct KbReport {
  std::size_t class_count = 0;
  std::size_t rule_count = 0;
  std::map<std::string, std::size_t> rules_per_source;
  std::vector<std::string> fixtures;
  std::vector<Term> diseases;  // direct subclasses of vbd:Disposition
  MetricCounts counts;
  MetricsReport metrics;

  std::string ToText() const;
};

KbReport MakeKbReport(const KnowledgeBase& kb);

}  // namespace vbd

#endif  // VBD_KB_H_
