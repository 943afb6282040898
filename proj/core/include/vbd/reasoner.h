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

#ifndef VBD_REASONER_H_
#define VBD_REASONER_H_

#include <cstddef>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "vbd/graph.h"
#include "vbd/ontology.h"
#include "vbd/rules.h"

namespace vbd {

using Bindings = std::vector<std::pair<std::string, Term>>;

// One justification of a derived triple: the rule and the values its
// variables took.
struct Provenance {
  std::string rule_id;
  Bindings bindings;  // in the rule's variable order

  auto operator<=>(const Provenance&) const = default;
  bool operator==(const Provenance&) const = default;
};

struct DerivedFact {
  Triple triple;
  std::vector<Provenance> provenance;  // distinct, sorted
  std::size_t round = 0;               // fixpoint iteration that added it
};

enum class ViolationKind { kDisjointMembership, kConflictingBoolean };

std::string_view ViolationKindName(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  Term subject;
  Triple first;   // the two clashing statements
  Triple second;

  std::string ToString() const;
  auto operator<=>(const Violation&) const = default;
  bool operator==(const Violation&) const = default;
};

enum class EvalStrategy {
  kSemiNaive,  // delta-driven
  kNaive,      // re-evaluates every rule against the whole graph each round
};

struct InferenceOptions {
  EvalStrategy strategy = EvalStrategy::kSemiNaive;
  // When false, swrlb:equal and string constants in body property atoms
  // compare plain strings case-insensitively.
  bool strict_equality = false;
};

class InferenceResult {
 public:
  // Input graph plus every derived triple.
  const Graph& graph() const { return graph_; }
  // Ordered by (round, triple).
  const std::vector<DerivedFact>& derived() const { return derived_; }
  const std::vector<Violation>& violations() const { return violations_; }
  const std::vector<Rule>& rules() const { return rules_; }
  std::size_t rounds() const { return rounds_; }

  // nullptr if the triple was not derived.
  const DerivedFact* FindDerived(const Triple& triple) const;
  const Rule* FindRule(const std::string& id) const;

 private:
  friend InferenceResult ApplyRules(const Graph&, const std::vector<Rule>&,
                                    const OntologySchema&,
                                    const InferenceOptions&);
  Graph graph_;
  std::vector<DerivedFact> derived_;
  std::unordered_map<IdTriple, std::size_t, IdTripleHash> derived_index_;
  std::vector<Violation> violations_;
  std::vector<Rule> rules_;
  std::size_t rounds_ = 0;
};

// Least fixpoint of the rules over `graph`. Class atoms C(?x) match
// (?x rdf:type D) for every D that `schema` places under C. Head atoms are
// instantiated independently; instantiations with a literal in subject
// position are dropped. Violations are computed on the final graph.
InferenceResult ApplyRules(const Graph& graph, const std::vector<Rule>& rules,
                           const OntologySchema& schema,
                           const InferenceOptions& options = InferenceOptions());

struct Explanation {
  Rule rule;
  Bindings bindings;
};

// Every justification of a derived triple. Throws NotDerivedError with
// reason kAsserted if the triple was an input fact, kAbsent otherwise.
std::vector<Explanation> Explain(const InferenceResult& result,
                                 const Triple& fact);

// Individuals typed (directly or via subclasses) into two disjoint classes,
// and subject/property pairs holding both boolean true and false.
std::vector<Violation> CheckConsistency(const Graph& graph,
                                        const OntologySchema& schema);

}  // namespace vbd

#endif  // VBD_REASONER_H_
