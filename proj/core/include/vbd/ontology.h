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

#ifndef VBD_ONTOLOGY_H_
#define VBD_ONTOLOGY_H_

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "vbd/graph.h"

namespace vbd {

struct PropertyInfo {
  std::optional<Term> domain;
  std::optional<Term> range;  // object properties: class IRI
  std::optional<Datatype> literal_range;  // data properties
};

// Whether class membership follows subclass edges.
enum class Membership { kDirect, kInferred };

// Schema view of a graph: classes, subclass edges, properties, individuals
// and disjointness, read from the rdf/rdfs/owl vocabulary. Immutable after
// Build().
class OntologySchema {
 public:
  OntologySchema() = default;

  // Throws SchemaError if the asserted subclass edges contain a cycle.
  // Individuals typed with undeclared classes are reported in warnings().
  static OntologySchema Build(const Graph& graph);

  const std::set<Term>& classes() const { return classes_; }
  const std::set<std::pair<Term, Term>>& subclass_edges() const {
    return subclass_edges_;
  }
  const std::map<Term, PropertyInfo>& object_properties() const {
    return object_properties_;
  }
  const std::map<Term, PropertyInfo>& data_properties() const {
    return data_properties_;
  }
  // Individual -> asserted (declared) classes.
  const std::map<Term, std::set<Term>>& individuals() const {
    return individuals_;
  }
  // Unordered pairs stored with first < second.
  const std::set<std::pair<Term, Term>>& disjoint_pairs() const {
    return disjoint_pairs_;
  }
  const std::vector<std::string>& warnings() const { return warnings_; }

  bool HasClass(const Term& c) const { return classes_.contains(c); }
  bool IsProperty(const Term& p) const {
    return object_properties_.contains(p) || data_properties_.contains(p);
  }

  // Reflexive-transitive subclass test. Throws SchemaError for unknown
  // classes.
  bool IsSubclassOf(const Term& sub, const Term& super) const;

  // Members of `c` (and of its subclasses when kInferred). Throws
  // SchemaError for unknown classes.
  std::set<Term> InstancesOf(const Term& c, Membership membership) const;

  // Reflexive descendant / ancestor sets as interned ids. Unknown classes
  // yield just themselves.
  std::vector<TermId> DescendantIds(TermId c) const;
  std::vector<TermId> AncestorIds(TermId c) const;

  // Number of classes with at least one member.
  std::size_t CountClassesWithInstances(Membership membership) const;

 private:
  void ComputeClosure();

  std::set<Term> classes_;
  std::set<std::pair<Term, Term>> subclass_edges_;
  std::map<Term, PropertyInfo> object_properties_;
  std::map<Term, PropertyInfo> data_properties_;
  std::map<Term, std::set<Term>> individuals_;
  std::set<std::pair<Term, Term>> disjoint_pairs_;
  std::vector<std::string> warnings_;

  std::unordered_map<TermId, std::vector<TermId>> descendants_;
  std::unordered_map<TermId, std::vector<TermId>> ancestors_;
};

// Raw counts behind the ontology-quality metrics.
struct MetricCounts {
  std::size_t class_count = 0;
  std::size_t subclassof_count = 0;
  std::size_t object_property_count = 0;
  std::size_t data_property_count = 0;
  std::size_t individual_count = 0;
  std::size_t disjoint_classes_count = 0;
  std::size_t annotation_count = 0;
  std::size_t axiom_count = 0;
  // Classes with at least one member, under the membership mode passed to
  // CountMetrics.
  std::size_t classes_with_instance = 0;

  std::size_t property_count() const {
    return object_property_count + data_property_count;
  }
  bool operator==(const MetricCounts&) const = default;
};

// `axiom_count` is the number of asserted triples; `annotation_count` the
// number of annotation assertions (rdfs:label, rdfs:comment, ... and any
// declared owl:AnnotationProperty).
MetricCounts CountMetrics(const OntologySchema& schema, const Graph& graph,
                          Membership membership = Membership::kInferred);

struct BfoRoots {
  Term entity = VbdIri("Entity");
  Term continuant = VbdIri("Continuant");
  Term occurrent = VbdIri("Occurrent");
};

// Classes that do not reach the entity root through continuant or
// occurrent. Throws SchemaError if a root class is missing.
std::vector<Term> ValidateBfoAlignment(const OntologySchema& schema,
                                       const BfoRoots& roots = BfoRoots());

}  // namespace vbd

#endif  // VBD_ONTOLOGY_H_
