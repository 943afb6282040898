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

#include "vbd/ontology.h"

#include <algorithm>
#include <functional>

#include "vbd/errors.h"

namespace vbd {

namespace {

Term Rdfs(std::string_view local) {
  return Term::Iri(std::string(ns::kRdfs) + std::string(local));
}
Term Owl(std::string_view local) {
  return Term::Iri(std::string(ns::kOwl) + std::string(local));
}

bool IsMetaType(const Term& t) {
  static const std::set<Term> kMeta = {
      Owl("Class"),          Rdfs("Class"),          Owl("ObjectProperty"),
      Owl("DatatypeProperty"), Owl("AnnotationProperty"), Owl("Ontology"),
      Owl("NamedIndividual"), Owl("Restriction"),
      Term::Iri(std::string(ns::kRdf) + "Property")};
  return kMeta.contains(t);
}

}  // namespace

OntologySchema OntologySchema::Build(const Graph& graph) {
  OntologySchema schema;
  const Term type = RdfType();
  const Term owl_class = Owl("Class");
  const Term rdfs_class = Rdfs("Class");
  const Term object_property = Owl("ObjectProperty");
  const Term data_property = Owl("DatatypeProperty");
  const Term named_individual = Owl("NamedIndividual");
  const Term subclass_of = Rdfs("subClassOf");
  const Term domain = Rdfs("domain");
  const Term range = Rdfs("range");
  const Term disjoint = Owl("disjointWith");

  std::vector<Triple> triples = graph.Triples();
  for (const Triple& t : triples) {
    if (t.predicate == type) {
      if (t.object == owl_class || t.object == rdfs_class) {
        schema.classes_.insert(t.subject);
      } else if (t.object == object_property) {
        schema.object_properties_[t.subject];
      } else if (t.object == data_property) {
        schema.data_properties_[t.subject];
      }
    } else if (t.predicate == subclass_of && t.object.is_iri()) {
      schema.classes_.insert(t.subject);
      schema.classes_.insert(t.object);
      schema.subclass_edges_.emplace(t.subject, t.object);
    } else if (t.predicate == disjoint && t.object.is_iri()) {
      schema.classes_.insert(t.subject);
      schema.classes_.insert(t.object);
      schema.disjoint_pairs_.insert(std::minmax(t.subject, t.object));
    }
  }

  for (const Triple& t : triples) {
    if (t.predicate == domain && t.object.is_iri()) {
      if (auto it = schema.object_properties_.find(t.subject);
          it != schema.object_properties_.end()) {
        it->second.domain = t.object;
      } else if (auto jt = schema.data_properties_.find(t.subject);
                 jt != schema.data_properties_.end()) {
        jt->second.domain = t.object;
      }
    } else if (t.predicate == range && t.object.is_iri()) {
      if (auto it = schema.object_properties_.find(t.subject);
          it != schema.object_properties_.end()) {
        it->second.range = t.object;
      } else if (auto jt = schema.data_properties_.find(t.subject);
                 jt != schema.data_properties_.end()) {
        jt->second.literal_range = DatatypeFromName(t.object.value());
      }
    } else if (t.predicate == type && !IsMetaType(t.object)) {
      std::set<Term>& memberships = schema.individuals_[t.subject];
      if (schema.classes_.contains(t.object)) {
        memberships.insert(t.object);
      } else {
        schema.warnings_.push_back("individual " + t.subject.ToString() +
                                   " typed with undeclared class " +
                                   t.object.ToString());
      }
    } else if (t.predicate == type && t.object == named_individual) {
      schema.individuals_[t.subject];
    }
  }

  schema.ComputeClosure();
  return schema;
}

void OntologySchema::ComputeClosure() {
  std::unordered_map<TermId, std::vector<TermId>> parents;
  std::unordered_map<TermId, std::vector<TermId>> children;
  std::vector<TermId> ids;
  for (const Term& c : classes_) {
    TermId id = Intern(c);
    ids.push_back(id);
    parents[id];
    children[id];
  }
  for (const auto& [child, parent] : subclass_edges_) {
    TermId c = Intern(child);
    TermId p = Intern(parent);
    parents[c].push_back(p);
    children[p].push_back(c);
  }

  // Cycle detection by iterative colouring DFS over parent edges.
  enum Colour : char { kWhite, kGrey, kBlack };
  std::unordered_map<TermId, Colour> colour;
  for (TermId root : ids) {
    if (colour[root] != kWhite) continue;
    std::vector<std::pair<TermId, std::size_t>> stack{{root, 0}};
    colour[root] = kGrey;
    while (!stack.empty()) {
      auto& [node, next] = stack.back();
      const std::vector<TermId>& up = parents[node];
      if (next < up.size()) {
        TermId p = up[next++];
        if (colour[p] == kGrey) {
          throw SchemaError("subclass cycle through " + Resolve(p).ToString());
        }
        if (colour[p] == kWhite) {
          colour[p] = kGrey;
          stack.emplace_back(p, 0);
        }
      } else {
        colour[node] = kBlack;
        stack.pop_back();
      }
    }
  }

  auto reach = [](TermId start,
                  std::unordered_map<TermId, std::vector<TermId>>& edges) {
    std::vector<TermId> out{start};
    std::vector<TermId> frontier{start};
    std::set<TermId> seen{start};
    while (!frontier.empty()) {
      TermId n = frontier.back();
      frontier.pop_back();
      for (TermId m : edges[n]) {
        if (seen.insert(m).second) {
          out.push_back(m);
          frontier.push_back(m);
        }
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  };
  for (TermId id : ids) {
    descendants_[id] = reach(id, children);
    ancestors_[id] = reach(id, parents);
  }
}

bool OntologySchema::IsSubclassOf(const Term& sub, const Term& super) const {
  if (!HasClass(sub)) throw SchemaError("unknown class " + sub.ToString());
  if (!HasClass(super)) throw SchemaError("unknown class " + super.ToString());
  const std::vector<TermId>& up = ancestors_.at(Intern(sub));
  return std::binary_search(up.begin(), up.end(), Intern(super));
}

std::set<Term> OntologySchema::InstancesOf(const Term& c,
                                           Membership membership) const {
  if (!HasClass(c)) throw SchemaError("unknown class " + c.ToString());
  std::set<Term> out;
  for (const auto& [individual, types] : individuals_) {
    for (const Term& t : types) {
      if (t == c || (membership == Membership::kInferred &&
                     IsSubclassOf(t, c))) {
        out.insert(individual);
        break;
      }
    }
  }
  return out;
}

std::vector<TermId> OntologySchema::DescendantIds(TermId c) const {
  auto it = descendants_.find(c);
  if (it == descendants_.end()) return {c};
  return it->second;
}

std::vector<TermId> OntologySchema::AncestorIds(TermId c) const {
  auto it = ancestors_.find(c);
  if (it == ancestors_.end()) return {c};
  return it->second;
}

std::size_t OntologySchema::CountClassesWithInstances(
    Membership membership) const {
  std::set<TermId> populated;
  for (const auto& [individual, types] : individuals_) {
    for (const Term& t : types) {
      TermId id = Intern(t);
      if (membership == Membership::kDirect) {
        populated.insert(id);
      } else {
        for (TermId a : ancestors_.at(id)) populated.insert(a);
      }
    }
  }
  return populated.size();
}

MetricCounts CountMetrics(const OntologySchema& schema, const Graph& graph,
                          Membership membership) {
  MetricCounts counts;
  counts.class_count = schema.classes().size();
  counts.subclassof_count = schema.subclass_edges().size();
  counts.object_property_count = schema.object_properties().size();
  counts.data_property_count = schema.data_properties().size();
  counts.individual_count = schema.individuals().size();
  counts.disjoint_classes_count = schema.disjoint_pairs().size();
  counts.axiom_count = graph.size();
  counts.classes_with_instance = schema.CountClassesWithInstances(membership);

  std::set<Term> annotation_properties = {
      Rdfs("label"), Rdfs("comment"), Rdfs("seeAlso"), Rdfs("isDefinedBy"),
      Owl("versionInfo")};
  for (const Triple& t : graph.Match({std::nullopt, RdfType(),
                                      Owl("AnnotationProperty")})) {
    annotation_properties.insert(t.subject);
  }
  for (const Term& p : annotation_properties) {
    counts.annotation_count += graph.Match({std::nullopt, p, std::nullopt}).size();
  }
  return counts;
}

std::vector<Term> ValidateBfoAlignment(const OntologySchema& schema,
                                       const BfoRoots& roots) {
  for (const Term* root : {&roots.entity, &roots.continuant, &roots.occurrent}) {
    if (!schema.HasClass(*root)) {
      throw SchemaError("BFO root class missing: " + root->ToString());
    }
  }
  const bool continuant_ok = schema.IsSubclassOf(roots.continuant, roots.entity);
  const bool occurrent_ok = schema.IsSubclassOf(roots.occurrent, roots.entity);
  std::vector<Term> violations;
  for (const Term& c : schema.classes()) {
    if (c == roots.entity) continue;
    bool aligned = (continuant_ok && schema.IsSubclassOf(c, roots.continuant)) ||
                   (occurrent_ok && schema.IsSubclassOf(c, roots.occurrent));
    if (!aligned) violations.push_back(c);
  }
  return violations;
}

}  // namespace vbd
