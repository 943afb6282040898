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

#include "vbd/app/codec.h"

#include <string>

#include "vbd/errors.h"

namespace vbd::app {

namespace {

std::string Label(const Term& term, const PrefixTable& prefixes) {
  if (term.is_literal() || term.is_blank()) return term.value();
  if (auto abbreviated = prefixes.Abbreviate(term.value())) return *abbreviated;
  return term.value();
}

json BindingsToJson(const Bindings& bindings, const PrefixTable& prefixes) {
  json out = json::object();
  for (const auto& [name, value] : bindings) out[name] = TermToJson(value, prefixes);
  return out;
}

json RuleIds(const std::vector<std::string>& ids) { return json(ids); }

Term LiteralOf(const json& value, Datatype type) {
  if (value.is_string()) return Term::Literal(value.get<std::string>(), type);
  if (value.is_boolean()) {
    if (type != Datatype::kBoolean && type != Datatype::kString) {
      throw Error("boolean value for a " + std::string(DatatypeName(type)) +
                  " literal");
    }
    return type == Datatype::kBoolean
               ? Term::Boolean(value.get<bool>())
               : Term::String(value.get<bool>() ? "true" : "false");
  }
  if (value.is_number()) return Term::Literal(value.dump(), type);
  throw Error("object value must be a string, boolean or number");
}

}  // namespace

json TermToJson(const Term& term, const PrefixTable& prefixes) {
  return {{"value", term.value()},
          {"datatype", std::string(DatatypeName(term.datatype()))},
          {"label", Label(term, prefixes)}};
}

json TripleToJson(const Triple& triple, const PrefixTable& prefixes) {
  return {{"s", TermToJson(triple.subject, prefixes)},
          {"p", TermToJson(triple.predicate, prefixes)},
          {"o", TermToJson(triple.object, prefixes)}};
}

std::optional<Term> ResolveName(std::string_view name, const PrefixTable& prefixes) {
  if (name.empty()) return std::nullopt;
  if (name.front() == '<' && name.back() == '>' && name.size() > 2) {
    return Term::Iri(std::string(name.substr(1, name.size() - 2)));
  }
  if (name.starts_with("_:")) return Term::Iri(std::string(name));
  if (name.starts_with("http://") || name.starts_with("https://") ||
      name.starts_with("urn:")) {
    return Term::Iri(std::string(name));
  }
  if (name.find(':') != std::string_view::npos) {
    if (auto iri = prefixes.Expand(name)) return Term::Iri(*iri);
    return std::nullopt;
  }
  return VbdIri(name);
}

Term ObjectFromJson(const json& value, const std::optional<std::string>& datatype,
                    const Term& predicate, const KnowledgeBase& kb) {
  std::optional<Datatype> type;
  if (datatype) {
    type = DatatypeFromName(*datatype);
    if (!type) throw Error("unknown datatype '" + *datatype + "'");
  } else if (kb.schema.object_properties().contains(predicate) ||
             predicate == RdfType()) {
    type = Datatype::kNone;
  } else if (auto it = kb.schema.data_properties().find(predicate);
             it != kb.schema.data_properties().end() && it->second.literal_range) {
    type = it->second.literal_range;
  } else if (value.is_boolean()) {
    type = Datatype::kBoolean;
  } else if (value.is_number_integer()) {
    type = Datatype::kInteger;
  } else if (value.is_number()) {
    type = Datatype::kDecimal;
  } else {
    type = Datatype::kString;
  }
  if (*type == Datatype::kNone) {
    if (!value.is_string()) throw Error("IRI object must be a string");
    std::optional<Term> iri = ResolveName(value.get<std::string>(), kb.prefixes);
    if (!iri) throw Error("cannot resolve '" + value.get<std::string>() + "'");
    return *iri;
  }
  return LiteralOf(value, *type);
}

json RuleToJson(const Rule& rule) {
  json out = {{"id", rule.id},
              {"source", std::string(RuleSourceName(rule.source))},
              {"text", rule.text}};
  if (!rule.note.empty()) out["note"] = rule.note;
  return out;
}

json ProvenanceToJson(const std::vector<Provenance>& provenance,
                      const InferenceResult& result, const PrefixTable& prefixes) {
  json out = json::array();
  for (const Provenance& p : provenance) {
    json entry = {{"rule_id", p.rule_id},
                  {"bindings", BindingsToJson(p.bindings, prefixes)}};
    if (const Rule* rule = result.FindRule(p.rule_id)) {
      entry["rule"] = RuleToJson(*rule);
    }
    out.push_back(std::move(entry));
  }
  return out;
}

json ViolationToJson(const Violation& violation, const PrefixTable& prefixes) {
  return {{"kind", std::string(ViolationKindName(violation.kind))},
          {"subject", TermToJson(violation.subject, prefixes)},
          {"first", TripleToJson(violation.first, prefixes)},
          {"second", TripleToJson(violation.second, prefixes)},
          {"message", violation.ToString()}};
}

json SuggestionsToJson(const Suggestions& suggestions,
                       const InferenceResult& result, const PrefixTable& prefixes) {
  auto provenance = [&](const Triple& t) {
    const DerivedFact* fact = result.FindDerived(t);
    return fact ? ProvenanceToJson(fact->provenance, result, prefixes)
                : json::array();
  };
  json out;
  out["suspected"] = json::array();
  for (const SuspectedDisease& s : suggestions.suspected) {
    out["suspected"].push_back({{"disease", TermToJson(s.disease, prefixes)},
                                {"predicate", TermToJson(s.predicate, prefixes)},
                                {"rule_ids", RuleIds(s.rule_ids)}});
  }
  out["findings"] = json::array();
  for (const Finding& f : suggestions.findings) {
    out["findings"].push_back({{"triple", TripleToJson(f.triple, prefixes)},
                               {"rule_ids", RuleIds(f.rule_ids)},
                               {"provenance", provenance(f.triple)}});
  }
  out["recommended_tests"] = json::array();
  for (const RecommendedTest& t : suggestions.recommended_tests) {
    out["recommended_tests"].push_back(
        {{"test", TermToJson(t.test, prefixes)},
         {"predicate", TermToJson(t.predicate, prefixes)},
         {"rule_ids", RuleIds(t.rule_ids)}});
  }
  out["prescriptions"] = json::array();
  for (const Prescription& p : suggestions.prescriptions) {
    json entry = {{"drug", TermToJson(p.drug, prefixes)},
                  {"rule_ids", RuleIds(p.rule_ids)}};
    entry["duration_days"] = p.duration_days ? json(*p.duration_days) : json(nullptr);
    entry["day_of_course"] = p.day_of_course ? json(*p.day_of_course) : json(nullptr);
    out["prescriptions"].push_back(std::move(entry));
  }
  out["violations"] = json::array();
  for (const Violation& v : suggestions.violations) {
    out["violations"].push_back(ViolationToJson(v, prefixes));
  }
  return out;
}

json DerivedToJson(const InferenceResult& result, const PrefixTable& prefixes) {
  json out = json::array();
  for (const DerivedFact& fact : result.derived()) {
    out.push_back({{"triple", TripleToJson(fact.triple, prefixes)},
                   {"round", fact.round},
                   {"provenance", ProvenanceToJson(fact.provenance, result, prefixes)}});
  }
  return out;
}

json EventToJson(const Event& event, const PrefixTable& prefixes) {
  json out = {{"seq", event.seq},
              {"kind", std::string(EventKindName(event.kind))},
              {"at", event.at}};
  if (event.triple) out["triple"] = TripleToJson(*event.triple, prefixes);
  if (event.kind == EventKind::kRetractionMarker) out["target"] = event.target;
  if (event.kind == EventKind::kInferenceRun) out["derived"] = event.derived;
  return out;
}

json CaseToJson(const PatientCase& c, const PrefixTable& prefixes) {
  json out = {{"id", c.id}, {"patient", TermToJson(c.patient, prefixes)}};
  out["events"] = json::array();
  for (const Event& e : c.events) out["events"].push_back(EventToJson(e, prefixes));
  out["facts"] = json::array();
  for (const Triple& t : c.facts.Triples()) {
    out["facts"].push_back(TripleToJson(t, prefixes));
  }
  if (c.last_suggestions && c.last_inference) {
    out["suggestions"] =
        SuggestionsToJson(*c.last_suggestions, *c.last_inference, prefixes);
  } else {
    out["suggestions"] = nullptr;
  }
  return out;
}

json ExplanationsToJson(const Triple& fact, const std::vector<Explanation>& explanations,
                        const PrefixTable& prefixes) {
  json out = {{"fact", TripleToJson(fact, prefixes)}, {"explanations", json::array()}};
  for (const Explanation& e : explanations) {
    out["explanations"].push_back({{"rule", RuleToJson(e.rule)},
                                   {"bindings", BindingsToJson(e.bindings, prefixes)}});
  }
  return out;
}

json SolutionsToJson(const SolutionTable& table, const PrefixTable& prefixes) {
  json out = {{"header", table.header}, {"rows", json::array()}};
  for (const std::vector<Term>& row : table.rows) {
    json cells = json::array();
    for (const Term& t : row) cells.push_back(TermToJson(t, prefixes));
    out["rows"].push_back(std::move(cells));
  }
  out["count"] = table.rows.size();
  return out;
}

json KbReportToJson(const KbReport& report, const PrefixTable& prefixes) {
  json out;
  out["classes"] = report.class_count;
  out["rules"] = report.rule_count;
  out["rules_per_source"] = report.rules_per_source;
  out["fixtures"] = report.fixtures;
  out["diseases"] = json::array();
  for (const Term& d : report.diseases) out["diseases"].push_back(TermToJson(d, prefixes));
  const MetricCounts& c = report.counts;
  out["counts"] = {{"class_count", c.class_count},
                   {"subclassof_count", c.subclassof_count},
                   {"object_property_count", c.object_property_count},
                   {"data_property_count", c.data_property_count},
                   {"individual_count", c.individual_count},
                   {"disjoint_classes_count", c.disjoint_classes_count},
                   {"annotation_count", c.annotation_count},
                   {"axiom_count", c.axiom_count},
                   {"classes_with_instance", c.classes_with_instance}};
  const MetricsReport& m = report.metrics;
  out["metrics"] = {{"RR", m.rr},       {"AR", m.ar}, {"CR", m.cr},
                    {"AP", m.ap},       {"Score_rk", m.score_rk},
                    {"Score_bk", m.score_bk}};
  return out;
}

json MentionsToJson(const std::vector<EntityMention>& mentions,
                    const PrefixTable& prefixes) {
  json out = json::array();
  for (const EntityMention& m : mentions) {
    out.push_back({{"concept", TermToJson(m.concept_iri, prefixes)},
                   {"surface", m.surface},
                   {"begin", m.begin},
                   {"end", m.end},
                   {"corrected", m.corrected}});
  }
  return out;
}

}  // namespace vbd::app
