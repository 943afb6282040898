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

#include "vbd/dss.h"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "vbd/edit_distance.h"
#include "vbd/errors.h"

namespace vbd {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string NowUtc() {
  auto now = std::chrono::system_clock::now();
  std::time_t seconds = std::chrono::system_clock::to_time_t(now);
  auto millis = std::chrono::duration_cast<std::chrono::milliseconds>(
                    now.time_since_epoch()) %
                1000;
  std::tm tm{};
  gmtime_r(&seconds, &tm);
  char buf[40];
  std::size_t n = std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%S", &tm);
  std::snprintf(buf + n, sizeof(buf) - n, ".%03dZ", static_cast<int>(millis.count()));
  return buf;
}

Event& AppendEvent(PatientCase& c, Event event) {
  event.seq = c.events.size() + 1;
  event.at = NowUtc();
  if (!c.events.empty() && event.at < c.events.back().at) {
    event.at = c.events.back().at;
  }
  c.events.push_back(std::move(event));
  return c.events.back();
}

void CheckPredicate(const Term& predicate, const Term& object,
                    const KnowledgeBase& kb) {
  if (predicate == RdfType()) {
    if (object.is_iri() && kb.schema.HasClass(object)) return;
    throw UndeclaredPredicateError(
        object.ToString(),
        NearestNames(object.is_iri() ? object.LocalName() : object.value(),
                     kb.DeclaredNames(), 2, 3));
  }
  if (kb.schema.IsProperty(predicate)) return;
  std::string local(predicate.is_iri() ? predicate.LocalName() : predicate.value());
  throw UndeclaredPredicateError(local,
                                 NearestNames(local, kb.DeclaredNames(), 2, 3));
}

std::vector<std::string> RuleIds(const DerivedFact& fact) {
  std::set<std::string> ids;
  for (const Provenance& p : fact.provenance) ids.insert(p.rule_id);
  return {ids.begin(), ids.end()};
}

void InvalidateInference(PatientCase& c) {
  c.last_inference.reset();
  c.last_suggestions.reset();
}

}  // namespace

std::string_view EventKindName(EventKind kind) {
  switch (kind) {
    case EventKind::kCaseCreated: return "case_created";
    case EventKind::kAssertion: return "assertion";
    case EventKind::kRetractionMarker: return "retraction_marker";
    case EventKind::kInferenceRun: return "inference_run";
  }
  return "";
}

bool EventKindFromName(std::string_view name, EventKind* out) {
  for (EventKind k : {EventKind::kCaseCreated, EventKind::kAssertion,
                      EventKind::kRetractionMarker, EventKind::kInferenceRun}) {
    if (EventKindName(k) == name) {
      *out = k;
      return true;
    }
  }
  return false;
}

Suggestions MakeSuggestions(const InferenceResult& result, const Term& patient,
                            const KnowledgeBase& kb) {
  Suggestions out;
  auto attribute = [&](const Term& drug, SuggestionBucket bucket) {
    std::optional<std::int64_t> value;
    for (const BucketRule& b : kb.buckets) {
      if (b.bucket != bucket) continue;
      for (const Triple& t : result.graph().Match({drug, b.predicate, std::nullopt})) {
        if (auto n = t.object.AsInteger()) value = value ? std::min(*value, *n) : *n;
      }
    }
    return value;
  };
  for (const DerivedFact& fact : result.derived()) {
    const Triple& t = fact.triple;
    if (t.subject != patient) continue;
    const BucketRule* bucket = kb.FindBucket(t.predicate);
    if (!bucket) continue;
    switch (bucket->bucket) {
      case SuggestionBucket::kSuspected:
        if (t.object.AsBoolean() == true) {
          out.suspected.push_back({bucket->target, t.predicate, RuleIds(fact)});
        }
        break;
      case SuggestionBucket::kFindings:
        out.findings.push_back({t, RuleIds(fact)});
        break;
      case SuggestionBucket::kRecommendedTests:
        if (t.object.is_iri()) {
          out.recommended_tests.push_back({t.object, t.predicate, RuleIds(fact)});
        }
        break;
      case SuggestionBucket::kPrescriptions:
        if (t.object.is_iri()) {
          out.prescriptions.push_back(
              {t.object, attribute(t.object, SuggestionBucket::kPrescriptionDuration),
               attribute(t.object, SuggestionBucket::kPrescriptionDay),
               RuleIds(fact)});
        }
        break;
      case SuggestionBucket::kPrescriptionDuration:
      case SuggestionBucket::kPrescriptionDay:
        break;
    }
  }
  auto by = [](auto key) {
    return [key](const auto& a, const auto& b) { return key(a) < key(b); };
  };
  std::sort(out.suspected.begin(), out.suspected.end(),
            by([](const SuspectedDisease& s) { return std::tie(s.disease, s.predicate); }));
  std::sort(out.findings.begin(), out.findings.end(),
            by([](const Finding& f) { return f.triple; }));
  std::sort(out.recommended_tests.begin(), out.recommended_tests.end(),
            by([](const RecommendedTest& r) { return std::tie(r.test, r.predicate); }));
  std::sort(out.prescriptions.begin(), out.prescriptions.end(),
            by([](const Prescription& p) { return p.drug; }));
  // One prescription entry per drug, merging rule ids from alias predicates.
  std::vector<Prescription> merged;
  for (Prescription& p : out.prescriptions) {
    if (!merged.empty() && merged.back().drug == p.drug) {
      std::set<std::string> ids(merged.back().rule_ids.begin(), merged.back().rule_ids.end());
      ids.insert(p.rule_ids.begin(), p.rule_ids.end());
      merged.back().rule_ids.assign(ids.begin(), ids.end());
    } else {
      merged.push_back(std::move(p));
    }
  }
  out.prescriptions = std::move(merged);
  out.violations = result.violations();
  return out;
}

bool IsValidCaseId(std::string_view id) {
  if (id.empty() || id.size() > 64 || id.front() == '.') return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' ||
           c == '-';
  });
}

Graph ReplayEvents(const std::vector<Event>& events) {
  std::set<std::uint64_t> retracted;
  for (const Event& e : events) {
    if (e.kind == EventKind::kRetractionMarker) retracted.insert(e.target);
  }
  Graph facts;
  for (const Event& e : events) {
    if ((e.kind == EventKind::kCaseCreated || e.kind == EventKind::kAssertion) &&
        e.triple && !retracted.contains(e.seq)) {
      facts.Insert(*e.triple);
    }
  }
  return facts;
}

PatientCase CreateCase(const std::string& id, const Term& patient,
                       const std::vector<std::pair<Term, Term>>& demographics,
                       const KnowledgeBase& kb) {
  if (!IsValidCaseId(id)) throw CaseError("invalid case id '" + id + "'");
  if (!patient.is_iri()) throw CaseError("patient must be an IRI");
  for (const auto& [property, value] : demographics) {
    CheckPredicate(property, value, kb);
  }
  PatientCase c;
  c.id = id;
  c.patient = patient;
  Event created;
  created.kind = EventKind::kCaseCreated;
  created.triple = Triple{patient, RdfType(), VbdIri("patient")};
  AppendEvent(c, std::move(created));
  for (const auto& [property, value] : demographics) {
    Event e;
    e.kind = EventKind::kAssertion;
    e.triple = Triple{patient, property, value};
    AppendEvent(c, std::move(e));
  }
  c.facts = ReplayEvents(c.events);
  return c;
}

const Event& AssertObservation(PatientCase& c, const Term& predicate,
                               const Term& object, const KnowledgeBase& kb) {
  CheckPredicate(predicate, object, kb);
  Triple t{c.patient, predicate, object};
  Event e;
  e.kind = EventKind::kAssertion;
  e.triple = t;
  const Event& added = AppendEvent(c, std::move(e));
  c.facts.Insert(t);
  InvalidateInference(c);
  return added;
}

const Event& Retract(PatientCase& c, std::uint64_t seq) {
  if (seq == 0 || seq > c.events.size() ||
      c.events[seq - 1].kind != EventKind::kAssertion) {
    throw CaseError("event " + std::to_string(seq) + " is not an assertion");
  }
  for (const Event& e : c.events) {
    if (e.kind == EventKind::kRetractionMarker && e.target == seq) {
      throw CaseError("assertion " + std::to_string(seq) + " is already retracted");
    }
  }
  Event e;
  e.kind = EventKind::kRetractionMarker;
  e.target = seq;
  const Event& added = AppendEvent(c, std::move(e));
  c.facts = ReplayEvents(c.events);
  InvalidateInference(c);
  return added;
}

const Suggestions& RunInference(PatientCase& c, const KnowledgeBase& kb) {
  auto result = std::make_shared<InferenceResult>(
      ApplyRules(Union(kb.ontology, c.facts), kb.rules, kb.schema));
  c.last_suggestions = MakeSuggestions(*result, c.patient, kb);
  Event e;
  e.kind = EventKind::kInferenceRun;
  e.derived = result->derived().size();
  AppendEvent(c, std::move(e));
  c.last_inference = std::move(result);
  return *c.last_suggestions;
}

std::vector<Explanation> ExplainFact(PatientCase& c, const Triple& fact,
                                     const KnowledgeBase& kb) {
  if (!c.last_inference) {
    c.last_inference = std::make_shared<InferenceResult>(
        ApplyRules(Union(kb.ontology, c.facts), kb.rules, kb.schema));
    c.last_suggestions = MakeSuggestions(*c.last_inference, c.patient, kb);
  }
  return Explain(*c.last_inference, fact);
}

std::string EncodeEvent(const Event& event) {
  json j;
  j["seq"] = event.seq;
  j["kind"] = EventKindName(event.kind);
  if (event.triple) {
    j["s"] = event.triple->subject.value();
    j["p"] = event.triple->predicate.value();
    j["o"] = event.triple->object.value();
    j["datatype"] = DatatypeName(event.triple->object.datatype());
  }
  j["at"] = event.at;
  if (event.kind == EventKind::kRetractionMarker) j["target"] = event.target;
  if (event.kind == EventKind::kInferenceRun) j["derived"] = event.derived;
  return j.dump();
}

Event DecodeEvent(std::string_view line) {
  json j = json::parse(line);  // throws json::exception
  Event e;
  e.seq = j.at("seq").get<std::uint64_t>();
  if (!EventKindFromName(j.at("kind").get<std::string>(), &e.kind)) {
    throw CaseError("unknown event kind");
  }
  e.at = j.at("at").get<std::string>();
  if (j.contains("s")) {
    std::string datatype = j.at("datatype").get<std::string>();
    std::optional<Datatype> dt = DatatypeFromName(datatype);
    if (!dt) throw CaseError("unknown datatype '" + datatype + "'");
    std::string o = j.at("o").get<std::string>();
    e.triple = Triple{Term::Iri(j.at("s").get<std::string>()),
                      Term::Iri(j.at("p").get<std::string>()),
                      *dt == Datatype::kNone ? Term::Iri(o) : Term::Literal(o, *dt)};
  }
  if (e.kind == EventKind::kRetractionMarker) e.target = j.at("target").get<std::uint64_t>();
  if (e.kind == EventKind::kInferenceRun) e.derived = j.at("derived").get<std::size_t>();
  return e;
}

void SaveCase(const PatientCase& c, const std::string& root) {
  fs::create_directories(root);
  fs::path path = fs::path(root) / c.id;
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw CaseError("cannot write " + tmp.string());
    for (const Event& e : c.events) out << EncodeEvent(e) << '\n';
    if (!out.flush()) throw CaseError("cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

LoadedCase LoadCase(const std::string& root, const std::string& id) {
  if (!IsValidCaseId(id)) throw NotFoundError("no case '" + id + "'");
  fs::path path = fs::path(root) / id;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError("no case '" + id + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();

  LoadedCase loaded;
  PatientCase& c = loaded.value;
  c.id = id;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    const bool complete = nl != std::string::npos;
    std::string_view line(text.data() + pos, (complete ? nl : text.size()) - pos);
    pos = complete ? nl + 1 : text.size();
    if (line.empty()) continue;
    const std::uint64_t expected = c.events.size() + 1;
    Event e;
    try {
      e = DecodeEvent(line);
    } catch (const std::exception& ex) {
      if (!complete) {
        loaded.warnings.push_back("dropped partial final line of case '" + id +
                                  "' (event " + std::to_string(expected) + ")");
        break;
      }
      throw CaseError("corrupt event log for case '" + id + "' at seq " +
                      std::to_string(expected) + ": " + ex.what());
    }
    if (e.seq != expected) {
      throw CaseError("event log for case '" + id + "' expected seq " +
                      std::to_string(expected) + ", found " + std::to_string(e.seq));
    }
    if (expected == 1) {
      if (e.kind != EventKind::kCaseCreated || !e.triple) {
        throw CaseError("event log for case '" + id + "' does not start with case_created");
      }
      c.patient = e.triple->subject;
    }
    c.events.push_back(std::move(e));
  }
  if (c.events.empty()) throw CaseError("event log for case '" + id + "' is empty");
  c.facts = ReplayEvents(c.events);
  return loaded;
}

CaseStore::CaseStore(std::string root, const KnowledgeBase& kb)
    : root_(std::move(root)), kb_(kb) {
  fs::create_directories(root_);
}

std::shared_ptr<CaseStore::Slot> CaseStore::Acquire(const std::string& id) {
  std::lock_guard<std::mutex> lock(mu_);
  std::shared_ptr<Slot>& slot = slots_[id];
  if (!slot) slot = std::make_shared<Slot>();
  return slot;
}

PatientCase& CaseStore::Loaded(Slot& slot, const std::string& id) {
  if (!slot.value) slot.value = LoadCase(root_, id).value;
  return *slot.value;
}

void CaseStore::Append(const std::string& id, const Event& event) {
  std::ofstream out(fs::path(root_) / id, std::ios::binary | std::ios::app);
  out << EncodeEvent(event) << '\n';
  out.flush();
  if (!out) throw CaseError("cannot append to case '" + id + "'");
}

PatientCase CaseStore::Create(const std::string& id, const Term& patient,
                              const std::vector<std::pair<Term, Term>>& demographics) {
  if (!IsValidCaseId(id)) throw CaseError("invalid case id '" + id + "'");
  std::shared_ptr<Slot> slot = Acquire(id);
  std::lock_guard<std::mutex> lock(slot->mu);
  if (slot->value || fs::exists(fs::path(root_) / id)) {
    throw CaseExistsError(id);
  }
  PatientCase c = CreateCase(id, patient, demographics, kb_);
  SaveCase(c, root_);
  slot->value = c;
  return c;
}

PatientCase CaseStore::Get(const std::string& id) {
  std::shared_ptr<Slot> slot = Acquire(id);
  std::lock_guard<std::mutex> lock(slot->mu);
  return Loaded(*slot, id);
}

Event CaseStore::Assert(const std::string& id, const Term& predicate,
                        const Term& object) {
  std::shared_ptr<Slot> slot = Acquire(id);
  std::lock_guard<std::mutex> lock(slot->mu);
  PatientCase& c = Loaded(*slot, id);
  Event e = AssertObservation(c, predicate, object, kb_);
  Append(id, e);
  return e;
}

Event CaseStore::RetractAssertion(const std::string& id, std::uint64_t seq) {
  std::shared_ptr<Slot> slot = Acquire(id);
  std::lock_guard<std::mutex> lock(slot->mu);
  PatientCase& c = Loaded(*slot, id);
  Event e = Retract(c, seq);
  Append(id, e);
  return e;
}

std::pair<Suggestions, std::shared_ptr<const InferenceResult>> CaseStore::Infer(
    const std::string& id) {
  std::shared_ptr<Slot> slot = Acquire(id);
  std::lock_guard<std::mutex> lock(slot->mu);
  PatientCase& c = Loaded(*slot, id);
  Suggestions s = RunInference(c, kb_);
  Append(id, c.events.back());
  return {s, c.last_inference};
}

std::vector<Explanation> CaseStore::Explain(const std::string& id,
                                            const Triple& fact) {
  std::shared_ptr<Slot> slot = Acquire(id);
  std::lock_guard<std::mutex> lock(slot->mu);
  return ExplainFact(Loaded(*slot, id), fact, kb_);
}

std::vector<std::string> CaseStore::List() const {
  std::vector<std::string> out;
  for (const fs::directory_entry& e : fs::directory_iterator(root_)) {
    std::string name = e.path().filename().string();
    if (e.is_regular_file() && IsValidCaseId(name)) out.push_back(name);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace vbd
