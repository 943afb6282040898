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

#ifndef VBD_DSS_H_
#define VBD_DSS_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "vbd/graph.h"
#include "vbd/kb.h"
#include "vbd/reasoner.h"

namespace vbd {

enum class EventKind { kCaseCreated, kAssertion, kRetractionMarker, kInferenceRun };

std::string_view EventKindName(EventKind kind);
bool EventKindFromName(std::string_view name, EventKind* out);

struct Event {
  std::uint64_t seq = 0;
  EventKind kind = EventKind::kAssertion;
  std::optional<Triple> triple;  // case_created (patient typing), assertion
  std::string at;                // UTC, ISO 8601 with milliseconds
  std::uint64_t target = 0;      // retraction_marker: seq of the assertion
  std::size_t derived = 0;       // inference_run: number of derived facts

  bool operator==(const Event&) const = default;
};

struct SuspectedDisease {
  Term disease;
  Term predicate;
  std::vector<std::string> rule_ids;
  bool operator==(const SuspectedDisease&) const = default;
};

struct Finding {
  Triple triple;
  std::vector<std::string> rule_ids;
  bool operator==(const Finding&) const = default;
};

struct RecommendedTest {
  Term test;
  Term predicate;
  std::vector<std::string> rule_ids;
  bool operator==(const RecommendedTest&) const = default;
};

struct Prescription {
  Term drug;
  std::optional<std::int64_t> duration_days;
  std::optional<std::int64_t> day_of_course;
  std::vector<std::string> rule_ids;
  bool operator==(const Prescription&) const = default;
};

// Derived facts about the patient, sorted into buckets by the KB's predicate
// table. Every entry names the rules that derived it.
struct Suggestions {
  std::vector<SuspectedDisease> suspected;
  std::vector<Finding> findings;
  std::vector<RecommendedTest> recommended_tests;
  std::vector<Prescription> prescriptions;
  std::vector<Violation> violations;

  bool empty() const {
    return suspected.empty() && findings.empty() && recommended_tests.empty() &&
           prescriptions.empty() && violations.empty();
  }
  bool operator==(const Suggestions&) const = default;
};

Suggestions MakeSuggestions(const InferenceResult& result, const Term& patient,
                            const KnowledgeBase& kb);

struct PatientCase {
  std::string id;
  Term patient;
  std::vector<Event> events;
  Graph facts;  // replay of `events`
  std::shared_ptr<const InferenceResult> last_inference;
  std::optional<Suggestions> last_suggestions;
};

// Case ids: 1-64 characters from [A-Za-z0-9_.-], not starting with '.'.
bool IsValidCaseId(std::string_view id);

// Facts graph obtained by folding `events` from empty.
Graph ReplayEvents(const std::vector<Event>& events);

// New case whose first event types `patient` as vbd:patient, followed by one
// assertion per demographic (property, literal) pair. Throws CaseError for a
// malformed id and UndeclaredPredicateError for unknown properties.
PatientCase CreateCase(const std::string& id, const Term& patient,
                       const std::vector<std::pair<Term, Term>>& demographics,
                       const KnowledgeBase& kb);

// Appends an assertion (patient, predicate, object). rdf:type assertions need
// a declared class as object.
const Event& AssertObservation(PatientCase& c, const Term& predicate,
                               const Term& object, const KnowledgeBase& kb);

// Appends a retraction marker for assertion `seq` and rebuilds the facts.
const Event& Retract(PatientCase& c, std::uint64_t seq);

// Applies the KB rules to facts + ontology, caches the result and appends an
// inference_run event.
const Suggestions& RunInference(PatientCase& c, const KnowledgeBase& kb);

// Justifications of a fact under the last inference (running one first, without
// logging, if none is cached).
std::vector<Explanation> ExplainFact(PatientCase& c, const Triple& fact,
                                     const KnowledgeBase& kb);

// One JSON object per line with fields seq, kind, s, p, o, datatype, at and,
// depending on the kind, target or derived.
std::string EncodeEvent(const Event& event);
Event DecodeEvent(std::string_view line);

// Writes the whole log to `<root>/<id>`, replacing any previous file.
void SaveCase(const PatientCase& c, const std::string& root);

struct LoadedCase {
  PatientCase value;
  std::vector<std::string> warnings;  // e.g. a dropped partial final line
};

// Throws NotFoundError if no log exists and CaseError (naming the seq) for a
// corrupt or out-of-order line. A partial final line is dropped with a warning.
LoadedCase LoadCase(const std::string& root, const std::string& id);

// Cases persisted under a root directory, one append-only log per case.
// Operations on one case are serialized; different cases proceed in parallel.
// Accessors return snapshots.
class CaseStore {
 public:
  CaseStore(std::string root, const KnowledgeBase& kb);

  PatientCase Create(const std::string& id, const Term& patient,
                     const std::vector<std::pair<Term, Term>>& demographics);
  PatientCase Get(const std::string& id);
  Event Assert(const std::string& id, const Term& predicate, const Term& object);
  Event RetractAssertion(const std::string& id, std::uint64_t seq);
  // The suggestions plus the inference result they came from.
  std::pair<Suggestions, std::shared_ptr<const InferenceResult>> Infer(
      const std::string& id);
  std::vector<Explanation> Explain(const std::string& id, const Triple& fact);
  std::vector<std::string> List() const;

  const std::string& root() const { return root_; }
  const KnowledgeBase& kb() const { return kb_; }

 private:
  struct Slot {
    std::mutex mu;
    std::optional<PatientCase> value;
  };
  std::shared_ptr<Slot> Acquire(const std::string& id);
  PatientCase& Loaded(Slot& slot, const std::string& id);
  void Append(const std::string& id, const Event& event);

  std::string root_;
  const KnowledgeBase& kb_;
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<Slot>> slots_;
};

}  // namespace vbd

#endif  // VBD_DSS_H_
