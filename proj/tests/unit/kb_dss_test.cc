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

#include <filesystem>
#include <fstream>
#include <set>
#include <thread>

#include <gtest/gtest.h>

#include "test_env.h"
#include "vbd/dss.h"
#include "vbd/errors.h"
#include "vbd/kb.h"

namespace vbd {
namespace {

namespace fs = std::filesystem;

std::set<Term> Tests(const Suggestions& s) {
  std::set<Term> out;
  for (const RecommendedTest& t : s.recommended_tests) out.insert(t.test);
  return out;
}

std::set<Term> Drugs(const Suggestions& s) {
  std::set<Term> out;
  for (const Prescription& p : s.prescriptions) out.insert(p.drug);
  return out;
}

std::set<Term> FindingPredicates(const Suggestions& s) {
  std::set<Term> out;
  for (const Finding& f : s.findings) out.insert(f.triple.predicate);
  return out;
}

std::vector<std::pair<Term, Term>> RkDemographics() {
  return {{VbdIri("has_Name"), Term::String("RK")},
          {VbdIri("has_Gender"), Term::String("male")},
          {VbdIri("has_Age"), Term::Integer(34)}};
}

const char* kRkSymptoms[] = {"has_Anaemia", "has_Dry_Skin", "has_Recurrent_Fever",
                             "has_Weakness", "has_Weight_Loss"};

TEST(KbTest, LoadsShippedKb) {
  const KnowledgeBase& kb = testing::SharedKb();
  EXPECT_GE(kb.schema.classes().size(), 90u);
  EXPECT_EQ(kb.rules.size(), 36u);
  EXPECT_EQ(kb.fixtures.size(), 8u);
  EXPECT_TRUE(kb.fixtures.contains("RK"));
  EXPECT_EQ(kb.prefixes.Lookup("pcd"), "http://example.org/pcd#");
  const BucketRule* b = kb.FindBucket(VbdIri("has_Symptom_Of_Kalaazar"));
  ASSERT_NE(b, nullptr);
  EXPECT_EQ(b->bucket, SuggestionBucket::kSuspected);
  EXPECT_EQ(b->target, VbdIri("Kala_azar"));
  EXPECT_EQ(kb.FindBucket(VbdIri("has_Fever")), nullptr);
  std::vector<std::string> names = kb.DeclaredNames();
  EXPECT_TRUE(std::is_sorted(names.begin(), names.end()));
  EXPECT_TRUE(std::binary_search(names.begin(), names.end(), "has_Fever"));
}

TEST(KbTest, Report) {
  KbReport r = MakeKbReport(testing::SharedKb());
  EXPECT_EQ(r.rule_count, 36u);
  EXPECT_EQ(r.rules_per_source.at("table2"), 6u);
  EXPECT_EQ(r.rules_per_source.at("table4"), 6u);
  EXPECT_EQ(r.diseases.size(), 6u);
  EXPECT_NE(r.ToText().find("Score_bk"), std::string::npos);
}

TEST(KbTest, LoadErrors) {
  EXPECT_THROW(LoadKb("/nonexistent/kb"), LoadError);
  testing::TempDir dir;
  EXPECT_THROW(LoadKb(dir.path()), LoadError);
  fs::copy(testing::KbDir(), dir.path(), fs::copy_options::recursive);
  std::ofstream(dir.path() + "/rules/extra.rules") << "a(?x) ^ -> b(?x)\n";
  try {
    LoadKb(dir.path());
    FAIL();
  } catch (const LoadError& e) {
    EXPECT_NE(e.file().find("extra.rules"), std::string::npos);
    EXPECT_EQ(e.line(), 1u);
  }
}

TEST(KbTest, BucketNamesRoundTrip) {
  for (SuggestionBucket b :
       {SuggestionBucket::kSuspected, SuggestionBucket::kFindings,
        SuggestionBucket::kRecommendedTests, SuggestionBucket::kPrescriptions,
        SuggestionBucket::kPrescriptionDuration, SuggestionBucket::kPrescriptionDay}) {
    SuggestionBucket back;
    ASSERT_TRUE(SuggestionBucketFromName(SuggestionBucketName(b), &back));
    EXPECT_EQ(back, b);
  }
}

TEST(SuggestionsTest, JapaneseEncephalitisFixture) {
  const KnowledgeBase& kb = testing::SharedKb();
  InferenceResult r =
      ApplyRules(Union(kb.ontology, kb.fixtures.at("patient1")), kb.rules, kb.schema);
  Suggestions s = MakeSuggestions(r, VbdIri("patient1"), kb);
  ASSERT_EQ(s.suspected.size(), 1u);
  EXPECT_EQ(s.suspected[0].disease, VbdIri("Japanese_Encephalitis"));
  EXPECT_EQ(s.suspected[0].rule_ids, std::vector<std::string>{"t2r3"});
  EXPECT_EQ(Tests(s), (std::set<Term>{VbdIri("elisa_test"), VbdIri("hi_test")}));
  EXPECT_EQ(Drugs(s), (std::set<Term>{VbdIri("symptomatic_treatment")}));
}

TEST(SuggestionsTest, FalciparumPrescriptionCarriesDoses) {
  const KnowledgeBase& kb = testing::SharedKb();
  InferenceResult r =
      ApplyRules(Union(kb.ontology, kb.fixtures.at("malaria_pf")), kb.rules, kb.schema);
  Suggestions s = MakeSuggestions(r, VbdIri("patient2"), kb);
  std::map<Term, Prescription> by_drug;
  for (const Prescription& p : s.prescriptions) by_drug[p.drug] = p;
  ASSERT_TRUE(by_drug.contains(VbdIri("primaquine")));
  ASSERT_TRUE(by_drug.contains(VbdIri("act_al")));
  EXPECT_EQ(by_drug[VbdIri("primaquine")].duration_days, 1);
  EXPECT_EQ(by_drug[VbdIri("primaquine")].day_of_course, 2);
  EXPECT_EQ(by_drug[VbdIri("act_al")].duration_days, 3);
  EXPECT_EQ(by_drug[VbdIri("act_al")].day_of_course, std::nullopt);
}

TEST(SuggestionsTest, ControlsYieldNothing) {
  const KnowledgeBase& kb = testing::SharedKb();
  for (const char* fixture : {"control_healthy", "control_partial"}) {
    InferenceResult r =
        ApplyRules(Union(kb.ontology, kb.fixtures.at(fixture)), kb.rules, kb.schema);
    Term patient = fixture == std::string("control_healthy") ? VbdIri("patient6")
                                                             : VbdIri("patient7");
    EXPECT_TRUE(MakeSuggestions(r, patient, kb).empty()) << fixture;
  }
}

TEST(CaseTest, ValidIds) {
  EXPECT_TRUE(IsValidCaseId("rk-1_A.b"));
  EXPECT_FALSE(IsValidCaseId(""));
  EXPECT_FALSE(IsValidCaseId(".hidden"));
  EXPECT_FALSE(IsValidCaseId("a/b"));
  EXPECT_FALSE(IsValidCaseId(std::string(65, 'a')));
  EXPECT_TRUE(IsValidCaseId(std::string(64, 'a')));
}

TEST(CaseTest, CreateAssertRetractInfer) {
  const KnowledgeBase& kb = testing::SharedKb();
  PatientCase c = CreateCase("rk", VbdIri("RK"), RkDemographics(), kb);
  ASSERT_EQ(c.events.size(), 4u);
  EXPECT_EQ(c.events[0].kind, EventKind::kCaseCreated);
  EXPECT_EQ(c.facts.size(), 4u);
  for (const char* p : kRkSymptoms) AssertObservation(c, VbdIri(p), Term::Boolean(true), kb);
  const Suggestions& s = RunInference(c, kb);
  EXPECT_EQ(Tests(s), (std::set<Term>{VbdIri("aspiration_test"), VbdIri("nat_test"),
                                      VbdIri("serological_test")}));
  EXPECT_EQ(c.events.back().kind, EventKind::kInferenceRun);
  EXPECT_GT(c.events.back().derived, 0u);

  const Event& marker = Retract(c, 5);
  EXPECT_EQ(marker.target, 5u);
  EXPECT_FALSE(c.last_suggestions.has_value());
  EXPECT_FALSE(c.facts.Contains({VbdIri("RK"), VbdIri("has_Anaemia"), Term::Boolean(true)}));
  EXPECT_TRUE(RunInference(c, kb).recommended_tests.empty());
  EXPECT_THROW(Retract(c, 5), CaseError);
  EXPECT_THROW(Retract(c, 1), CaseError);
  EXPECT_THROW(Retract(c, 99), CaseError);
  EXPECT_EQ(ReplayEvents(c.events), c.facts);
}

TEST(CaseTest, UndeclaredPredicateSuggestsNames) {
  const KnowledgeBase& kb = testing::SharedKb();
  PatientCase c = CreateCase("x", VbdIri("x"), {}, kb);
  try {
    AssertObservation(c, VbdIri("has_Fevr"), Term::Boolean(true), kb);
    FAIL();
  } catch (const UndeclaredPredicateError& e) {
    EXPECT_EQ(e.predicate(), "has_Fevr");
    ASSERT_FALSE(e.suggestions().empty());
    EXPECT_EQ(e.suggestions()[0], "has_Fever");
  }
  EXPECT_THROW(AssertObservation(c, RdfType(), VbdIri("Nonexistent_Class"), kb),
               UndeclaredPredicateError);
  EXPECT_NO_THROW(AssertObservation(c, RdfType(), VbdIri("patient"), kb));
  EXPECT_THROW(CreateCase("bad id", VbdIri("x"), {}, kb), CaseError);
  EXPECT_THROW(CreateCase("y", Term::String("x"), {}, kb), CaseError);
}

TEST(CaseTest, ExplainRunsInferenceOnDemand) {
  const KnowledgeBase& kb = testing::SharedKb();
  PatientCase c = CreateCase("rk", VbdIri("RK"), {}, kb);
  for (const char* p : kRkSymptoms) AssertObservation(c, VbdIri(p), Term::Boolean(true), kb);
  std::vector<Explanation> why = ExplainFact(
      c, {VbdIri("RK"), VbdIri("has_Symptom_Of_Kalaazar"), Term::Boolean(true)}, kb);
  ASSERT_EQ(why.size(), 1u);
  EXPECT_EQ(why[0].rule.id, "t2r6");
  EXPECT_EQ(c.events.size(), 6u);  // no inference_run logged
  EXPECT_THROW(ExplainFact(c, {VbdIri("RK"), VbdIri("has_Anaemia"), Term::Boolean(true)}, kb),
               NotDerivedError);
}

TEST(EventCodecTest, RoundTripsEveryKind) {
  std::vector<Event> events(4);
  events[0] = {1, EventKind::kCaseCreated, Triple{VbdIri("p"), RdfType(), VbdIri("patient")},
               "2026-01-01T00:00:00.000Z"};
  events[1] = {2, EventKind::kAssertion,
               Triple{VbdIri("p"), VbdIri("has_Name"), Term::String("a \"q\"\n")},
               "2026-01-01T00:00:00.001Z"};
  events[2] = {3, EventKind::kRetractionMarker, std::nullopt, "2026-01-01T00:00:00.002Z", 2};
  events[3] = {4, EventKind::kInferenceRun, std::nullopt, "2026-01-01T00:00:00.003Z", 0, 17};
  for (const Event& e : events) {
    std::string line = EncodeEvent(e);
    EXPECT_EQ(line.find('\n'), std::string::npos);
    EXPECT_EQ(DecodeEvent(line), e);
  }
  EXPECT_THROW(DecodeEvent("{\"seq\":1,\"kind\":\"bogus\",\"at\":\"\"}"), CaseError);
  EXPECT_ANY_THROW(DecodeEvent("{not json"));
}

TEST(CaseLogTest, SaveLoadIdentity) {
  const KnowledgeBase& kb = testing::SharedKb();
  testing::TempDir dir;
  PatientCase c = CreateCase("rk", VbdIri("RK"), RkDemographics(), kb);
  for (const char* p : kRkSymptoms) AssertObservation(c, VbdIri(p), Term::Boolean(true), kb);
  RunInference(c, kb);
  Retract(c, 6);
  SaveCase(c, dir.path());
  LoadedCase back = LoadCase(dir.path(), "rk");
  EXPECT_TRUE(back.warnings.empty());
  EXPECT_EQ(back.value.events, c.events);
  EXPECT_EQ(back.value.facts, c.facts);
  EXPECT_EQ(back.value.patient, c.patient);
}

TEST(CaseLogTest, PartialAndCorruptLines) {
  const KnowledgeBase& kb = testing::SharedKb();
  testing::TempDir dir;
  PatientCase c = CreateCase("rk", VbdIri("RK"), RkDemographics(), kb);
  SaveCase(c, dir.path());
  const std::string path = dir.path() + "/rk";
  std::string full = testing::ReadFile(path);

  std::ofstream(path, std::ios::app) << "{\"seq\":5,\"ki";
  LoadedCase partial = LoadCase(dir.path(), "rk");
  EXPECT_EQ(partial.value.events.size(), 4u);
  EXPECT_EQ(partial.warnings.size(), 1u);

  std::ofstream(path, std::ios::trunc) << full << "garbage\n";
  EXPECT_THROW(LoadCase(dir.path(), "rk"), CaseError);

  std::string skipped = full.substr(full.find('\n') + 1);
  std::ofstream(path, std::ios::trunc) << skipped;
  EXPECT_THROW(LoadCase(dir.path(), "rk"), CaseError);

  EXPECT_THROW(LoadCase(dir.path(), "missing"), NotFoundError);
}

TEST(CaseStoreTest, KalaAzarSessionPersists) {
  const KnowledgeBase& kb = testing::SharedKb();
  testing::TempDir dir;
  {
    CaseStore store(dir.path(), kb);
    store.Create("rk", VbdIri("RK"), RkDemographics());
    EXPECT_THROW(store.Create("rk", VbdIri("RK"), {}), CaseExistsError);
    for (const char* p : kRkSymptoms) store.Assert("rk", VbdIri(p), Term::Boolean(true));
    EXPECT_EQ(Tests(store.Infer("rk").first).size(), 3u);
    store.Assert("rk", VbdIri("has_Aspiration_Result"), Term::String("positive"));
    Suggestions s = store.Infer("rk").first;
    EXPECT_EQ(FindingPredicates(s), std::set<Term>{VbdIri("has_LDonovani_Present")});
    EXPECT_TRUE(s.prescriptions.empty());
  }
  CaseStore reopened(dir.path(), kb);
  EXPECT_EQ(reopened.List(), std::vector<std::string>{"rk"});
  EXPECT_THROW(reopened.Create("rk", VbdIri("RK"), {}), CaseExistsError);
  reopened.Assert("rk", VbdIri("has_NAT_Result"), Term::String("Positive"));
  auto [s, result] = reopened.Infer("rk");
  EXPECT_EQ(Drugs(s), (std::set<Term>{VbdIri("liposomal_amphotericin_b"),
                                      VbdIri("anti_kalaazar_medicine")}));
  EXPECT_EQ(reopened.Explain("rk", {VbdIri("RK"), VbdIri("has_Three_Month_Infection"),
                                    Term::Boolean(true)})[0]
                .rule.id,
            "p_ka_three_month");
  PatientCase c = reopened.Get("rk");
  EXPECT_EQ(LoadCase(dir.path(), "rk").value.events, c.events);
  EXPECT_THROW(reopened.Get("nobody"), NotFoundError);
}

TEST(CaseStoreTest, ConcurrentAssertionsAreSerialized) {
  const KnowledgeBase& kb = testing::SharedKb();
  testing::TempDir dir;
  CaseStore store(dir.path(), kb);
  for (int c = 0; c < 4; ++c) store.Create("c" + std::to_string(c), VbdIri("p"), {});
  std::vector<std::thread> threads;
  for (int t = 0; t < 8; ++t) {
    threads.emplace_back([&store, t] {
      for (int i = 0; i < 20; ++i) {
        store.Assert("c" + std::to_string(t % 4), VbdIri("has_Age"), Term::Integer(i + 100 * t));
      }
    });
  }
  for (std::thread& t : threads) t.join();
  for (int c = 0; c < 4; ++c) {
    std::string id = "c" + std::to_string(c);
    LoadedCase loaded = LoadCase(dir.path(), id);
    ASSERT_EQ(loaded.value.events.size(), 41u);
    for (std::size_t i = 0; i < loaded.value.events.size(); ++i) {
      EXPECT_EQ(loaded.value.events[i].seq, i + 1);
    }
    EXPECT_EQ(loaded.value.events, store.Get(id).events);
  }
}

}  // namespace
}  // namespace vbd
