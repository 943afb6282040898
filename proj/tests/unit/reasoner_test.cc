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

#include <algorithm>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "oracles.h"
#include "test_env.h"
#include "vbd/errors.h"
#include "vbd/reasoner.h"
#include "vbd/turtle.h"

namespace vbd {
namespace {

std::set<Triple> TripleSet(const Graph& g) {
  std::vector<Triple> all = g.Triples();
  return {all.begin(), all.end()};
}

Graph Facts(const std::string& turtle) {
  return ParseTurtle(turtle, PrefixTable::Standard()).graph;
}

std::vector<Rule> Rules(const std::string& text) { return ParseRules(text).rules; }

TEST(ReasonerTest, ChainsAcrossRounds) {
  Graph g = Facts(":a a :A .");
  InferenceResult r = ApplyRules(g, Rules("A(?x) -> B(?x)\nB(?x) -> C(?x)"), {});
  EXPECT_TRUE(r.graph().Contains({VbdIri("a"), RdfType(), VbdIri("C")}));
  ASSERT_EQ(r.derived().size(), 2u);
  EXPECT_EQ(r.derived()[0].round, 1u);
  EXPECT_EQ(r.derived()[1].round, 2u);
  EXPECT_EQ(r.derived()[1].provenance[0].rule_id, "rule2");
  EXPECT_EQ(r.derived()[1].provenance[0].bindings,
            (Bindings{{"?x", VbdIri("a")}}));
}

TEST(ReasonerTest, ClassAtomsFollowSubclasses) {
  Graph onto = Facts(":Sub rdfs:subClassOf :Super . :Super a owl:Class .");
  OntologySchema schema = OntologySchema::Build(onto);
  InferenceResult r = ApplyRules(Facts(":a a :Sub ."), Rules("Super(?x) -> Hit(?x)"), schema);
  EXPECT_TRUE(r.graph().Contains({VbdIri("a"), RdfType(), VbdIri("Hit")}));
  InferenceResult none = ApplyRules(Facts(":a a :Sub ."), Rules("Super(?x) -> Hit(?x)"), {});
  EXPECT_TRUE(none.derived().empty());
}

TEST(ReasonerTest, LenientAndStrictEquality) {
  Graph g = Facts(":p a :patient ; :has_RDT_Result \"Negative\" .");
  std::vector<Rule> rules = Rules(
      "rule a: patient(?p) ^ has_RDT_Result(?p, \"negative\") -> x(?p, true)\n"
      "rule b: patient(?p) ^ has_RDT_Result(?p, ?v) ^ swrlb:equal(?v, \"NEGATIVE\") -> y(?p, true)");
  InferenceResult lenient = ApplyRules(g, rules, {});
  EXPECT_TRUE(lenient.graph().Contains({VbdIri("p"), VbdIri("x"), Term::Boolean(true)}));
  EXPECT_TRUE(lenient.graph().Contains({VbdIri("p"), VbdIri("y"), Term::Boolean(true)}));
  // Helper variables from the rewrite stay out of provenance.
  const DerivedFact* x = lenient.FindDerived({VbdIri("p"), VbdIri("x"), Term::Boolean(true)});
  ASSERT_NE(x, nullptr);
  EXPECT_EQ(x->provenance[0].bindings.size(), 1u);

  InferenceOptions strict;
  strict.strict_equality = true;
  EXPECT_TRUE(ApplyRules(g, rules, {}, strict).derived().empty());
}

TEST(ReasonerTest, LenientEqualityIgnoresNonStrings) {
  Graph g = Facts(":p :v \"1\" ; :w 1 .");
  InferenceResult r = ApplyRules(
      g, Rules("v(?p, ?a) ^ w(?p, ?b) ^ swrlb:equal(?a, ?b) -> same(?p, true)"), {});
  EXPECT_TRUE(r.derived().empty());
}

TEST(ReasonerTest, LiteralSubjectsAreDropped) {
  Graph g = Facts(":p :has_Name \"Ann\" .");
  InferenceResult r = ApplyRules(
      g, Rules("has_Name(?p, ?n) -> named(?n, true) ^ seen(?p, true)"), {});
  ASSERT_EQ(r.derived().size(), 1u);
  EXPECT_EQ(r.derived()[0].triple.predicate, VbdIri("seen"));
}

TEST(ReasonerTest, MultipleJustificationsAreKept) {
  Graph g = Facts(":p a :A , :B .");
  InferenceResult r =
      ApplyRules(g, Rules("rule one: A(?x) -> C(?x)\nrule two: B(?x) -> C(?x)"), {});
  const DerivedFact* f = r.FindDerived({VbdIri("p"), RdfType(), VbdIri("C")});
  ASSERT_NE(f, nullptr);
  ASSERT_EQ(f->provenance.size(), 2u);
  EXPECT_EQ(f->provenance[0].rule_id, "one");
  EXPECT_EQ(f->provenance[1].rule_id, "two");
  std::vector<Explanation> why = Explain(r, f->triple);
  EXPECT_EQ(why.size(), 2u);
  EXPECT_EQ(why[0].rule.id, "one");
}

TEST(ReasonerTest, ExplainDistinguishesAssertedAndAbsent) {
  Graph g = Facts(":p a :A .");
  InferenceResult r = ApplyRules(g, Rules("A(?x) -> B(?x)"), {});
  try {
    Explain(r, {VbdIri("p"), RdfType(), VbdIri("A")});
    FAIL();
  } catch (const NotDerivedError& e) {
    EXPECT_EQ(e.reason(), NotDerivedError::Reason::kAsserted);
  }
  try {
    Explain(r, {VbdIri("p"), RdfType(), VbdIri("Z")});
    FAIL();
  } catch (const NotDerivedError& e) {
    EXPECT_EQ(e.reason(), NotDerivedError::Reason::kAbsent);
  }
  EXPECT_EQ(r.FindRule("rule1")->id, "rule1");
  EXPECT_EQ(r.FindRule("nope"), nullptr);
}

TEST(ReasonerTest, RecursiveRulesTerminate) {
  Graph g;
  for (int i = 0; i < 30; ++i) {
    g.Insert({VbdIri("n" + std::to_string(i)), VbdIri("next"),
              VbdIri("n" + std::to_string(i + 1))});
  }
  InferenceResult r = ApplyRules(
      g, Rules("next(?a, ?b) -> reach(?a, ?b)\nreach(?a, ?b) ^ next(?b, ?c) -> reach(?a, ?c)"),
      {});
  // 30 + 29 + ... + 1 reach facts.
  EXPECT_EQ(r.derived().size(), 465u);
}

TEST(ConsistencyTest, DisjointMembership) {
  const KnowledgeBase& kb = testing::SharedKb();
  Graph g = ParseTurtle(testing::ReadFile(testing::DataDir() + "/disjoint_conflict.ttl")).graph;
  std::vector<Violation> v = CheckConsistency(Union(kb.ontology, g), kb.schema);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].kind, ViolationKind::kDisjointMembership);
  EXPECT_EQ(v[0].subject, VbdIri("vector_1"));
}

TEST(ConsistencyTest, ConflictingBoolean) {
  const KnowledgeBase& kb = testing::SharedKb();
  Graph g = ParseTurtle(testing::ReadFile(testing::DataDir() + "/boolean_conflict.ttl")).graph;
  std::vector<Violation> v = CheckConsistency(Union(kb.ontology, g), kb.schema);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].kind, ViolationKind::kConflictingBoolean);
  EXPECT_EQ(v[0].first.predicate, VbdIri("has_Fever"));
  EXPECT_FALSE(v[0].ToString().empty());
}

TEST(ConsistencyTest, ViolationsReportedAfterInference) {
  Graph g = Facts(":p a :A ; :flag true .");
  InferenceResult r = ApplyRules(g, Rules("A(?x) -> flag(?x, false)"), {});
  ASSERT_EQ(r.violations().size(), 1u);
  EXPECT_EQ(r.violations()[0].kind, ViolationKind::kConflictingBoolean);
}

class OracleTest : public ::testing::TestWithParam<int> {};

TEST_P(OracleTest, SemiNaiveMatchesNaiveOracle) {
  std::mt19937_64 rng(1000 + GetParam());
  for (int i = 0; i < 25; ++i) {
    oracle::RandomInstance inst = oracle::RandomRuleInstance(rng, 80, 8);
    std::set<Triple> expected = oracle::NaiveFixpoint(inst.graph, inst.rules, inst.schema);
    InferenceResult semi = ApplyRules(inst.graph, inst.rules, inst.schema);
    ASSERT_EQ(TripleSet(semi.graph()), expected) << "instance " << i;

    InferenceOptions naive;
    naive.strategy = EvalStrategy::kNaive;
    EXPECT_EQ(TripleSet(ApplyRules(inst.graph, inst.rules, inst.schema, naive).graph()),
              expected);

    std::vector<Rule> shuffled = inst.rules;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    EXPECT_EQ(TripleSet(ApplyRules(inst.graph, shuffled, inst.schema).graph()), expected);

    for (const DerivedFact& f : semi.derived()) {
      EXPECT_FALSE(inst.graph.Contains(f.triple));
      EXPECT_FALSE(f.provenance.empty());
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, OracleTest, ::testing::Range(0, 4));

TEST(ShippedKbTest, AllFixturesConsistent) {
  const KnowledgeBase& kb = testing::SharedKb();
  ASSERT_GE(kb.fixtures.size(), 8u);
  for (const auto& [name, facts] : kb.fixtures) {
    InferenceResult r = ApplyRules(Union(kb.ontology, facts), kb.rules, kb.schema);
    EXPECT_TRUE(r.violations().empty()) << name;
  }
}

}  // namespace
}  // namespace vbd
