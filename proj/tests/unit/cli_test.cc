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

#include "vbd/app/cli.h"

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "json.hpp"
#include "test_env.h"

namespace vbd::app {
namespace {

using json = nlohmann::json;

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult Vbd(std::vector<std::string> args) {
  args.insert(args.begin(), "vbd");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = RunCli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string Kb() { return testing::KbDir(); }

TEST(CliTest, UsageErrors) {
  EXPECT_EQ(Vbd({}).code, kExitUsage);
  EXPECT_EQ(Vbd({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(Vbd({"infer", "--kb", Kb()}).code, kExitUsage);
  EXPECT_EQ(Vbd({"bench", "--kb", Kb(), "--reps", "2"}).code, kExitUsage);
}

TEST(CliTest, HelpIsOk) {
  CliResult r = Vbd({"--help"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("case"), std::string::npos);
}

TEST(CliTest, LoadSummarizesKb) {
  CliResult r = Vbd({"load", "--kb", Kb()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_FALSE(r.out.empty());
  CliResult j = Vbd({"load", "--kb", Kb(), "--json"});
  ASSERT_EQ(j.code, kExitOk) << j.err;
  EXPECT_NO_THROW((void)json::parse(j.out));
}

TEST(CliTest, MissingKbIsLoadError) {
  testing::TempDir dir;
  CliResult r = Vbd({"load", "--kb", dir.path() + "/none"});
  EXPECT_EQ(r.code, kExitLoadError);
  EXPECT_NE(r.err.find("error"), std::string::npos);
}

TEST(CliTest, MetricsTable) {
  CliResult r = Vbd({"metrics", "--kb", Kb()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  for (const char* key : {"RR", "AR", "CR", "AP"}) {
    EXPECT_NE(r.out.find(key), std::string::npos) << key;
  }
}

TEST(CliTest, InferOnFixture) {
  CliResult r = Vbd({"infer", "--kb", Kb(), "--facts", Kb() + "/fixtures/patient1.ttl"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("t2r3"), std::string::npos);
}

TEST(CliTest, InferReportsViolations) {
  CliResult r = Vbd({"infer", "--kb", Kb(), "--facts",
                     testing::DataDir() + "/boolean_conflict.ttl"});
  EXPECT_EQ(r.code, kExitViolations) << r.err;
  EXPECT_NE(r.out.find("violation\t"), std::string::npos);
}

TEST(CliTest, BadFactsFileIsLoadError) {
  testing::TempDir dir;
  const std::string path = dir.path() + "/bad.ttl";
  std::ofstream(path) << ":a :b \n";
  EXPECT_EQ(Vbd({"infer", "--kb", Kb(), "--facts", path}).code, kExitLoadError);
}

TEST(CliTest, QueryAgainstFixture) {
  CliResult r = Vbd({"query", "--q", Kb() + "/queries/q1.rq", "--data",
                     Kb() + "/fixtures/RK.ttl"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.out.rfind("?", 0), 0u);
}

TEST(CliTest, ExtractToStdout) {
  testing::TempDir dir;
  const std::string note = dir.path() + "/note.txt";
  std::ofstream(note) << "Patient presents with feaver and headache.";
  CliResult r = Vbd({"extract", "--kb", Kb(), "--in", note, "--patient", ":px"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find(":has_Fever true"), std::string::npos) << r.out;
  EXPECT_NE(r.err.find("corrected"), std::string::npos);
}

TEST(CliTest, CaseWorkflow) {
  testing::TempDir dir;
  const std::string store = dir.path();
  auto run = [&](std::vector<std::string> args) {
    args.insert(args.begin(), "case");
    args.insert(args.begin() + 2, {"--kb", Kb(), "--store", store});
    return Vbd(args);
  };
  CliResult created = run({"create", "je1", "--demographic", "has_Age=7"});
  ASSERT_EQ(created.code, kExitOk) << created.err;
  EXPECT_EQ(created.out.rfind("created je1 for ", 0), 0u);
  EXPECT_EQ(run({"create", "je1"}).code, kExitFailure);

  for (const char* p : {"has_Fever", "has_Headache", "has_MildInfection",
                        "has_Neck_Stiffness"}) {
    CliResult a = run({"assert", "je1", p, "true"});
    ASSERT_EQ(a.code, kExitOk) << a.err;
    EXPECT_EQ(a.out.rfind("seq ", 0), 0u);
  }
  CliResult typo = run({"assert", "je1", "has_Fevr", "true"});
  EXPECT_EQ(typo.code, kExitFailure);
  EXPECT_NE(typo.err.find("has_Fever"), std::string::npos);

  CliResult inferred = run({"infer", "je1"});
  ASSERT_EQ(inferred.code, kExitOk) << inferred.err;
  EXPECT_NE(inferred.out.find("elisa_test"), std::string::npos) << inferred.out;

  CliResult why = run({"explain", "je1", "has_SymptomOf_JE", "true"});
  ASSERT_EQ(why.code, kExitOk) << why.err;
  EXPECT_EQ(why.out.rfind("t2r3\t", 0), 0u) << why.out;

  CliResult extra = run({"assert", "je1", "has_Rash", "true"});
  ASSERT_EQ(extra.code, kExitOk) << extra.err;
  const std::string seq = extra.out.substr(4, extra.out.find('\t') - 4);
  CliResult retracted = run({"retract", "je1", seq});
  ASSERT_EQ(retracted.code, kExitOk) << retracted.err;
  EXPECT_NE(retracted.out.find("retracted " + seq), std::string::npos);

  CliResult shown = run({"show", "je1"});
  ASSERT_EQ(shown.code, kExitOk);
  EXPECT_NE(shown.out.find("retract"), std::string::npos);
  CliResult shown_json = run({"show", "je1", "--json"});
  ASSERT_EQ(shown_json.code, kExitOk);
  EXPECT_EQ(json::parse(shown_json.out)["id"], "je1");

  EXPECT_EQ(run({"show", "missing"}).code, kExitFailure);
  EXPECT_EQ(run({"retract", "je1", "999"}).code, kExitFailure);
}

TEST(CliTest, BenchWithCheckPrintsCells) {
  CliResult r = Vbd({"bench", "--kb", Kb(), "--reps", "5"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("combined"), std::string::npos);
}

}  // namespace
}  // namespace vbd::app
