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

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vbd/app/api.h"
#include "vbd/app/codec.h"
#include "vbd/app/server.h"
#include "vbd/dss.h"
#include "vbd/errors.h"
#include "vbd/kb.h"
#include "vbd/query.h"
#include "vbd/reasoner.h"
#include "vbd/text.h"
#include "vbd/turtle.h"

namespace vbd::app {

namespace fs = std::filesystem;

namespace {

std::string ReadText(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError(path, 0, "cannot open file");
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

Graph ReadGraph(const std::string& path, const PrefixTable& prefixes) {
  try {
    return ParseTurtle(ReadText(path), prefixes).graph;
  } catch (const ParseError& e) {
    throw LoadError(path, e.line(), e.message());
  }
}

std::string Show(const Term& term, const PrefixTable& prefixes) {
  if (term.is_literal()) return term.ToString();
  return TermToJson(term, prefixes)["label"].get<std::string>();
}

std::string Show(const Triple& t, const PrefixTable& prefixes) {
  return Show(t.subject, prefixes) + " " + Show(t.predicate, prefixes) + " " +
         Show(t.object, prefixes);
}

std::string ShowBindings(const Bindings& bindings, const PrefixTable& prefixes) {
  std::string out = "{";
  for (std::size_t i = 0; i < bindings.size(); ++i) {
    if (i) out += ", ";
    out += bindings[i].first + "=" + Show(bindings[i].second, prefixes);
  }
  return out + "}";
}

Term NameOrThrow(const std::string& text, const PrefixTable& prefixes) {
  std::optional<Term> t = ResolveName(text, prefixes);
  if (!t) throw ApiError(400, "bad_request", "cannot resolve '" + text + "'");
  return *t;
}

// Infers a JSON value from command-line text: true/false and integers keep
// their type unless the schema says otherwise.
json CliValue(const std::string& text) {
  if (text == "true") return true;
  if (text == "false") return false;
  return text;
}

void PrintSuggestions(const Suggestions& s, const PrefixTable& px, std::ostream& out) {
  auto ids = [](const std::vector<std::string>& rule_ids) {
    std::string joined;
    for (const std::string& id : rule_ids) joined += (joined.empty() ? "" : ",") + id;
    return " [" + joined + "]";
  };
  if (s.empty()) {
    out << "no findings\n";
    return;
  }
  for (const SuspectedDisease& d : s.suspected) {
    out << "suspected\t" << Show(d.disease, px) << ids(d.rule_ids) << '\n';
  }
  for (const Finding& f : s.findings) {
    out << "finding\t" << Show(f.triple, px) << ids(f.rule_ids) << '\n';
  }
  for (const RecommendedTest& t : s.recommended_tests) {
    out << "test\t" << Show(t.test, px) << ids(t.rule_ids) << '\n';
  }
  for (const Prescription& p : s.prescriptions) {
    out << "prescription\t" << Show(p.drug, px);
    if (p.duration_days) out << "\tdays=" << *p.duration_days;
    if (p.day_of_course) out << "\tday=" << *p.day_of_course;
    out << ids(p.rule_ids) << '\n';
  }
  for (const Violation& v : s.violations) out << "violation\t" << v.ToString() << '\n';
}

struct Options {
  std::string kb = "kb";
  std::string store = "cases";
  std::string addr = "127.0.0.1:8080";
  bool json = false;
  // infer
  std::vector<std::string> facts;
  bool strict = false;
  bool naive = false;
  // query / bench
  std::string query_file;
  std::string queries_dir;
  std::vector<std::string> data;
  bool combined = false;
  std::size_t reps = 5;
  bool check = false;
  // metrics
  bool direct_only = false;
  // extract
  std::string in;
  std::string lexicon;
  std::string patient;
  std::string out_file;
  // case
  std::string case_id;
  std::string predicate;
  std::string object;
  std::string subject;
  std::optional<std::string> datatype;
  std::vector<std::string> demographics;
  std::uint64_t seq = 0;
};

int Load(const Options& o, std::ostream& out, std::ostream& err) {
  KnowledgeBase kb = LoadKb(o.kb);
  for (const std::string& w : kb.warnings) err << "warning: " << w << '\n';
  KbReport report = MakeKbReport(kb);
  if (o.json) {
    out << KbReportToJson(report, kb.prefixes).dump(2) << '\n';
  } else {
    out << report.ToText();
  }
  return kExitOk;
}

int Infer(const Options& o, std::ostream& out) {
  KnowledgeBase kb = LoadKb(o.kb);
  Graph graph = kb.ontology;
  for (const std::string& f : o.facts) graph.InsertAll(ReadGraph(f, kb.prefixes));
  InferenceOptions options;
  options.strict_equality = o.strict;
  options.strategy = o.naive ? EvalStrategy::kNaive : EvalStrategy::kSemiNaive;
  InferenceResult result = ApplyRules(graph, kb.rules, kb.schema, options);
  const PrefixTable& px = kb.prefixes;
  if (o.json) {
    json j = {{"derived", DerivedToJson(result, px)},
              {"rounds", result.rounds()},
              {"violations", json::array()}};
    for (const Violation& v : result.violations()) {
      j["violations"].push_back(ViolationToJson(v, px));
    }
    out << j.dump(2) << '\n';
  } else {
    for (const DerivedFact& fact : result.derived()) {
      out << Show(fact.triple, px) << "\tround " << fact.round;
      for (const Provenance& p : fact.provenance) {
        out << "\t" << p.rule_id << " " << ShowBindings(p.bindings, px);
      }
      out << '\n';
    }
    for (const Violation& v : result.violations()) {
      out << "violation\t" << v.ToString() << '\n';
    }
  }
  return result.violations().empty() ? kExitOk : kExitViolations;
}

std::vector<NamedQuery> LoadQueries(const std::vector<std::string>& files,
                                    const PrefixTable& prefixes) {
  std::vector<NamedQuery> out;
  for (const std::string& f : files) {
    try {
      out.push_back({fs::path(f).stem().string(), ParseQuery(ReadText(f), prefixes)});
    } catch (const ParseError& e) {
      throw LoadError(f, e.line(), e.message());
    }
  }
  return out;
}

int QueryCommand(const Options& o, std::ostream& out) {
  PrefixTable prefixes = PrefixTable::Standard();
  std::vector<NamedQuery> queries = LoadQueries({o.query_file}, prefixes);
  std::vector<Graph> graphs;
  for (const std::string& d : o.data) graphs.push_back(ReadGraph(d, prefixes));
  if (o.combined) {
    std::vector<NamedGraph> named;
    for (std::size_t i = 0; i < graphs.size(); ++i) {
      named.push_back({fs::path(o.data[i]).stem().string(), &graphs[i]});
    }
    out << Bench(queries, named, o.reps).ToTsv();
    return kExitOk;
  }
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    SolutionTable table = Execute(queries.front().query, graphs[i]);
    if (o.json) {
      json j = SolutionsToJson(table, prefixes);
      j["dataset"] = o.data[i];
      out << j.dump() << '\n';
    } else {
      if (graphs.size() > 1) out << "# " << o.data[i] << '\n';
      out << table.ToTsv();
    }
  }
  return kExitOk;
}

int MetricsCommand(const Options& o, std::ostream& out) {
  KnowledgeBase kb = LoadKb(o.kb);
  KbReport report = MakeKbReport(kb);
  if (o.direct_only) {
    report.counts = CountMetrics(kb.schema, kb.ontology, Membership::kDirect);
    report.metrics = ComputeMetrics(report.counts);
  }
  if (o.json) {
    out << KbReportToJson(report, kb.prefixes).dump(2) << '\n';
  } else {
    out << FormatMetricsTable(report.metrics);
  }
  return kExitOk;
}

int Extract(const Options& o, std::ostream& out, std::ostream& err) {
  KnowledgeBase kb = LoadKb(o.kb);
  const Lexicon lexicon =
      o.lexicon.empty() ? kb.lexicon : LoadLexicon(o.lexicon, kb.prefixes);
  std::vector<std::string> files;
  if (fs::is_directory(o.in)) {
    for (const fs::directory_entry& e : fs::directory_iterator(o.in)) {
      if (e.is_regular_file()) files.push_back(e.path().string());
    }
    std::sort(files.begin(), files.end());
  } else {
    files.push_back(o.in);
  }
  std::vector<EntityMention> mentions;
  for (const std::string& f : files) {
    std::vector<EntityMention> found = ExtractFromText(ReadText(f), lexicon);
    for (const EntityMention& m : found) {
      err << f << ':' << m.begin << '-' << m.end << "\t" << m.surface << "\t"
          << Show(m.concept_iri, kb.prefixes) << (m.corrected ? "\tcorrected" : "")
          << '\n';
    }
    mentions.insert(mentions.end(), found.begin(), found.end());
  }
  Graph graph;
  for (const Triple& t : EmitRdf(mentions, NameOrThrow(o.patient, kb.prefixes), lexicon)) {
    graph.Insert(t);
  }
  const std::string turtle = SerializeTurtle(graph, kb.prefixes);
  if (o.out_file.empty()) {
    out << turtle;
  } else {
    std::ofstream file(o.out_file, std::ios::binary);
    file << turtle;
    if (!file.flush()) throw Error("cannot write " + o.out_file);
    out << graph.size() << " triples written to " << o.out_file << '\n';
  }
  return kExitOk;
}

int BenchCommand(const Options& o, std::ostream& out, std::ostream& err) {
  PrefixTable prefixes = PrefixTable::Standard();
  const std::string queries_dir =
      o.queries_dir.empty() ? (fs::path(o.kb) / "queries").string() : o.queries_dir;
  std::vector<std::string> query_files;
  for (const fs::directory_entry& e : fs::directory_iterator(queries_dir)) {
    if (e.path().extension() == ".rq") query_files.push_back(e.path().string());
  }
  std::sort(query_files.begin(), query_files.end());
  std::vector<std::string> data = o.data;
  if (data.empty()) {
    for (const fs::directory_entry& e : fs::directory_iterator(fs::path(o.kb) / "bench")) {
      if (e.path().extension() == ".ttl") data.push_back(e.path().string());
    }
    std::sort(data.begin(), data.end());
  }
  std::vector<NamedQuery> queries = LoadQueries(query_files, prefixes);
  std::vector<Graph> graphs;
  for (const std::string& d : data) graphs.push_back(ReadGraph(d, prefixes));
  std::vector<NamedGraph> named;
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    named.push_back({fs::path(data[i]).stem().string(), &graphs[i]});
  }
  BenchReport report = Bench(queries, named, o.reps);
  out << report.ToTsv();
  if (!o.check) return kExitOk;
  int code = kExitOk;
  for (const auto& [id, sum] : report.separate_sum_ms) {
    const double combined = report.combined_ms.at(id);
    if (combined > 1.1 * sum) {
      err << id << ": combined " << combined << " ms exceeds 1.1 x separate " << sum
          << " ms\n";
      code = kExitFailure;
    }
  }
  return code;
}

std::vector<std::pair<Term, Term>> ParseDemographics(const Options& o,
                                                     const KnowledgeBase& kb) {
  std::vector<std::pair<Term, Term>> out;
  for (const std::string& d : o.demographics) {
    const std::size_t eq = d.find('=');
    if (eq == std::string::npos) {
      throw ApiError(400, "bad_request", "demographic '" + d + "' is not property=value");
    }
    Term p = NameOrThrow(d.substr(0, eq), kb.prefixes);
    out.emplace_back(p, ObjectFromJson(CliValue(d.substr(eq + 1)), std::nullopt, p, kb));
  }
  return out;
}

int CaseCommand(const std::string& action, const Options& o, std::ostream& out) {
  KnowledgeBase kb = LoadKb(o.kb);
  CaseStore store(o.store, kb);
  const PrefixTable& px = kb.prefixes;
  if (action == "create") {
    Term patient = o.patient.empty() ? VbdIri(o.case_id) : NameOrThrow(o.patient, px);
    PatientCase c = store.Create(o.case_id, patient, ParseDemographics(o, kb));
    out << "created " << c.id << " for " << Show(c.patient, px) << '\n';
  } else if (action == "assert") {
    Term p = NameOrThrow(o.predicate, px);
    Event e = store.Assert(o.case_id, p, ObjectFromJson(CliValue(o.object), o.datatype, p, kb));
    out << "seq " << e.seq << "\t" << Show(*e.triple, px) << '\n';
  } else if (action == "retract") {
    Event e = store.RetractAssertion(o.case_id, o.seq);
    out << "seq " << e.seq << "\tretracted " << e.target << '\n';
  } else if (action == "infer") {
    auto [suggestions, result] = store.Infer(o.case_id);
    if (o.json) {
      out << SuggestionsToJson(suggestions, *result, px).dump(2) << '\n';
    } else {
      PrintSuggestions(suggestions, px, out);
    }
    return suggestions.violations.empty() ? kExitOk : kExitViolations;
  } else if (action == "show") {
    PatientCase c = store.Get(o.case_id);
    if (o.json) {
      out << CaseToJson(c, px).dump(2) << '\n';
    } else {
      for (const Event& e : c.events) out << EncodeEvent(e) << '\n';
    }
  } else if (action == "explain") {
    PatientCase c = store.Get(o.case_id);
    Term s = o.subject.empty() ? c.patient : NameOrThrow(o.subject, px);
    Term p = NameOrThrow(o.predicate, px);
    Triple fact{s, p, ObjectFromJson(json(o.object), o.datatype, p, kb)};
    for (const Explanation& e : store.Explain(o.case_id, fact)) {
      out << e.rule.id << "\t" << e.rule.text << "\t" << ShowBindings(e.bindings, px) << '\n';
    }
  }
  return kExitOk;
}

int Serve(const Options& o, std::ostream& out) {
  KnowledgeBase kb = LoadKb(o.kb);
  CaseStore store(o.store, kb);
  Api api(kb, store);
  for (auto& [name, graph] : DefaultDatasets(kb)) api.AddDataset(name, std::move(graph));
  auto [host, port] = ParseAddress(o.addr);
  Server server(api);
  out << "serving " << kb.rules.size() << " rules on " << host << ':' << port << std::endl;
  if (!server.Listen(host, port)) throw Error("cannot bind " + o.addr);
  return kExitOk;
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Decision support for vector-borne diseases", "vbd"};
  app.require_subcommand(1);
  auto kb_option = [&o](CLI::App* sub) {
    sub->add_option("--kb", o.kb, "Knowledge base directory")->envname("VBD_KB");
  };
  auto json_flag = [&o](CLI::App* sub) {
    sub->add_flag("--json", o.json, "Print JSON");
  };

  CLI::App* load = app.add_subcommand("load", "Validate a knowledge base and summarize it");
  kb_option(load);
  json_flag(load);

  CLI::App* infer = app.add_subcommand("infer", "Apply the KB rules to facts files");
  kb_option(infer);
  json_flag(infer);
  infer->add_option("--facts", o.facts, "Turtle facts files")->required()->expected(1, -1);
  infer->add_flag("--strict", o.strict, "Exact (case-sensitive) string equality");
  infer->add_flag("--naive", o.naive, "Naive instead of semi-naive evaluation");

  CLI::App* query = app.add_subcommand("query", "Run a query file against datasets");
  json_flag(query);
  query->add_option("--q", o.query_file, "Query file")->required();
  query->add_option("--data", o.data, "Turtle datasets")->required()->expected(1, -1);
  query->add_flag("--combined", o.combined,
                  "Time each dataset and their union instead of printing rows");
  query->add_option("--reps", o.reps, "Timed repetitions per cell")->check(CLI::Range(5, 1000));

  CLI::App* metrics = app.add_subcommand("metrics", "Ontology quality metrics");
  kb_option(metrics);
  json_flag(metrics);
  metrics->add_flag("--direct-only", o.direct_only,
                    "Count only direct class membership for populated classes");

  CLI::App* extract = app.add_subcommand("extract", "Turn clinical notes into RDF facts");
  kb_option(extract);
  extract->add_option("--in", o.in, "Note file or directory of notes")->required();
  extract->add_option("--lexicon", o.lexicon, "Lexicon directory (default: the KB's)");
  extract->add_option("--patient", o.patient, "Patient IRI or prefixed name")->required();
  extract->add_option("--out", o.out_file, "Output Turtle file (default: stdout)");

  CLI::App* bench = app.add_subcommand("bench", "Separate vs combined query timings");
  kb_option(bench);
  bench->add_option("--queries", o.queries_dir, "Directory of .rq files");
  bench->add_option("--data", o.data, "Turtle datasets (default: <kb>/bench/*.ttl)");
  bench->add_option("--reps", o.reps, "Timed repetitions per cell")->check(CLI::Range(5, 1000));
  bench->add_flag("--check", o.check,
                  "Fail if a combined time exceeds 1.1 x the separate sum");

  CLI::App* case_cmd = app.add_subcommand("case", "Patient case workflow");
  case_cmd->require_subcommand(1);
  auto case_sub = [&](const char* name, const char* help) {
    CLI::App* sub = case_cmd->add_subcommand(name, help);
    kb_option(sub);
    sub->add_option("--store", o.store, "Case store directory")->envname("VBD_STORE");
    sub->add_option("id", o.case_id, "Case id")->required();
    return sub;
  };
  CLI::App* c_create = case_sub("create", "Create a case");
  c_create->add_option("--patient", o.patient, "Patient IRI (default :<id>)");
  c_create->add_option("--demographic", o.demographics, "property=value, repeatable");
  CLI::App* c_assert = case_sub("assert", "Assert an observation about the patient");
  c_assert->add_option("predicate", o.predicate)->required();
  c_assert->add_option("object", o.object)->required();
  c_assert->add_option("--datatype", o.datatype, "iri, string, boolean, integer, decimal");
  CLI::App* c_infer = case_sub("infer", "Run inference and print suggestions");
  json_flag(c_infer);
  CLI::App* c_show = case_sub("show", "Print the event log");
  json_flag(c_show);
  CLI::App* c_retract = case_sub("retract", "Retract an assertion by sequence number");
  c_retract->add_option("seq", o.seq)->required();
  CLI::App* c_explain = case_sub("explain", "Justify a derived fact");
  c_explain->add_option("predicate", o.predicate)->required();
  c_explain->add_option("object", o.object)->required();
  c_explain->add_option("--subject", o.subject, "Subject (default: the patient)");
  c_explain->add_option("--datatype", o.datatype, "iri, string, boolean, integer, decimal");

  CLI::App* serve = app.add_subcommand("serve", "Run the HTTP service");
  kb_option(serve);
  serve->add_option("--store", o.store, "Case store directory")->envname("VBD_STORE");
  serve->add_option("--addr", o.addr, "host:port")->envname("VBD_ADDR");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (load->parsed()) return Load(o, out, err);
    if (infer->parsed()) return Infer(o, out);
    if (query->parsed()) return QueryCommand(o, out);
    if (metrics->parsed()) return MetricsCommand(o, out);
    if (extract->parsed()) return Extract(o, out, err);
    if (bench->parsed()) return BenchCommand(o, out, err);
    if (serve->parsed()) return Serve(o, out);
    for (CLI::App* sub : {c_create, c_assert, c_infer, c_show, c_retract, c_explain}) {
      if (sub->parsed()) return CaseCommand(sub->get_name(), o, out);
    }
  } catch (const LoadError& e) {
    err << "error: load_error: " << e.what() << '\n';
    return kExitLoadError;
  } catch (const ParseError& e) {
    err << "error: parse_error: " << e.what() << '\n';
    return kExitLoadError;
  } catch (const std::exception& e) {
    ApiError error = ToApiError(e);
    err << "error: " << error.code() << ": " << error.message() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace vbd::app
