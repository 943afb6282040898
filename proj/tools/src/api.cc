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

#include "vbd/app/api.h"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "vbd/errors.h"
#include "vbd/query.h"
#include "vbd/text.h"
#include "vbd/turtle.h"

namespace vbd::app {

namespace fs = std::filesystem;

namespace {

std::vector<std::string> SplitPath(std::string_view path) {
  std::vector<std::string> parts;
  std::size_t i = 0;
  while (i < path.size()) {
    while (i < path.size() && path[i] == '/') ++i;
    std::size_t j = i;
    while (j < path.size() && path[j] != '/') ++j;
    if (j > i) parts.emplace_back(path.substr(i, j - i));
    i = j;
  }
  return parts;
}

json ParseBody(const std::string& body) {
  if (body.empty()) return json::object();
  json j = json::parse(body);
  if (!j.is_object()) throw ApiError(400, "bad_request", "request body must be a JSON object");
  return j;
}

std::string RequireString(const json& body, const char* field) {
  auto it = body.find(field);
  if (it == body.end() || !it->is_string()) {
    throw ApiError(400, "bad_request", std::string("missing string field '") + field + "'");
  }
  return it->get<std::string>();
}

std::optional<std::string> OptionalString(const json& body, const char* field) {
  auto it = body.find(field);
  if (it == body.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) {
    throw ApiError(400, "bad_request", std::string("field '") + field + "' must be a string");
  }
  return it->get<std::string>();
}

}  // namespace

json ApiError::ToJson() const {
  json out = {{"code", code_}, {"message", message_}};
  out["detail"] = detail_;
  return out;
}

ApiError ToApiError(const std::exception& e) {
  if (const auto* api = dynamic_cast<const ApiError*>(&e)) return *api;
  if (const auto* u = dynamic_cast<const UndeclaredPredicateError*>(&e)) {
    return ApiError(422, "undeclared_predicate", u->what(),
                    {{"predicate", u->predicate()}, {"suggestions", u->suggestions()}});
  }
  if (dynamic_cast<const CaseExistsError*>(&e)) {
    return ApiError(409, "case_exists", e.what());
  }
  if (dynamic_cast<const NotFoundError*>(&e)) return ApiError(404, "not_found", e.what());
  if (const auto* n = dynamic_cast<const NotDerivedError*>(&e)) {
    return ApiError(
        404, "not_derived", e.what(),
        {{"reason", n->reason() == NotDerivedError::Reason::kAsserted ? "asserted"
                                                                       : "absent"}});
  }
  if (const auto* u = dynamic_cast<const UnmappedConceptError*>(&e)) {
    return ApiError(422, "unmapped_concept", e.what(), {{"concepts", u->concepts()}});
  }
  if (const auto* p = dynamic_cast<const ParseError*>(&e)) {
    return ApiError(400, "parse_error", p->message(),
                    {{"line", p->line()}, {"column", p->column()}});
  }
  if (const auto* l = dynamic_cast<const LoadError*>(&e)) {
    return ApiError(500, "load_error", e.what(), {{"file", l->file()}, {"line", l->line()}});
  }
  if (dynamic_cast<const CaseError*>(&e)) return ApiError(400, "case_error", e.what());
  if (dynamic_cast<const json::exception*>(&e)) {
    return ApiError(400, "invalid_json", e.what());
  }
  if (dynamic_cast<const Error*>(&e)) return ApiError(400, "bad_request", e.what());
  return ApiError(500, "internal", e.what());
}

Api::Api(const KnowledgeBase& kb, CaseStore& store) : kb_(kb), store_(store) {}

void Api::AddDataset(const std::string& name, Graph graph) {
  datasets_[name] = std::move(graph);
}

ApiResponse Api::Handle(const ApiRequest& request) {
  ApiResponse response;
  try {
    response.body = Dispatch(request, &response.status);
  } catch (const std::exception& e) {
    ApiError error = ToApiError(e);
    response.status = error.status();
    response.body = error.ToJson();
  }
  return response;
}

json Api::Dispatch(const ApiRequest& request, int* status) {
  const std::vector<std::string> parts = SplitPath(request.path);
  const std::string& method = request.method;
  auto route = [&](std::initializer_list<std::string_view> shape) {
    if (parts.size() != shape.size()) return false;
    std::size_t i = 0;
    for (std::string_view s : shape) {
      if (s != "*" && parts[i] != s) return false;
      ++i;
    }
    return true;
  };
  auto method_not_allowed = [&]() -> json {
    throw ApiError(405, "method_not_allowed",
                   method + " is not supported on " + request.path);
  };

  if (route({"health"})) return method == "GET" ? Health() : method_not_allowed();
  if (route({"kb"})) return method == "GET" ? KbSummary() : method_not_allowed();
  if (route({"metrics"})) return method == "GET" ? Metrics() : method_not_allowed();
  if (route({"query"})) {
    return method == "POST" ? RunQuery(ParseBody(request.body)) : method_not_allowed();
  }
  if (route({"extract"})) {
    return method == "POST" ? Extract(ParseBody(request.body)) : method_not_allowed();
  }
  if (route({"cases"})) {
    if (method == "GET") return {{"cases", store_.List()}};
    if (method == "POST") return CreateCase(ParseBody(request.body), status);
    return method_not_allowed();
  }
  if (route({"cases", "*"})) {
    return method == "GET" ? GetCase(parts[1]) : method_not_allowed();
  }
  if (route({"cases", "*", "assertions"})) {
    return method == "POST" ? AddAssertion(parts[1], ParseBody(request.body), status)
                            : method_not_allowed();
  }
  if (route({"cases", "*", "assertions", "*"})) {
    return method == "DELETE" ? RetractAssertion(parts[1], parts[3])
                              : method_not_allowed();
  }
  if (route({"cases", "*", "infer"})) {
    return method == "POST" ? Infer(parts[1]) : method_not_allowed();
  }
  if (route({"cases", "*", "explain"})) {
    return method == "GET" ? Explain(parts[1], request.params) : method_not_allowed();
  }
  throw ApiError(404, "not_found", "no route for " + request.path);
}

json Api::Health() const {
  return {{"status", "ok"},
          {"rules", kb_.rules.size()},
          {"classes", kb_.schema.classes().size()},
          {"fixtures", kb_.fixtures.size()},
          {"datasets", datasets_.size()}};
}

json Api::KbSummary() const {
  const PrefixTable& px = kb_.prefixes;
  json out;
  out["classes"] = json::array();
  for (const Term& c : kb_.schema.classes()) out["classes"].push_back(TermToJson(c, px));
  auto properties = [&](const std::map<Term, PropertyInfo>& props) {
    json list = json::array();
    for (const auto& [p, info] : props) {
      json entry = {{"property", TermToJson(p, px)}};
      entry["domain"] = info.domain ? TermToJson(*info.domain, px) : json(nullptr);
      if (info.literal_range) {
        entry["range"] = std::string(DatatypeName(*info.literal_range));
      } else {
        entry["range"] = info.range ? TermToJson(*info.range, px) : json(nullptr);
      }
      list.push_back(std::move(entry));
    }
    return list;
  };
  out["object_properties"] = properties(kb_.schema.object_properties());
  out["data_properties"] = properties(kb_.schema.data_properties());
  out["rules"] = json::array();
  for (const Rule& r : kb_.rules) out["rules"].push_back(RuleToJson(r));
  out["buckets"] = json::array();
  for (const BucketRule& b : kb_.buckets) {
    out["buckets"].push_back({{"predicate", TermToJson(b.predicate, px)},
                              {"bucket", std::string(SuggestionBucketName(b.bucket))},
                              {"target", TermToJson(b.target, px)}});
  }
  return out;
}

Term Api::RequireName(const std::string& text, std::string_view field) const {
  std::optional<Term> term = ResolveName(text, kb_.prefixes);
  if (!term) {
    throw ApiError(400, "bad_request",
                   "cannot resolve " + std::string(field) + " '" + text + "'");
  }
  return *term;
}

json Api::CreateCase(const json& body, int* status) {
  const std::string id = RequireString(body, "id");
  std::optional<std::string> patient_name = OptionalString(body, "patient");
  Term patient = patient_name ? RequireName(*patient_name, "patient") : VbdIri(id);
  std::vector<std::pair<Term, Term>> demographics;
  if (auto it = body.find("demographics"); it != body.end() && !it->is_null()) {
    if (!it->is_object()) {
      throw ApiError(400, "bad_request", "'demographics' must be an object");
    }
    for (const auto& [name, value] : it->items()) {
      Term predicate = RequireName(name, "property");
      demographics.emplace_back(predicate,
                                ObjectFromJson(value, std::nullopt, predicate, kb_));
    }
  }
  PatientCase c = store_.Create(id, patient, demographics);
  *status = 201;
  return CaseToJson(c, kb_.prefixes);
}

json Api::GetCase(const std::string& id) {
  return CaseToJson(store_.Get(id), kb_.prefixes);
}

json Api::AddAssertion(const std::string& id, const json& body, int* status) {
  Term predicate = RequireName(RequireString(body, "p"), "predicate");
  auto it = body.find("o");
  if (it == body.end() || it->is_null()) {
    throw ApiError(400, "bad_request", "missing field 'o'");
  }
  Term object = ObjectFromJson(*it, OptionalString(body, "datatype"), predicate, kb_);
  Event event = store_.Assert(id, predicate, object);
  *status = 201;
  return {{"case_id", id}, {"event", EventToJson(event, kb_.prefixes)}};
}

json Api::RetractAssertion(const std::string& id, std::string_view seq) {
  std::uint64_t target = 0;
  try {
    target = std::stoull(std::string(seq));
  } catch (const std::exception&) {
    throw ApiError(400, "bad_request", "bad sequence number '" + std::string(seq) + "'");
  }
  Event event = store_.RetractAssertion(id, target);
  return {{"case_id", id}, {"event", EventToJson(event, kb_.prefixes)}};
}

json Api::Infer(const std::string& id) {
  auto [suggestions, result] = store_.Infer(id);
  json out;
  out["case_id"] = id;
  out["suggestions"] = SuggestionsToJson(suggestions, *result, kb_.prefixes);
  out["derived"] = DerivedToJson(*result, kb_.prefixes);
  out["rounds"] = result->rounds();
  out["consistent"] = result->violations().empty();
  return out;
}

json Api::Explain(const std::string& id,
                  const std::map<std::string, std::string>& params) {
  auto param = [&](const char* name) -> std::optional<std::string> {
    auto it = params.find(name);
    if (it == params.end() || it->second.empty()) return std::nullopt;
    return it->second;
  };
  std::optional<std::string> p = param("p");
  std::optional<std::string> o = param("o");
  if (!p || !o) throw ApiError(400, "bad_request", "explain needs p and o");
  PatientCase c = store_.Get(id);
  Term subject = param("s") ? RequireName(*param("s"), "subject") : c.patient;
  Term predicate = RequireName(*p, "predicate");
  Term object = ObjectFromJson(json(*o), param("datatype"), predicate, kb_);
  Triple fact{subject, predicate, object};
  return ExplanationsToJson(fact, store_.Explain(id, fact), kb_.prefixes);
}

json Api::RunQuery(const json& body) {
  Query query = ParseQuery(RequireString(body, "query"), kb_.prefixes);
  std::vector<std::string> names;
  if (auto it = body.find("datasets"); it != body.end() && !it->is_null()) {
    if (!it->is_array()) throw ApiError(400, "bad_request", "'datasets' must be an array");
    for (const json& n : *it) {
      if (!n.is_string()) throw ApiError(400, "bad_request", "dataset names are strings");
      names.push_back(n.get<std::string>());
    }
  }
  if (names.empty()) throw ApiError(400, "bad_request", "no datasets named");
  std::vector<const Graph*> graphs;
  for (const std::string& n : names) {
    auto g = datasets_.find(n);
    if (g == datasets_.end()) {
      json known = json::array();
      for (const auto& [name, graph] : datasets_) known.push_back(name);
      throw ApiError(404, "unknown_dataset", "no dataset '" + n + "'", {{"known", known}});
    }
    graphs.push_back(&g->second);
  }
  Graph combined;
  const Graph* target = graphs.front();
  if (graphs.size() > 1) {
    for (const Graph* g : graphs) combined.InsertAll(*g);
    target = &combined;
  }
  const auto start = std::chrono::steady_clock::now();
  SolutionTable table = Execute(query, *target);
  const std::chrono::duration<double, std::milli> elapsed =
      std::chrono::steady_clock::now() - start;
  json out = SolutionsToJson(table, kb_.prefixes);
  out["datasets"] = names;
  out["elapsed_ms"] = elapsed.count();
  return out;
}

json Api::Metrics() const {
  return KbReportToJson(MakeKbReport(kb_), kb_.prefixes);
}

json Api::Extract(const json& body) const {
  const std::string text = RequireString(body, "text");
  Term patient = RequireName(RequireString(body, "patient"), "patient");
  std::vector<EntityMention> mentions = ExtractFromText(text, kb_.lexicon);
  std::vector<Triple> triples = EmitRdf(mentions, patient, kb_.lexicon);
  json out;
  out["sentences"] = json::array();
  for (const Sentence& s : SplitSentences(text, kb_.lexicon)) {
    out["sentences"].push_back({{"text", s.text}, {"begin", s.begin}, {"end", s.end}});
  }
  out["mentions"] = MentionsToJson(mentions, kb_.prefixes);
  out["triples"] = json::array();
  Graph graph;
  for (const Triple& t : triples) {
    out["triples"].push_back(TripleToJson(t, kb_.prefixes));
    graph.Insert(t);
  }
  out["turtle"] = SerializeTurtle(graph, kb_.prefixes);
  return out;
}

std::map<std::string, Graph> DefaultDatasets(const KnowledgeBase& kb) {
  std::map<std::string, Graph> out;
  out["ontology"] = kb.ontology;
  for (const auto& [name, graph] : kb.fixtures) out["fixture/" + name] = graph;
  const fs::path bench = fs::path(kb.directory) / "bench";
  if (fs::is_directory(bench)) {
    for (const fs::directory_entry& e : fs::directory_iterator(bench)) {
      if (!e.is_regular_file() || e.path().extension() != ".ttl") continue;
      std::ifstream in(e.path(), std::ios::binary);
      std::ostringstream text;
      text << in.rdbuf();
      try {
        out[e.path().stem().string()] = ParseTurtle(text.str(), kb.prefixes).graph;
      } catch (const ParseError& error) {
        throw LoadError(e.path().string(), error.line(), error.message());
      }
    }
  }
  return out;
}

}  // namespace vbd::app
