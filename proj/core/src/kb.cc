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

#include "vbd/kb.h"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "vbd/errors.h"

namespace vbd {

namespace fs = std::filesystem;

namespace {

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError(path.string(), 0, "cannot open file");
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::vector<fs::path> ListFiles(const fs::path& dir, std::string_view ext) {
  std::vector<fs::path> out;
  if (!fs::is_directory(dir)) return out;
  for (const fs::directory_entry& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ext) out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

TurtleDocument ParseTurtleFile(const fs::path& path, const PrefixTable& prefixes) {
  try {
    return ParseTurtle(ReadFile(path), prefixes);
  } catch (const ParseError& e) {
    throw LoadError(path.string(), e.line(), e.message());
  } catch (const MalformedTripleError& e) {
    throw LoadError(path.string(), 0, e.what());
  }
}

void ValidateRule(const Rule& rule, const OntologySchema& schema,
                  const std::string& file) {
  if (rule.source == RuleSource::kUser) {
    throw LoadError(file, rule.line,
                    "rule " + rule.id + " has no table2/table3/table4/prose source");
  }
  if (rule.source == RuleSource::kProse && rule.note.empty()) {
    throw LoadError(file, rule.line, "prose rule " + rule.id + " lacks a @note");
  }
  for (const std::vector<Atom>* atoms : {&rule.body, &rule.head}) {
    for (const Atom& atom : *atoms) {
      if (atom.kind == AtomKind::kClass && !schema.HasClass(atom.predicate)) {
        throw LoadError(file, rule.line,
                        "rule " + rule.id + " uses undeclared class " +
                            atom.predicate.ToString());
      }
      if (atom.kind == AtomKind::kProperty && !schema.IsProperty(atom.predicate)) {
        throw LoadError(file, rule.line,
                        "rule " + rule.id + " uses undeclared property " +
                            atom.predicate.ToString());
      }
    }
  }
}

}  // namespace

std::string_view SuggestionBucketName(SuggestionBucket bucket) {
  switch (bucket) {
    case SuggestionBucket::kSuspected: return "suspected";
    case SuggestionBucket::kFindings: return "findings";
    case SuggestionBucket::kRecommendedTests: return "recommended_tests";
    case SuggestionBucket::kPrescriptions: return "prescriptions";
    case SuggestionBucket::kPrescriptionDuration: return "prescription_duration";
    case SuggestionBucket::kPrescriptionDay: return "prescription_day";
  }
  return "";
}

bool SuggestionBucketFromName(std::string_view name, SuggestionBucket* out) {
  for (SuggestionBucket b :
       {SuggestionBucket::kSuspected, SuggestionBucket::kFindings,
        SuggestionBucket::kRecommendedTests, SuggestionBucket::kPrescriptions,
        SuggestionBucket::kPrescriptionDuration,
        SuggestionBucket::kPrescriptionDay}) {
    if (SuggestionBucketName(b) == name) {
      *out = b;
      return true;
    }
  }
  return false;
}

const Rule* KnowledgeBase::FindRule(const std::string& id) const {
  for (const Rule& r : rules) {
    if (r.id == id) return &r;
  }
  return nullptr;
}

const BucketRule* KnowledgeBase::FindBucket(const Term& predicate) const {
  for (const BucketRule& b : buckets) {
    if (b.predicate == predicate) return &b;
  }
  return nullptr;
}

std::vector<std::string> KnowledgeBase::DeclaredNames() const {
  std::vector<std::string> out;
  for (const Term& c : schema.classes()) out.emplace_back(c.LocalName());
  for (const auto& [p, info] : schema.object_properties()) out.emplace_back(p.LocalName());
  for (const auto& [p, info] : schema.data_properties()) out.emplace_back(p.LocalName());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

KnowledgeBase LoadKb(const std::string& directory) {
  const fs::path root(directory);
  if (!fs::is_directory(root)) throw LoadError(directory, 0, "not a directory");
  if (fs::is_empty(root)) throw LoadError(directory, 0, "knowledge base directory is empty");

  KnowledgeBase kb;
  kb.directory = directory;

  const fs::path ontology_path = root / "ontology.ttl";
  if (!fs::exists(ontology_path)) {
    throw LoadError(ontology_path.string(), 0, "missing ontology file");
  }
  TurtleDocument doc = ParseTurtleFile(ontology_path, PrefixTable::Standard());
  kb.prefixes = PrefixTable::Standard();
  kb.prefixes.Merge(doc.prefixes);
  kb.ontology = std::move(doc.graph);
  try {
    kb.schema = OntologySchema::Build(kb.ontology);
    std::vector<Term> unaligned = ValidateBfoAlignment(kb.schema);
    if (!unaligned.empty()) {
      std::string names;
      for (const Term& c : unaligned) names += " " + c.ToString();
      throw LoadError(ontology_path.string(), 0,
                      "classes outside the BFO hierarchy:" + names);
    }
  } catch (const SchemaError& e) {
    throw LoadError(ontology_path.string(), 0, e.what());
  }
  for (const std::string& w : kb.schema.warnings()) {
    kb.warnings.push_back(ontology_path.string() + ": " + w);
  }

  const std::vector<fs::path> rule_files = ListFiles(root / "rules", ".rules");
  if (rule_files.empty()) {
    throw LoadError((root / "rules").string(), 0, "no rule files");
  }
  for (const fs::path& path : rule_files) {
    RuleParseOptions options;
    options.prefixes = kb.prefixes;
    RuleSource source;
    options.default_source = RuleSourceFromName(path.stem().string(), &source)
                                 ? source
                                 : RuleSource::kUser;
    options.id_prefix = path.stem().string() + "_";
    RuleSet set;
    try {
      set = ParseRules(ReadFile(path), options);
    } catch (const ParseError& e) {
      throw LoadError(path.string(), e.line(), e.message());
    }
    for (const std::string& w : set.warnings) {
      kb.warnings.push_back(path.string() + ": " + w);
    }
    for (Rule& rule : set.rules) {
      ValidateRule(rule, kb.schema, path.string());
      if (kb.FindRule(rule.id)) {
        throw LoadError(path.string(), rule.line, "duplicate rule id " + rule.id);
      }
      kb.rules.push_back(std::move(rule));
    }
  }

  kb.lexicon = LoadLexicon((root / "lexicon").string(), kb.prefixes);

  for (const fs::path& path : ListFiles(root / "fixtures", ".ttl")) {
    kb.fixtures[path.stem().string()] = ParseTurtleFile(path, kb.prefixes).graph;
  }

  const fs::path buckets_path = root / "suggestions.tsv";
  std::istringstream buckets(ReadFile(buckets_path));
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(buckets, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream fields(line);
    std::string cell;
    while (std::getline(fields, cell, '\t')) {
      while (!cell.empty() && std::isspace(static_cast<unsigned char>(cell.back()))) {
        cell.pop_back();
      }
      cells.push_back(cell);
    }
    if (cells.size() < 2 || cells.size() > 3) {
      throw LoadError(buckets_path.string(), line_no,
                      "expected 'predicate<TAB>bucket[<TAB>class]'");
    }
    auto expand = [&](const std::string& name) {
      return kb.prefixes.Expand(name.find(':') == std::string::npos ? ":" + name
                                                                    : name);
    };
    std::optional<std::string> iri = expand(cells[0]);
    SuggestionBucket bucket;
    if (!iri || !SuggestionBucketFromName(cells[1], &bucket)) {
      throw LoadError(buckets_path.string(), line_no, "bad bucket entry '" + line + "'");
    }
    Term predicate = Term::Iri(*iri);
    if (!kb.schema.IsProperty(predicate)) {
      throw LoadError(buckets_path.string(), line_no,
                      "undeclared property " + predicate.ToString());
    }
    Term target = predicate;
    if (cells.size() == 3) {
      std::optional<std::string> target_iri = expand(cells[2]);
      if (!target_iri || !kb.schema.HasClass(Term::Iri(*target_iri))) {
        throw LoadError(buckets_path.string(), line_no,
                        "undeclared class '" + cells[2] + "'");
      }
      target = Term::Iri(*target_iri);
    }
    kb.buckets.push_back({predicate, bucket, target});
  }
  return kb;
}

KbReport MakeKbReport(const KnowledgeBase& kb) {
  KbReport report;
  report.class_count = kb.schema.classes().size();
  report.rule_count = kb.rules.size();
  for (const Rule& r : kb.rules) {
    ++report.rules_per_source[std::string(RuleSourceName(r.source))];
  }
  for (const auto& [name, graph] : kb.fixtures) report.fixtures.push_back(name);
  const Term disposition = VbdIri("Disposition");
  for (const auto& [sub, super] : kb.schema.subclass_edges()) {
    if (super == disposition) report.diseases.push_back(sub);
  }
  report.counts = CountMetrics(kb.schema, kb.ontology);
  report.metrics = ComputeMetrics(report.counts);
  return report;
}

std::string KbReport::ToText() const {
  std::ostringstream out;
  out << "classes: " << class_count << '\n';
  out << "rules: " << rule_count << '\n';
  for (const auto& [source, n] : rules_per_source) {
    out << "  " << source << ": " << n << '\n';
  }
  out << "diseases:";
  for (const Term& d : diseases) out << ' ' << d.LocalName();
  out << '\n' << "fixtures:";
  for (const std::string& f : fixtures) out << ' ' << f;
  out << '\n' << FormatMetricsTable(metrics);
  return out.str();
}

}  // namespace vbd
