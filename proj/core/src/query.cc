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

#include "vbd/query.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <limits>
#include <set>
#include <stdexcept>
#include <tuple>
#include <unordered_set>

#include "vbd/errors.h"

namespace vbd {

namespace {

bool IsNameChar(char c) {
  unsigned char u = static_cast<unsigned char>(c);
  return std::isalnum(u) || c == '_' || c == '-' || u >= 0x80;
}

class QueryParser {
 public:
  QueryParser(std::string_view text, const PrefixTable& prefixes)
      : text_(text), prefixes_(prefixes) {}

  Query Parse() {
    Query query;
    SkipWs();
    while (Keyword("PREFIX")) Prefix();
    if (!Keyword("SELECT")) Fail("expected SELECT");
    if (Keyword("DISTINCT")) query.distinct = true;
    bool star = false;
    std::vector<std::pair<std::string, std::size_t>> selected;
    if (Peek() == '*') {
      ++pos_;
      star = true;
      SkipWs();
    } else {
      while (Peek() == '?') {
        std::size_t at = pos_;
        selected.emplace_back(Variable(), at);
      }
      if (selected.empty()) Fail("expected variables after SELECT");
    }
    Keyword("WHERE");
    Expect('{');
    while (Peek() != '}') {
      if (AtEnd()) Fail("unterminated group pattern");
      if (Keyword("FILTER")) {
        Filter(query);
        if (Peek() == '.') {
          ++pos_;
          SkipWs();
        }
        continue;
      } else {
        QueryPattern pattern;
        pattern.subject = TermOrVariable(false);
        pattern.predicate = TermOrVariable(true);
        pattern.object = TermOrVariable(false);
        query.patterns.push_back(std::move(pattern));
      }
      if (Peek() == '.') {
        ++pos_;
        SkipWs();
      } else if (Peek() != '}' && !PeekKeyword("FILTER")) {
        Fail("expected '.' or '}'");
      }
    }
    Expect('}');
    while (Keyword("FILTER")) Filter(query);
    if (!AtEnd()) Fail("unexpected trailing input");
    if (query.patterns.empty()) Fail("query has no triple patterns");

    std::vector<std::string> bound = query.PatternVariables();
    auto is_bound = [&](const std::string& v) {
      return std::find(bound.begin(), bound.end(), v) != bound.end();
    };
    if (star) {
      query.select_vars = bound;
    } else {
      for (const auto& [name, at] : selected) {
        if (!is_bound(name)) Fail("unbound variable " + name + " in SELECT", at);
        if (std::find(query.select_vars.begin(), query.select_vars.end(),
                      name) == query.select_vars.end()) {
          query.select_vars.push_back(name);
        }
      }
    }
    for (const auto& [name, at] : filter_vars_) {
      if (!is_bound(name)) Fail("unbound variable " + name + " in FILTER", at);
    }
    return query;
  }

 private:
  [[noreturn]] void Fail(const std::string& message) const {
    Fail(message, pos_);
  }

  [[noreturn]] void Fail(const std::string& message, std::size_t at) const {
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i < at && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError(message, line, column);
  }

  bool AtEnd() const { return pos_ >= text_.size(); }
  char Peek() const { return AtEnd() ? '\0' : text_[pos_]; }

  void SkipWs() {
    while (!AtEnd()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == '#') {
        while (!AtEnd() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  void Expect(char c) {
    if (Peek() != c) Fail(std::string("expected '") + c + "'");
    ++pos_;
    SkipWs();
  }

  bool PeekKeyword(std::string_view word) const {
    if (pos_ + word.size() > text_.size()) return false;
    for (std::size_t i = 0; i < word.size(); ++i) {
      if (std::toupper(static_cast<unsigned char>(text_[pos_ + i])) != word[i]) {
        return false;
      }
    }
    std::size_t end = pos_ + word.size();
    return end >= text_.size() || !(IsNameChar(text_[end]) || text_[end] == ':');
  }

  bool Keyword(std::string_view word) {
    if (!PeekKeyword(word)) return false;
    pos_ += word.size();
    SkipWs();
    return true;
  }

  std::string Name() {
    std::size_t start = pos_;
    while (!AtEnd() && IsNameChar(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  void Prefix() {
    std::string label = Name();
    if (Peek() != ':') Fail("expected ':' in PREFIX");
    ++pos_;
    SkipWs();
    std::string iri = IriRef();
    prefixes_.Set(label, iri);
    SkipWs();
  }

  std::string IriRef() {
    if (Peek() != '<') Fail("expected '<'");
    std::size_t start = ++pos_;
    while (!AtEnd() && text_[pos_] != '>') {
      if (std::isspace(static_cast<unsigned char>(text_[pos_]))) {
        Fail("whitespace in IRI");
      }
      ++pos_;
    }
    if (AtEnd()) Fail("unterminated IRI", start - 1);
    std::string iri(text_.substr(start, pos_ - start));
    ++pos_;
    return iri;
  }

  std::string Variable() {
    std::size_t start = pos_;
    ++pos_;  // '?'
    std::string name = Name();
    if (name.empty()) Fail("empty variable name", start);
    SkipWs();
    return "?" + name;
  }

  Term PrefixedName() {
    std::size_t start = pos_;
    std::string label;
    if (Peek() != ':') label = Name();
    if (Peek() != ':') Fail("expected prefixed name", start);
    ++pos_;
    std::size_t local_start = pos_;
    while (!AtEnd() && (IsNameChar(text_[pos_]) ||
                        (text_[pos_] == '.' && pos_ + 1 < text_.size() &&
                         IsNameChar(text_[pos_ + 1])))) {
      ++pos_;
    }
    std::string local(text_.substr(local_start, pos_ - local_start));
    std::optional<std::string> ns = prefixes_.Lookup(label);
    if (!ns) Fail("undeclared prefix '" + label + "'", start);
    return Term::Iri(*ns + local);
  }

  Term StringLiteral() {
    std::size_t start = pos_;
    char quote = text_[pos_++];
    std::string value;
    while (true) {
      if (AtEnd() || text_[pos_] == '\n') Fail("unterminated string", start);
      char c = text_[pos_++];
      if (c == quote) break;
      if (c == '\\') {
        if (AtEnd()) Fail("unterminated string", start);
        char e = text_[pos_++];
        switch (e) {
          case 'n': value += '\n'; break;
          case 't': value += '\t'; break;
          case 'r': value += '\r'; break;
          case '"': value += '"'; break;
          case '\'': value += '\''; break;
          case '\\': value += '\\'; break;
          default: Fail("unknown escape", pos_ - 2);
        }
      } else {
        value += c;
      }
    }
    if (Peek() == '@') {
      ++pos_;
      Name();
    } else if (text_.substr(pos_, 2) == "^^") {
      pos_ += 2;
      std::size_t type_at = pos_;
      Term type = Peek() == '<' ? Term::Iri(IriRef()) : PrefixedName();
      std::optional<Datatype> dt = DatatypeFromName(type.value());
      if (!dt || *dt == Datatype::kNone) Fail("unsupported datatype", type_at);
      try {
        return Term::Literal(value, *dt);
      } catch (const Error& e) {
        Fail(e.what(), start);
      }
    }
    return Term::String(value);
  }

  Term Number() {
    std::size_t start = pos_;
    if (Peek() == '+' || Peek() == '-') ++pos_;
    bool decimal = false;
    while (!AtEnd() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) ||
                        (text_[pos_] == '.' && !decimal && pos_ + 1 < text_.size() &&
                         std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))))) {
      if (text_[pos_] == '.') decimal = true;
      ++pos_;
    }
    std::string_view lexical = text_.substr(start, pos_ - start);
    if (lexical.empty() || lexical == "+" || lexical == "-") {
      Fail("malformed number", start);
    }
    return Term::Literal(lexical, decimal ? Datatype::kDecimal : Datatype::kInteger);
  }

  Term Constant(bool predicate_position) {
    char c = Peek();
    Term term;
    if (c == '<') {
      term = Term::Iri(IriRef());
    } else if (c == '"' || c == '\'') {
      term = StringLiteral();
    } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '+' ||
               c == '-') {
      term = Number();
    } else if (predicate_position && c == 'a' &&
               (pos_ + 1 >= text_.size() || !IsNameChar(text_[pos_ + 1])) &&
               (pos_ + 1 >= text_.size() || text_[pos_ + 1] != ':')) {
      ++pos_;
      term = RdfType();
    } else if (PeekKeyword("TRUE")) {
      pos_ += 4;
      term = Term::Boolean(true);
    } else if (PeekKeyword("FALSE")) {
      pos_ += 5;
      term = Term::Boolean(false);
    } else if (c == ':' || std::isalpha(static_cast<unsigned char>(c))) {
      term = PrefixedName();
    } else {
      Fail("expected a term");
    }
    SkipWs();
    return term;
  }

  QueryTerm TermOrVariable(bool predicate_position) {
    if (Peek() == '?' || Peek() == '$') return QueryTerm::Variable(Variable());
    std::size_t at = pos_;
    Term term = Constant(predicate_position);
    if (predicate_position && !term.is_iri()) Fail("predicate must be an IRI", at);
    return QueryTerm::Constant(std::move(term));
  }

  void Filter(Query& query) {
    Expect('(');
    while (true) {
      QueryFilter filter;
      if (Peek() != '?') Fail("expected variable in FILTER");
      filter_vars_.emplace_back(std::string(), pos_);
      filter.left = Variable();
      filter_vars_.back().first = filter.left;
      if (Peek() == '=') {
        ++pos_;
        filter.op = QueryFilter::Op::kEqual;
      } else if (text_.substr(pos_, 2) == "!=") {
        pos_ += 2;
        filter.op = QueryFilter::Op::kNotEqual;
      } else {
        Fail("expected '=' or '!='");
      }
      SkipWs();
      if (Peek() == '?') {
        filter_vars_.emplace_back(std::string(), pos_);
        filter.right = QueryTerm::Variable(Variable());
        filter_vars_.back().first = filter.right.variable;
      } else {
        filter.right = QueryTerm::Constant(Constant(false));
      }
      query.filters.push_back(std::move(filter));
      if (text_.substr(pos_, 2) == "&&") {
        pos_ += 2;
        SkipWs();
        continue;
      }
      break;
    }
    Expect(')');
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  PrefixTable prefixes_;
  std::vector<std::pair<std::string, std::size_t>> filter_vars_;
};

// Pattern compiled against a variable table.
struct Slot {
  int var = -1;
  TermId constant = kNoTerm;
};

struct CompiledFilter {
  QueryFilter::Op op;
  int left;
  Slot right;
};

struct CompiledQuery {
  std::vector<std::string> variables;
  std::vector<std::array<Slot, 3>> patterns;
  std::vector<CompiledFilter> filters;
  std::vector<int> select;
};

CompiledQuery Compile(const Query& query) {
  CompiledQuery out;
  out.variables = query.PatternVariables();
  auto index_of = [&](const std::string& name) {
    auto it = std::find(out.variables.begin(), out.variables.end(), name);
    if (it == out.variables.end()) {
      throw ParseError("unbound variable " + name, 1, 1);
    }
    return static_cast<int>(it - out.variables.begin());
  };
  auto slot = [&](const QueryTerm& t) {
    Slot s;
    if (t.is_variable) {
      s.var = index_of(t.variable);
    } else {
      s.constant = Intern(t.constant);
    }
    return s;
  };
  for (const QueryPattern& p : query.patterns) {
    out.patterns.push_back({slot(p.subject), slot(p.predicate), slot(p.object)});
  }
  for (const QueryFilter& f : query.filters) {
    out.filters.push_back({f.op, index_of(f.left), slot(f.right)});
  }
  for (const std::string& v : query.select_vars) out.select.push_back(index_of(v));
  return out;
}

IdPattern Bind(const std::array<Slot, 3>& pattern,
               const std::vector<TermId>& values) {
  IdPattern out{};
  for (int i = 0; i < 3; ++i) {
    out[i] = pattern[i].var < 0 ? pattern[i].constant : values[pattern[i].var];
  }
  return out;
}

std::vector<std::size_t> Plan(const CompiledQuery& query, const Graph& graph) {
  std::vector<std::size_t> remaining(query.patterns.size());
  for (std::size_t i = 0; i < remaining.size(); ++i) remaining[i] = i;
  std::vector<bool> bound(query.variables.size(), false);
  std::vector<TermId> none(query.variables.size(), kNoTerm);
  std::vector<std::size_t> order;
  while (!remaining.empty()) {
    std::size_t best = 0;
    std::tuple<int, std::size_t, std::size_t> best_key{
        std::numeric_limits<int>::max(), 0, 0};
    for (std::size_t i = 0; i < remaining.size(); ++i) {
      const auto& pattern = query.patterns[remaining[i]];
      int open = 0;
      for (const Slot& s : pattern) {
        if (s.var >= 0 && !bound[s.var]) ++open;
      }
      std::tuple<int, std::size_t, std::size_t> key{
          open, graph.Estimate(Bind(pattern, none)), remaining[i]};
      if (key < best_key) {
        best_key = key;
        best = i;
      }
    }
    std::size_t chosen = remaining[best];
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best));
    for (const Slot& s : query.patterns[chosen]) {
      if (s.var >= 0) bound[s.var] = true;
    }
    order.push_back(chosen);
  }
  return order;
}

struct RowHash {
  std::size_t operator()(const std::vector<TermId>& row) const {
    std::size_t h = 1469598103934665603ull;
    for (TermId id : row) h = (h ^ id) * 1099511628211ull;
    return h;
  }
};

}  // namespace

QueryTerm QueryTerm::Variable(std::string name) {
  QueryTerm t;
  t.is_variable = true;
  t.variable = std::move(name);
  return t;
}

QueryTerm QueryTerm::Constant(Term term) {
  QueryTerm t;
  t.constant = std::move(term);
  return t;
}

std::string QueryTerm::ToString() const {
  return is_variable ? variable : constant.ToString();
}

std::vector<std::string> Query::PatternVariables() const {
  std::vector<std::string> out;
  auto add = [&](const QueryTerm& t) {
    if (t.is_variable &&
        std::find(out.begin(), out.end(), t.variable) == out.end()) {
      out.push_back(t.variable);
    }
  };
  for (const QueryPattern& p : patterns) {
    add(p.subject);
    add(p.predicate);
    add(p.object);
  }
  return out;
}

Query ParseQuery(std::string_view text, const PrefixTable& prefixes) {
  return QueryParser(text, prefixes).Parse();
}

SolutionTable SolutionTable::Sorted() const {
  SolutionTable out = *this;
  std::sort(out.rows.begin(), out.rows.end());
  return out;
}

std::string SolutionTable::ToTsv() const {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out += '\t';
    out += header[i];
  }
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += '\t';
      out += row[i].ToString();
    }
    out += '\n';
  }
  return out;
}

std::vector<std::size_t> PlanJoinOrder(const Query& query, const Graph& graph) {
  return Plan(Compile(query), graph);
}

SolutionTable Execute(const Query& query, const Graph& graph) {
  SolutionTable table;
  table.header = query.select_vars;
  CompiledQuery compiled = Compile(query);
  std::vector<std::size_t> order = Plan(compiled, graph);

  // Filters run at the first depth where all of their variables are bound.
  std::vector<std::vector<std::size_t>> filters_at(order.size());
  {
    std::vector<bool> bound(compiled.variables.size(), false);
    std::vector<bool> placed(compiled.filters.size(), false);
    for (std::size_t depth = 0; depth < order.size(); ++depth) {
      for (const Slot& s : compiled.patterns[order[depth]]) {
        if (s.var >= 0) bound[s.var] = true;
      }
      for (std::size_t f = 0; f < compiled.filters.size(); ++f) {
        const CompiledFilter& filter = compiled.filters[f];
        if (placed[f] || !bound[filter.left] ||
            (filter.right.var >= 0 && !bound[filter.right.var])) {
          continue;
        }
        filters_at[depth].push_back(f);
        placed[f] = true;
      }
    }
  }

  std::vector<TermId> values(compiled.variables.size(), kNoTerm);
  std::unordered_set<std::vector<TermId>, RowHash> seen;
  std::vector<TermId> projected(compiled.select.size());
  // Distinct matches bind distinct values when nothing is projected away.
  const bool needs_dedup =
      std::set<int>(compiled.select.begin(), compiled.select.end()).size() <
      compiled.variables.size();

  auto join = [&](auto& self, std::size_t depth) -> void {
    if (depth == order.size()) {
      for (std::size_t i = 0; i < compiled.select.size(); ++i) {
        projected[i] = values[compiled.select[i]];
      }
      if (!needs_dedup || seen.insert(projected).second) {
        std::vector<Term> row;
        row.reserve(projected.size());
        for (TermId id : projected) row.push_back(Resolve(id));
        table.rows.push_back(std::move(row));
      }
      return;
    }
    const auto& pattern = compiled.patterns[order[depth]];
    graph.ForEachMatch(Bind(pattern, values), [&](const IdTriple& t) {
      int newly[3];
      int count = 0;
      bool ok = true;
      for (int i = 0; i < 3 && ok; ++i) {
        const Slot& s = pattern[i];
        if (s.var < 0) continue;
        if (values[s.var] == kNoTerm) {
          values[s.var] = t[i];
          newly[count++] = s.var;
        } else if (values[s.var] != t[i]) {
          ok = false;
        }
      }
      for (std::size_t f : filters_at[depth]) {
        if (!ok) break;
        const CompiledFilter& filter = compiled.filters[f];
        TermId right = filter.right.var >= 0 ? values[filter.right.var]
                                             : filter.right.constant;
        bool equal = values[filter.left] == right;
        ok = filter.op == QueryFilter::Op::kEqual ? equal : !equal;
      }
      if (ok) self(self, depth + 1);
      for (int i = 0; i < count; ++i) values[newly[i]] = kNoTerm;
      return true;
    });
  };
  join(join, 0);
  return table;
}

std::string BenchReport::ToTsv() const {
  std::string out = "query\tdataset\tmedian_ms\treps\trows\n";
  char buf[64];
  for (const BenchCell& cell : cells) {
    std::snprintf(buf, sizeof(buf), "%.6f", cell.median_ms);
    out += cell.query_id + '\t' + cell.dataset_id + '\t' + buf + '\t' +
           std::to_string(cell.reps) + '\t' + std::to_string(cell.rows) + '\n';
  }
  for (const auto& [query, sum] : separate_sum_ms) {
    std::snprintf(buf, sizeof(buf), "%.6f", sum);
    out += query + "\tsum_separate\t" + buf + "\t\t\n";
  }
  return out;
}

BenchReport Bench(const std::vector<NamedQuery>& queries,
                  const std::vector<NamedGraph>& datasets, std::size_t reps) {
  if (reps < 5) throw std::invalid_argument("bench needs at least 5 repetitions");
  Graph combined;
  for (const NamedGraph& d : datasets) combined.InsertAll(*d.graph);
  std::vector<const Graph*> graphs;
  for (const NamedGraph& d : datasets) graphs.push_back(d.graph);
  graphs.push_back(&combined);

  auto median = [](std::vector<double>& samples) {
    std::sort(samples.begin(), samples.end());
    const std::size_t mid = samples.size() / 2;
    return samples.size() % 2 ? samples[mid] : (samples[mid - 1] + samples[mid]) / 2;
  };

  BenchReport report;
  for (const NamedQuery& q : queries) {
    std::vector<BenchCell> cells(graphs.size());
    for (std::size_t g = 0; g < graphs.size(); ++g) {
      cells[g].query_id = q.id;
      cells[g].dataset_id = g < datasets.size() ? datasets[g].id : std::string(kCombinedDataset);
      cells[g].rows = Execute(q.query, *graphs[g]).rows.size();  // warm-up
      cells[g].reps = reps;
    }
    // Round-robin so that machine drift affects every cell alike.
    std::vector<std::vector<double>> samples(graphs.size());
    for (std::size_t r = 0; r < reps; ++r) {
      for (std::size_t g = 0; g < graphs.size(); ++g) {
        auto start = std::chrono::steady_clock::now();
        SolutionTable table = Execute(q.query, *graphs[g]);
        auto end = std::chrono::steady_clock::now();
        samples[g].push_back(std::chrono::duration<double, std::milli>(end - start).count());
      }
    }
    double sum = 0;
    for (std::size_t g = 0; g < graphs.size(); ++g) {
      cells[g].median_ms = median(samples[g]);
      if (g < datasets.size()) sum += cells[g].median_ms;
      report.cells.push_back(cells[g]);
    }
    report.separate_sum_ms[q.id] = sum;
    report.combined_ms[q.id] = cells.back().median_ms;
  }
  return report;
}

}  // namespace vbd
