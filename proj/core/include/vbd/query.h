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

#ifndef VBD_QUERY_H_
#define VBD_QUERY_H_

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "vbd/graph.h"
#include "vbd/turtle.h"

namespace vbd {

// A pattern position: a variable name (with leading '?') or a constant.
struct QueryTerm {
  bool is_variable = false;
  std::string variable;
  Term constant;

  static QueryTerm Variable(std::string name);
  static QueryTerm Constant(Term term);
  std::string ToString() const;
  bool operator==(const QueryTerm&) const = default;
};

struct QueryPattern {
  QueryTerm subject;
  QueryTerm predicate;
  QueryTerm object;
  bool operator==(const QueryPattern&) const = default;
};

struct QueryFilter {
  enum class Op { kEqual, kNotEqual };
  Op op = Op::kEqual;
  std::string left;  // variable
  QueryTerm right;   // variable or constant
  bool operator==(const QueryFilter&) const = default;
};

struct Query {
  std::vector<std::string> select_vars;
  bool distinct = false;  // rows are deduplicated either way
  std::vector<QueryPattern> patterns;
  std::vector<QueryFilter> filters;

  // Distinct pattern variables in first-occurrence order.
  std::vector<std::string> PatternVariables() const;
};

// Grammar:
//   query   := prefix* SELECT DISTINCT? (var+ | '*') WHERE? '{' body '}' filter*
//   body    := (triple | filter) ('.' (triple | filter))* '.'?
//   filter  := FILTER '(' cmp ('&&' cmp)* ')'
//   cmp     := var ('=' | '!=') (var | constant)
// Terms are Turtle-style: <iri>, prefixed names, `a`, quoted strings with an
// optional ^^datatype, integers, decimals, true/false.
// Throws ParseError on syntax errors and on select/filter variables that no
// pattern binds.
Query ParseQuery(std::string_view text,
                 const PrefixTable& prefixes = PrefixTable::Standard());

struct SolutionTable {
  std::vector<std::string> header;
  std::vector<std::vector<Term>> rows;  // one value per header column

  // Rows sorted lexicographically; used for comparisons and display.
  SolutionTable Sorted() const;
  std::string ToTsv() const;
};

SolutionTable Execute(const Query& query, const Graph& graph);

// Pattern evaluation order chosen by Execute (indexes into query.patterns).
std::vector<std::size_t> PlanJoinOrder(const Query& query, const Graph& graph);

struct NamedQuery {
  std::string id;
  Query query;
};

struct NamedGraph {
  std::string id;
  const Graph* graph = nullptr;
};

struct BenchCell {
  std::string query_id;
  std::string dataset_id;  // "combined" for the union of all datasets
  double median_ms = 0;
  std::size_t reps = 0;
  std::size_t rows = 0;
};

struct BenchReport {
  std::vector<BenchCell> cells;
  // query id -> sum of the per-dataset medians.
  std::map<std::string, double> separate_sum_ms;
  // query id -> median on the union of all datasets.
  std::map<std::string, double> combined_ms;

  // Tab-separated: query, dataset, median_ms, reps, rows; then one
  // `<query>\tsum_separate\t...` line per query.
  std::string ToTsv() const;
};

inline constexpr std::string_view kCombinedDataset = "combined";

// Times Execute (parse excluded) with a monotonic clock, `reps` runs per cell
// after one warm-up run, reporting the median. Throws std::invalid_argument if
// reps < 5.
BenchReport Bench(const std::vector<NamedQuery>& queries,
                  const std::vector<NamedGraph>& datasets, std::size_t reps);

}  // namespace vbd

#endif  // VBD_QUERY_H_
