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

#ifndef VBD_TURTLE_H_
#define VBD_TURTLE_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "vbd/graph.h"

namespace vbd {

// Prefix label -> namespace IRI, plus an optional base for relative <iri>s.
class PrefixTable {
 public:
  PrefixTable() = default;

  // rdf, rdfs, owl, xsd, swrlb and the empty prefix bound to the VBD
  // namespace.
  static PrefixTable Standard();

  // Rebinding an existing label replaces its IRI.
  void Set(std::string label, std::string iri) {
    prefixes_[std::move(label)] = std::move(iri);
  }
  std::optional<std::string> Lookup(std::string_view label) const;
  // Expands "label:local"; nullopt if the label is unknown.
  std::optional<std::string> Expand(std::string_view prefixed) const;
  // Longest-namespace abbreviation, or nullopt if no prefix applies or the
  // local part is not a valid prefixed-name local.
  std::optional<std::string> Abbreviate(std::string_view iri) const;

  const std::map<std::string, std::string, std::less<>>& entries() const {
    return prefixes_;
  }
  const std::string& base() const { return base_; }
  void set_base(std::string base) { base_ = std::move(base); }

  void Merge(const PrefixTable& other);

 private:
  std::map<std::string, std::string, std::less<>> prefixes_;
  std::string base_;
};

struct TurtleDocument {
  Graph graph;
  PrefixTable prefixes;
};

// Parses the supported Turtle subset: @prefix/@base (and SPARQL-style PREFIX
// and BASE), <iri>, prefixed names, `a`, labeled blank nodes, string literals
// with escapes and optional ^^datatype or @lang (dropped), bare
// true/false/integer/decimal, `;` and `,` lists, and # comments.
// Throws ParseError with the line/column of the first problem.
// `initial` seeds the prefix table (e.g. with PrefixTable::Standard()).
TurtleDocument ParseTurtle(std::string_view text,
                           const PrefixTable& initial = PrefixTable());

// Deterministic serialization; ParseTurtle(SerializeTurtle(g, p)).graph == g.
std::string SerializeTurtle(const Graph& graph, const PrefixTable& prefixes);

// True if `local` can appear unescaped after "prefix:" in our grammar.
bool IsValidPrefixedLocal(std::string_view local);

}  // namespace vbd

#endif  // VBD_TURTLE_H_
