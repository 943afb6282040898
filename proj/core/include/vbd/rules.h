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

#ifndef VBD_RULES_H_
#define VBD_RULES_H_

#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "vbd/term.h"
#include "vbd/turtle.h"

namespace vbd {

enum class AtomKind { kClass, kProperty, kBuiltin };

// A rule argument: a variable (normalized to lower case, including the
// leading '?') or a constant term.
struct AtomArg {
  bool is_variable = false;
  std::string variable;
  Term constant;

  static AtomArg Variable(std::string name);
  static AtomArg Constant(Term term);
  bool operator==(const AtomArg&) const = default;
};

struct Atom {
  AtomKind kind = AtomKind::kClass;
  // Class IRI, property IRI or builtin IRI (e.g. swrlb:equal).
  Term predicate;
  std::vector<AtomArg> args;  // 1 for class atoms, 2 otherwise

  std::string ToString() const;
  bool operator==(const Atom&) const = default;
};

enum class RuleSource { kTable2, kTable3, kTable4, kProse, kUser };

std::string_view RuleSourceName(RuleSource source);
bool RuleSourceFromName(std::string_view name, RuleSource* out);

// A Horn rule `body -> head`. Multiple head atoms share the body bindings.
struct Rule {
  std::string id;
  std::vector<Atom> body;
  std::vector<Atom> head;
  RuleSource source = RuleSource::kUser;
  std::string note;  // basis for prose-derived rules
  std::string text;  // the rule as written in its file
  std::size_t line = 0;

  // Distinct variables in first-occurrence order.
  std::vector<std::string> Variables() const;
  // Class and property predicates (builtins excluded).
  std::set<Term> Predicates() const;
  std::string ToString() const;
};

struct RuleParseOptions {
  // Resolves `pfx:name`; the empty prefix is used for bare names.
  PrefixTable prefixes = PrefixTable::Standard();
  RuleSource default_source = RuleSource::kUser;
  // Ids for unlabeled rules are `<id_prefix><n>` with n counting from 1.
  std::string id_prefix = "rule";
};

struct RuleSet {
  std::vector<Rule> rules;
  // Lint messages, e.g. one variable written with different letter cases.
  std::vector<std::string> warnings;
};

// Parses rule text: one rule per line, `#` comments, optional
// `rule <id>:` label, `^` between atoms, `->` between body and head.
// Directives: `@source <table2|table3|table4|prose|user>` sets the source of
// the following rules; `@note <text>` attaches a note to the next rule.
// Throws ParseError (with position) on syntax errors and UnsafeRuleError when
// a head or builtin variable is not bound by a class/property body atom.
RuleSet ParseRules(std::string_view text,
                   const RuleParseOptions& options = RuleParseOptions());

// Parses a single rule line.
Rule ParseRule(std::string_view line,
               const RuleParseOptions& options = RuleParseOptions());

Term SwrlbEqual();

}  // namespace vbd

#endif  // VBD_RULES_H_
