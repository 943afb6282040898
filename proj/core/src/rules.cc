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

#include "vbd/rules.h"

#include <algorithm>
#include <cctype>
#include <map>
#include <unordered_set>

#include "vbd/errors.h"

namespace vbd {

namespace {

bool IsNameStart(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool IsNameChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

std::string ToLower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// Strips a trailing `# comment` that is not inside a string literal.
std::string_view StripComment(std::string_view line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (in_string) {
      if (c == '\\') {
        ++i;
      } else if (c == '"') {
        in_string = false;
      }
    } else if (c == '"') {
      in_string = true;
    } else if (c == '#') {
      return line.substr(0, i);
    }
  }
  return line;
}

// Parses the atoms of one rule. Columns are 1-based within the source line;
// `offset` is the column of text_[0].
class RuleLineParser {
 public:
  RuleLineParser(std::string_view text, std::size_t line, std::size_t offset,
                 const RuleParseOptions& options)
      : text_(text), line_(line), offset_(offset), options_(options) {}

  // Fills body/head and records the original spelling of every variable.
  void Parse(Rule& rule) {
    rule.body = AtomList();
    SkipWs();
    if (text_.substr(pos_, 2) != "->") Fail("expected '->' or '^'");
    pos_ += 2;
    rule.head = AtomList();
    SkipWs();
    if (pos_ != text_.size()) Fail("unexpected trailing text");
    if (rule.body.empty()) Fail("empty rule body");
    if (rule.head.empty()) Fail("empty rule head");
    for (const Atom& atom : rule.head) {
      if (atom.kind == AtomKind::kBuiltin) Fail("builtin atom in rule head");
    }
  }

  const std::map<std::string, std::set<std::string>>& spellings() const {
    return spellings_;
  }

 private:
  [[noreturn]] void Fail(const std::string& message) const {
    throw ParseError(message, line_, offset_ + pos_);
  }

  void SkipWs() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  char Peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  std::vector<Atom> AtomList() {
    std::vector<Atom> atoms;
    while (true) {
      SkipWs();
      atoms.push_back(ParseAtom());
      SkipWs();
      if (Peek() == '^') {
        ++pos_;
        continue;
      }
      return atoms;
    }
  }

  // name or prefix:name
  std::string ReadName() {
    std::size_t start = pos_;
    if (!IsNameStart(Peek())) Fail("expected a name");
    while (pos_ < text_.size() && IsNameChar(text_[pos_])) {
      // Stop before an arrow glued to a name.
      if (text_[pos_] == '-' && pos_ + 1 < text_.size() &&
          text_[pos_ + 1] == '>') {
        break;
      }
      ++pos_;
    }
    if (Peek() == ':' && pos_ + 1 < text_.size() && IsNameStart(text_[pos_ + 1])) {
      ++pos_;
      while (pos_ < text_.size() && IsNameChar(text_[pos_])) ++pos_;
    }
    return std::string(text_.substr(start, pos_ - start));
  }

  Term ResolveName(const std::string& name, std::size_t at) {
    std::size_t colon = name.find(':');
    std::string label = colon == std::string::npos ? "" : name.substr(0, colon);
    std::string local =
        colon == std::string::npos ? name : name.substr(colon + 1);
    auto ns = options_.prefixes.Lookup(label);
    if (!ns) {
      pos_ = at;
      Fail("undefined prefix '" + label + ":'");
    }
    return Term::Iri(*ns + local);
  }

  Atom ParseAtom() {
    std::size_t start = pos_;
    std::string name = ReadName();
    Atom atom;
    atom.predicate = ResolveName(name, start);
    SkipWs();
    if (Peek() != '(') Fail("expected '(' after " + name);
    ++pos_;
    while (true) {
      SkipWs();
      atom.args.push_back(ParseArg());
      SkipWs();
      if (Peek() == ',') {
        ++pos_;
        continue;
      }
      if (Peek() == ')') {
        ++pos_;
        break;
      }
      Fail("expected ',' or ')'");
    }
    const bool builtin = atom.predicate.value().starts_with(ns::kSwrlb);
    if (builtin) {
      if (atom.predicate != SwrlbEqual()) {
        pos_ = start;
        Fail("unsupported builtin " + name);
      }
      if (atom.args.size() != 2) Fail("swrlb:equal takes 2 arguments");
      atom.kind = AtomKind::kBuiltin;
    } else if (atom.args.size() == 1) {
      atom.kind = AtomKind::kClass;
    } else if (atom.args.size() == 2) {
      atom.kind = AtomKind::kProperty;
    } else {
      pos_ = start;
      Fail("atom " + name + " must have 1 or 2 arguments");
    }
    return atom;
  }

  AtomArg ParseArg() {
    char c = Peek();
    std::size_t start = pos_;
    if (c == '?') {
      ++pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
              text_[pos_] == '_')) {
        ++pos_;
      }
      if (pos_ == start + 1) Fail("empty variable name");
      std::string spelled(text_.substr(start, pos_ - start));
      std::string normalized = ToLower(spelled);
      spellings_[normalized].insert(spelled);
      return AtomArg::Variable(normalized);
    }
    if (c == '"') {
      ++pos_;
      std::string value;
      while (true) {
        if (pos_ >= text_.size()) {
          pos_ = start;
          Fail("unterminated string literal");
        }
        char d = text_[pos_++];
        if (d == '"') break;
        if (d == '\\' && pos_ < text_.size()) d = text_[pos_++];
        value += d;
      }
      return AtomArg::Constant(Term::String(std::move(value)));
    }
    if (c == '+' || c == '-' || std::isdigit(static_cast<unsigned char>(c))) {
      ++pos_;
      bool decimal = false;
      while (pos_ < text_.size() &&
             (std::isdigit(static_cast<unsigned char>(text_[pos_])) ||
              (text_[pos_] == '.' && !decimal))) {
        decimal |= text_[pos_] == '.';
        ++pos_;
      }
      try {
        return AtomArg::Constant(
            Term::Literal(text_.substr(start, pos_ - start),
                          decimal ? Datatype::kDecimal : Datatype::kInteger));
      } catch (const Error& e) {
        pos_ = start;
        Fail(e.what());
      }
    }
    std::string name = ReadName();
    if (name == "true") return AtomArg::Constant(Term::Boolean(true));
    if (name == "false") return AtomArg::Constant(Term::Boolean(false));
    return AtomArg::Constant(ResolveName(name, start));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_;
  std::size_t offset_;
  const RuleParseOptions& options_;
  std::map<std::string, std::set<std::string>> spellings_;
};

void CheckSafety(const Rule& rule) {
  std::unordered_set<std::string> bound;
  for (const Atom& atom : rule.body) {
    if (atom.kind == AtomKind::kBuiltin) continue;
    for (const AtomArg& arg : atom.args) {
      if (arg.is_variable) bound.insert(arg.variable);
    }
  }
  if (bound.empty() &&
      std::none_of(rule.body.begin(), rule.body.end(), [](const Atom& a) {
        return a.kind != AtomKind::kBuiltin;
      })) {
    throw ParseError("rule body needs a class or property atom", rule.line, 1);
  }
  auto check = [&](const Atom& atom) {
    for (const AtomArg& arg : atom.args) {
      if (arg.is_variable && !bound.contains(arg.variable)) {
        throw UnsafeRuleError(arg.variable, rule.line);
      }
    }
  };
  for (const Atom& atom : rule.body) {
    if (atom.kind == AtomKind::kBuiltin) check(atom);
  }
  for (const Atom& atom : rule.head) check(atom);
}

std::string ArgToString(const AtomArg& arg) {
  if (arg.is_variable) return arg.variable;
  const Term& t = arg.constant;
  if (t.is_iri()) {
    if (t.value().starts_with(ns::kVbd)) return std::string(t.LocalName());
    return t.ToString();
  }
  return t.ToString();
}

}  // namespace

AtomArg AtomArg::Variable(std::string name) {
  AtomArg arg;
  arg.is_variable = true;
  arg.variable = std::move(name);
  return arg;
}

AtomArg AtomArg::Constant(Term term) {
  AtomArg arg;
  arg.constant = std::move(term);
  return arg;
}

std::string Atom::ToString() const {
  std::string out;
  if (kind == AtomKind::kBuiltin) {
    out = "swrlb:" + std::string(predicate.LocalName());
  } else if (predicate.value().starts_with(ns::kVbd)) {
    out = std::string(predicate.LocalName());
  } else {
    out = predicate.ToString();
  }
  out += '(';
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ", ";
    out += ArgToString(args[i]);
  }
  return out + ')';
}

std::string_view RuleSourceName(RuleSource source) {
  switch (source) {
    case RuleSource::kTable2:
      return "table2";
    case RuleSource::kTable3:
      return "table3";
    case RuleSource::kTable4:
      return "table4";
    case RuleSource::kProse:
      return "prose";
    case RuleSource::kUser:
      return "user";
  }
  return "user";
}

bool RuleSourceFromName(std::string_view name, RuleSource* out) {
  for (RuleSource s : {RuleSource::kTable2, RuleSource::kTable3,
                       RuleSource::kTable4, RuleSource::kProse,
                       RuleSource::kUser}) {
    if (RuleSourceName(s) == name) {
      *out = s;
      return true;
    }
  }
  return false;
}

std::vector<std::string> Rule::Variables() const {
  std::vector<std::string> out;
  auto add = [&out](const std::vector<Atom>& atoms) {
    for (const Atom& atom : atoms) {
      for (const AtomArg& arg : atom.args) {
        if (arg.is_variable &&
            std::find(out.begin(), out.end(), arg.variable) == out.end()) {
          out.push_back(arg.variable);
        }
      }
    }
  };
  add(body);
  add(head);
  return out;
}

std::set<Term> Rule::Predicates() const {
  std::set<Term> out;
  for (const auto* atoms : {&body, &head}) {
    for (const Atom& atom : *atoms) {
      if (atom.kind != AtomKind::kBuiltin) out.insert(atom.predicate);
    }
  }
  return out;
}

std::string Rule::ToString() const {
  std::string out;
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (i) out += " ^ ";
    out += body[i].ToString();
  }
  out += " -> ";
  for (std::size_t i = 0; i < head.size(); ++i) {
    if (i) out += " ^ ";
    out += head[i].ToString();
  }
  return out;
}

Term SwrlbEqual() { return Term::Iri(std::string(ns::kSwrlb) + "equal"); }

RuleSet ParseRules(std::string_view text, const RuleParseOptions& options) {
  RuleSet out;
  RuleSource source = options.default_source;
  std::string pending_note;
  std::set<std::string> ids;
  std::size_t line_no = 0;
  std::size_t unlabeled = 0;
  while (!text.empty()) {
    std::size_t nl = text.find('\n');
    std::string_view raw = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view() : text.substr(nl + 1);
    ++line_no;
    std::string_view line = Trim(raw);
    if (line.empty() || line.front() == '#') continue;

    if (line.starts_with("@source")) {
      std::string_view name = Trim(line.substr(7));
      if (!RuleSourceFromName(name, &source)) {
        throw ParseError("unknown rule source '" + std::string(name) + "'",
                         line_no, 1);
      }
      continue;
    }
    if (line.starts_with("@note")) {
      if (!pending_note.empty()) pending_note += ' ';
      pending_note += std::string(Trim(line.substr(5)));
      continue;
    }

    line = Trim(StripComment(line));
    std::size_t column = static_cast<std::size_t>(line.data() - raw.data()) + 1;
    Rule rule;
    rule.line = line_no;
    rule.source = source;
    rule.note = std::move(pending_note);
    pending_note.clear();

    if (line.starts_with("rule ") || line.starts_with("rule\t")) {
      std::size_t colon = line.find(':');
      std::size_t paren = line.find('(');
      if (colon == std::string_view::npos ||
          (paren != std::string_view::npos && paren < colon)) {
        throw ParseError("expected ':' after rule label", line_no, column);
      }
      rule.id = std::string(Trim(line.substr(5, colon - 5)));
      if (rule.id.empty()) throw ParseError("empty rule id", line_no, column);
      std::string_view rest = line.substr(colon + 1);
      std::size_t skipped = colon + 1;
      while (!rest.empty() && std::isspace(static_cast<unsigned char>(rest.front()))) {
        rest.remove_prefix(1);
        ++skipped;
      }
      column += skipped;
      line = rest;
    } else {
      rule.id = options.id_prefix + std::to_string(++unlabeled);
    }
    if (!ids.insert(rule.id).second) {
      throw ParseError("duplicate rule id '" + rule.id + "'", line_no, 1);
    }
    rule.text = std::string(line);

    RuleLineParser parser(line, line_no, column, options);
    parser.Parse(rule);
    CheckSafety(rule);
    for (const auto& [variable, spelled] : parser.spellings()) {
      if (spelled.size() > 1) {
        std::string forms;
        for (const std::string& s : spelled) {
          if (!forms.empty()) forms += ", ";
          forms += s;
        }
        out.warnings.push_back("rule " + rule.id + " (line " +
                               std::to_string(line_no) + "): variable " +
                               variable + " written as " + forms);
      }
    }
    out.rules.push_back(std::move(rule));
  }
  return out;
}

Rule ParseRule(std::string_view line, const RuleParseOptions& options) {
  RuleSet set = ParseRules(line, options);
  if (set.rules.size() != 1) {
    throw ParseError("expected exactly one rule", 1, 1);
  }
  return std::move(set.rules.front());
}

}  // namespace vbd
