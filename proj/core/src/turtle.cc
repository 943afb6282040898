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

#include "vbd/turtle.h"

#include <algorithm>
#include <cctype>
#include <cstdint>

#include "vbd/errors.h"

namespace vbd {

namespace {

bool IsPnChar(char c) {
  unsigned char u = static_cast<unsigned char>(c);
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c == '_' || c == '-' || u >= 0x80;
}

bool IsPrefixStart(char c) {
  unsigned char u = static_cast<unsigned char>(c);
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || u >= 0x80;
}

void AppendUtf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

class TurtleParser {
 public:
  TurtleParser(std::string_view text, const PrefixTable& initial)
      : text_(text) {
    doc_.prefixes = initial;
  }

  TurtleDocument Parse() {
    SkipWs();
    while (!AtEnd()) {
      if (Peek() == '@') {
        Directive();
      } else if (MatchKeyword("PREFIX") || MatchKeyword("BASE")) {
        SparqlDirective();
      } else {
        Statement();
      }
      SkipWs();
    }
    return std::move(doc_);
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
  char Peek(std::size_t ahead = 0) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }

  void SkipWs() {
    while (!AtEnd()) {
      char c = Peek();
      if (c == '#') {
        while (!AtEnd() && Peek() != '\n') ++pos_;
      } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        ++pos_;
      } else {
        break;
      }
    }
  }

  void Expect(char c) {
    SkipWs();
    if (Peek() != c) {
      Fail(std::string("expected '") + c + "'");
    }
    ++pos_;
  }

  // Case-insensitive keyword followed by whitespace.
  bool MatchKeyword(std::string_view kw) const {
    if (pos_ + kw.size() >= text_.size()) return false;
    for (std::size_t i = 0; i < kw.size(); ++i) {
      char c = text_[pos_ + i];
      if (std::toupper(static_cast<unsigned char>(c)) != kw[i]) return false;
    }
    char next = text_[pos_ + kw.size()];
    return next == ' ' || next == '\t' || next == '\n' || next == '\r';
  }

  std::string ReadPrefixLabel() {
    SkipWs();
    std::size_t start = pos_;
    while (!AtEnd() && Peek() != ':' && IsPnChar(Peek())) ++pos_;
    if (Peek() != ':') Fail("expected prefix label ending in ':'");
    std::string label(text_.substr(start, pos_ - start));
    ++pos_;
    return label;
  }

  void Directive() {
    std::size_t start = pos_;
    ++pos_;
    std::size_t word_start = pos_;
    while (!AtEnd() && std::isalpha(static_cast<unsigned char>(Peek()))) ++pos_;
    std::string_view word = text_.substr(word_start, pos_ - word_start);
    if (word == "prefix") {
      std::string label = ReadPrefixLabel();
      SkipWs();
      std::string iri = ReadIriRef();
      doc_.prefixes.Set(std::move(label), std::move(iri));
      Expect('.');
    } else if (word == "base") {
      SkipWs();
      doc_.prefixes.set_base(ReadIriRef());
      Expect('.');
    } else {
      Fail("unknown directive @" + std::string(word), start);
    }
  }

  void SparqlDirective() {
    if (MatchKeyword("PREFIX")) {
      pos_ += 6;
      std::string label = ReadPrefixLabel();
      SkipWs();
      doc_.prefixes.Set(std::move(label), ReadIriRef());
    } else {
      pos_ += 4;
      SkipWs();
      doc_.prefixes.set_base(ReadIriRef());
    }
  }

  // <...>, resolved against the base when relative.
  std::string ReadIriRef() {
    if (Peek() != '<') Fail("expected '<'");
    std::size_t start = pos_;
    ++pos_;
    std::string iri;
    while (true) {
      if (AtEnd()) Fail("unterminated IRI", start);
      char c = Peek();
      if (c == '>') break;
      if (c == '\n' || c == ' ' || c == '"' || c == '<') {
        Fail("invalid character in IRI");
      }
      if (c == '\\') {
        ++pos_;
        char e = Peek();
        if (e == 'u' || e == 'U') {
          iri += ReadUnicodeEscape(e == 'u' ? 4 : 8);
          continue;
        }
        Fail("invalid escape in IRI");
      }
      iri += c;
      ++pos_;
    }
    ++pos_;
    if (iri.find(':') == std::string::npos) {
      if (doc_.prefixes.base().empty()) {
        Fail("relative IRI <" + iri + "> without @base", start);
      }
      iri = doc_.prefixes.base() + iri;
    }
    return iri;
  }

  // Called with pos_ on the 'u'/'U'.
  std::string ReadUnicodeEscape(int digits) {
    std::size_t start = pos_ - 1;
    ++pos_;
    std::uint32_t cp = 0;
    for (int i = 0; i < digits; ++i) {
      char h = Peek();
      int v;
      if (h >= '0' && h <= '9') {
        v = h - '0';
      } else if (h >= 'a' && h <= 'f') {
        v = h - 'a' + 10;
      } else if (h >= 'A' && h <= 'F') {
        v = h - 'A' + 10;
      } else {
        Fail("invalid unicode escape", start);
      }
      cp = cp * 16 + static_cast<std::uint32_t>(v);
      ++pos_;
    }
    if (cp > 0x10FFFF) Fail("code point out of range", start);
    std::string out;
    AppendUtf8(out, cp);
    return out;
  }

  void Statement() {
    Term subject = ReadSubject();
    PredicateObjectList(subject);
    Expect('.');
  }

  void PredicateObjectList(const Term& subject) {
    while (true) {
      SkipWs();
      Term predicate = ReadPredicate();
      while (true) {
        SkipWs();
        Term object = ReadObject();
        Triple t{subject, predicate, object};
        try {
          doc_.graph.Insert(t);
        } catch (const MalformedTripleError& e) {
          Fail(e.what());
        }
        SkipWs();
        if (Peek() == ',') {
          ++pos_;
          continue;
        }
        break;
      }
      SkipWs();
      if (Peek() != ';') break;
      // Repeated ';' and a trailing ';' before '.' are legal.
      while (Peek() == ';') {
        ++pos_;
        SkipWs();
      }
      if (Peek() == '.') break;
    }
  }

  Term ReadSubject() {
    char c = Peek();
    if (c == '<' || c == '_' || IsPrefixStart(c) || c == ':') {
      if (c != '<' && c != '_' && (IsKeyword("true") || IsKeyword("false"))) {
        Fail("literal cannot be a subject");
      }
      return ReadIriTerm();
    }
    if (c == '"' || c == '[' || c == '(') {
      Fail(c == '"' ? "literal cannot be a subject"
                    : "anonymous blank nodes and collections are unsupported");
    }
    Fail("expected subject");
  }

  Term ReadPredicate() {
    if (Peek() == 'a') {
      char n = Peek(1);
      if (n == ' ' || n == '\t' || n == '\n' || n == '\r' || n == '<' ||
          n == '"') {
        ++pos_;
        return RdfType();
      }
    }
    if (Peek() == '_') Fail("blank node cannot be a predicate");
    return ReadIriTerm();
  }

  bool IsKeyword(std::string_view kw) const {
    if (text_.substr(pos_, kw.size()) != kw) return false;
    char n = Peek(kw.size());
    return !IsPnChar(n) && n != ':' ;
  }

  Term ReadObject() {
    char c = Peek();
    if (c == '"') return ReadStringLiteral();
    if (c == '+' || c == '-' || c == '.' || (c >= '0' && c <= '9')) {
      return ReadNumber();
    }
    if (IsKeyword("true")) {
      pos_ += 4;
      return Term::Boolean(true);
    }
    if (IsKeyword("false")) {
      pos_ += 5;
      return Term::Boolean(false);
    }
    if (c == '[' || c == '(') {
      Fail("anonymous blank nodes and collections are unsupported");
    }
    return ReadIriTerm();
  }

  Term ReadIriTerm() {
    char c = Peek();
    if (c == '<') return Term::Iri(ReadIriRef());
    std::size_t start = pos_;
    if (c == '_' && Peek(1) == ':') {
      pos_ += 2;
      std::size_t label_start = pos_;
      while (!AtEnd() && IsPnChar(Peek())) ++pos_;
      if (pos_ == label_start) Fail("empty blank node label", start);
      return Term::Iri(std::string(text_.substr(start, pos_ - start)));
    }
    // prefixed name
    while (!AtEnd() && IsPnChar(Peek())) ++pos_;
    if (Peek() != ':') Fail("expected IRI, prefixed name or literal", start);
    std::string label(text_.substr(start, pos_ - start));
    ++pos_;
    std::size_t local_start = pos_;
    while (!AtEnd()) {
      char d = Peek();
      if (IsPnChar(d)) {
        ++pos_;
      } else if (d == '.' && IsPnChar(Peek(1))) {
        // Dots are allowed inside, not at the end of, a local name.
        ++pos_;
      } else {
        break;
      }
    }
    std::string_view local = text_.substr(local_start, pos_ - local_start);
    auto ns = doc_.prefixes.Lookup(label);
    if (!ns) Fail("undefined prefix '" + label + ":'", start);
    return Term::Iri(*ns + std::string(local));
  }

  Term ReadStringLiteral() {
    std::size_t start = pos_;
    ++pos_;
    std::string value;
    while (true) {
      if (AtEnd()) Fail("unterminated string literal", start);
      char c = Peek();
      if (c == '"') break;
      if (c == '\n' || c == '\r') Fail("newline in string literal", start);
      if (c == '\\') {
        ++pos_;
        char e = Peek();
        switch (e) {
          case 'n':
            value += '\n';
            break;
          case 't':
            value += '\t';
            break;
          case 'r':
            value += '\r';
            break;
          case 'b':
            value += '\b';
            break;
          case 'f':
            value += '\f';
            break;
          case '"':
            value += '"';
            break;
          case '\'':
            value += '\'';
            break;
          case '\\':
            value += '\\';
            break;
          case 'u':
            value += ReadUnicodeEscape(4);
            continue;
          case 'U':
            value += ReadUnicodeEscape(8);
            continue;
          default:
            Fail("invalid escape sequence in string literal");
        }
        ++pos_;
        continue;
      }
      value += c;
      ++pos_;
    }
    ++pos_;
    if (Peek() == '^' && Peek(1) == '^') {
      pos_ += 2;
      std::size_t dt_start = pos_;
      Term dt = ReadIriTerm();
      auto type = DatatypeFromName(dt.value());
      if (!type || *type == Datatype::kNone) {
        Fail("unsupported datatype " + dt.value(), dt_start);
      }
      try {
        return Term::Literal(value, *type);
      } catch (const Error& e) {
        Fail(e.what(), start);
      }
    }
    if (Peek() == '@') {
      ++pos_;
      while (!AtEnd() && (IsPnChar(Peek()))) ++pos_;
    }
    return Term::String(std::move(value));
  }

  Term ReadNumber() {
    std::size_t start = pos_;
    if (Peek() == '+' || Peek() == '-') ++pos_;
    bool digits_before = false;
    while (std::isdigit(static_cast<unsigned char>(Peek()))) {
      ++pos_;
      digits_before = true;
    }
    bool decimal = false;
    if (Peek() == '.' && std::isdigit(static_cast<unsigned char>(Peek(1)))) {
      decimal = true;
      ++pos_;
      while (std::isdigit(static_cast<unsigned char>(Peek()))) ++pos_;
    }
    if (!digits_before && !decimal) Fail("malformed number", start);
    if (Peek() == 'e' || Peek() == 'E') {
      Fail("double literals are unsupported", start);
    }
    std::string_view lexical = text_.substr(start, pos_ - start);
    try {
      return Term::Literal(lexical,
                           decimal ? Datatype::kDecimal : Datatype::kInteger);
    } catch (const Error& e) {
      Fail(e.what(), start);
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  TurtleDocument doc_;
};

void AppendEscaped(std::string& out, std::string_view value) {
  out += '"';
  for (char c : value) {
    switch (c) {
      case '"':
        out += "\\\"";
        break;
      case '\\':
        out += "\\\\";
        break;
      case '\n':
        out += "\\n";
        break;
      case '\r':
        out += "\\r";
        break;
      case '\t':
        out += "\\t";
        break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          static const char* hex = "0123456789ABCDEF";
          out += "\\u00";
          out += hex[(c >> 4) & 0xF];
          out += hex[c & 0xF];
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

std::string WriteTerm(const Term& term, const PrefixTable& prefixes) {
  if (term.is_literal()) {
    std::string out;
    switch (term.datatype()) {
      case Datatype::kString:
        AppendEscaped(out, term.value());
        return out;
      case Datatype::kBoolean:
      case Datatype::kInteger:
      case Datatype::kDecimal:
        return term.value();
      case Datatype::kNone:
        break;
    }
  }
  if (term.is_blank()) return term.value();
  if (auto abbreviated = prefixes.Abbreviate(term.value())) {
    return *abbreviated;
  }
  std::string out = "<";
  for (char c : term.value()) {
    unsigned char u = static_cast<unsigned char>(c);
    if (u <= 0x20 || c == '<' || c == '>' || c == '"' || c == '{' ||
        c == '}' || c == '|' || c == '^' || c == '`' || c == '\\') {
      static const char* hex = "0123456789ABCDEF";
      out += "\\u00";
      out += hex[(u >> 4) & 0xF];
      out += hex[u & 0xF];
    } else {
      out += c;
    }
  }
  return out + ">";
}

}  // namespace

PrefixTable PrefixTable::Standard() {
  PrefixTable table;
  table.Set("rdf", std::string(ns::kRdf));
  table.Set("rdfs", std::string(ns::kRdfs));
  table.Set("owl", std::string(ns::kOwl));
  table.Set("xsd", std::string(ns::kXsd));
  table.Set("swrlb", std::string(ns::kSwrlb));
  table.Set("", std::string(ns::kVbd));
  return table;
}

std::optional<std::string> PrefixTable::Lookup(std::string_view label) const {
  auto it = prefixes_.find(label);
  if (it == prefixes_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::string> PrefixTable::Expand(std::string_view prefixed) const {
  std::size_t colon = prefixed.find(':');
  if (colon == std::string_view::npos) return std::nullopt;
  auto ns = Lookup(prefixed.substr(0, colon));
  if (!ns) return std::nullopt;
  return *ns + std::string(prefixed.substr(colon + 1));
}

std::optional<std::string> PrefixTable::Abbreviate(std::string_view iri) const {
  const std::pair<const std::string, std::string>* best = nullptr;
  for (const auto& entry : prefixes_) {
    if (!entry.second.empty() && iri.starts_with(entry.second) &&
        IsValidPrefixedLocal(iri.substr(entry.second.size())) &&
        (!best || entry.second.size() > best->second.size())) {
      best = &entry;
    }
  }
  if (!best) return std::nullopt;
  return best->first + ":" + std::string(iri.substr(best->second.size()));
}

void PrefixTable::Merge(const PrefixTable& other) {
  for (const auto& [label, iri] : other.prefixes_) Set(label, iri);
  if (base_.empty()) base_ = other.base_;
}

bool IsValidPrefixedLocal(std::string_view local) {
  if (local.empty()) return false;
  if (local.front() == '-' || local.front() == '.' || local.back() == '.') {
    return false;
  }
  for (std::size_t i = 0; i < local.size(); ++i) {
    char c = local[i];
    if (c == '.') {
      if (local[i + 1] == '.') return false;
      continue;
    }
    if (!IsPnChar(c)) return false;
  }
  return true;
}

TurtleDocument ParseTurtle(std::string_view text, const PrefixTable& initial) {
  return TurtleParser(text, initial).Parse();
}

std::string SerializeTurtle(const Graph& graph, const PrefixTable& prefixes) {
  std::string out;
  for (const auto& [label, iri] : prefixes.entries()) {
    out += "@prefix " + label + ": ";
    out += WriteTerm(Term::Iri(iri), PrefixTable());
    out += " .\n";
  }
  std::vector<Triple> triples = graph.Triples();
  if (!triples.empty()) out += '\n';
  const Term rdf_type = RdfType();
  for (std::size_t i = 0; i < triples.size();) {
    const Term& subject = triples[i].subject;
    out += WriteTerm(subject, prefixes);
    bool first_predicate = true;
    while (i < triples.size() && triples[i].subject == subject) {
      const Term& predicate = triples[i].predicate;
      out += first_predicate ? " " : " ;\n    ";
      first_predicate = false;
      out += predicate == rdf_type ? "a" : WriteTerm(predicate, prefixes);
      bool first_object = true;
      while (i < triples.size() && triples[i].subject == subject &&
             triples[i].predicate == predicate) {
        out += first_object ? " " : ", ";
        first_object = false;
        out += WriteTerm(triples[i].object, prefixes);
        ++i;
      }
    }
    out += " .\n";
  }
  return out;
}

}  // namespace vbd
