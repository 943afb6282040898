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

#ifndef VBD_ERRORS_H_
#define VBD_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace vbd {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A syntax or lexical error at a 1-based line/column of some text input
// (Turtle documents, rule files, queries).
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : Error(message + " at line " + std::to_string(line) + ", column " +
              std::to_string(column)),
        message_(message),
        line_(line),
        column_(column) {}

  const std::string& message() const { return message_; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::string message_;
  std::size_t line_;
  std::size_t column_;
};

// A triple that violates the subject/predicate kind constraints.
class MalformedTripleError : public Error {
 public:
  using Error::Error;
};

// Schema-level failures: subclass cycles, unknown classes, missing BFO roots.
class SchemaError : public Error {
 public:
  using Error::Error;
};

// A metric whose denominator is zero for the given counts.
class UndefinedMetricError : public Error {
 public:
  using Error::Error;
};

class UnsafeRuleError : public ParseError {
 public:
  UnsafeRuleError(const std::string& variable, std::size_t line)
      : ParseError("unsafe rule: variable " + variable +
                       " is not bound by a body atom",
                   line, 1),
        variable_(variable) {}
  const std::string& variable() const { return variable_; }

 private:
  std::string variable_;
};

// Knowledge-base load failure; names the offending file and line (0 when the
// problem is not tied to a line).
class LoadError : public Error {
 public:
  LoadError(const std::string& file, std::size_t line,
            const std::string& message)
      : Error(file + (line ? ":" + std::to_string(line) : std::string()) +
              ": " + message),
        file_(file),
        line_(line) {}
  const std::string& file() const { return file_; }
  std::size_t line() const { return line_; }

 private:
  std::string file_;
  std::size_t line_;
};

class NotFoundError : public Error {
 public:
  using Error::Error;
};

// Raised by explain() for facts that carry no derivation.
class NotDerivedError : public Error {
 public:
  enum class Reason { kAsserted, kAbsent };
  NotDerivedError(Reason reason, const std::string& fact)
      : Error(std::string(reason == Reason::kAsserted ? "asserted"
                                                      : "absent") +
              ": " + fact),
        reason_(reason) {}
  Reason reason() const { return reason_; }

 private:
  Reason reason_;
};

// Extracted concepts with no entry in the concept mapping table.
class UnmappedConceptError : public Error {
 public:
  explicit UnmappedConceptError(std::vector<std::string> concepts)
      : Error("unmapped concepts: " + Join(concepts)),
        concepts_(std::move(concepts)) {}
  const std::vector<std::string>& concepts() const { return concepts_; }

 private:
  static std::string Join(const std::vector<std::string>& items) {
    std::string out;
    for (const std::string& item : items) {
      if (!out.empty()) out += ", ";
      out += item;
    }
    return out;
  }
  std::vector<std::string> concepts_;
};

// Case workflow errors (duplicate ids, undeclared predicates, corrupt logs).
class CaseError : public Error {
 public:
  using Error::Error;
};

class CaseExistsError : public CaseError {
 public:
  explicit CaseExistsError(const std::string& id)
      : CaseError("case '" + id + "' already exists") {}
};

// An assertion whose predicate the knowledge base does not declare.
class UndeclaredPredicateError : public CaseError {
 public:
  UndeclaredPredicateError(const std::string& predicate,
                           std::vector<std::string> suggestions)
      : CaseError(Describe(predicate, suggestions)),
        predicate_(predicate),
        suggestions_(std::move(suggestions)) {}
  const std::string& predicate() const { return predicate_; }
  // Nearest declared names, closest first.
  const std::vector<std::string>& suggestions() const { return suggestions_; }

 private:
  static std::string Describe(const std::string& predicate,
                              const std::vector<std::string>& suggestions) {
    std::string out = "undeclared predicate " + predicate;
    if (!suggestions.empty()) {
      out += "; did you mean";
      for (std::size_t i = 0; i < suggestions.size(); ++i) {
        out += (i ? ", " : " ") + suggestions[i];
      }
      out += "?";
    }
    return out;
  }
  std::string predicate_;
  std::vector<std::string> suggestions_;
};

}  // namespace vbd

#endif  // VBD_ERRORS_H_
