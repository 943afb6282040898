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

#ifndef VBD_TERM_H_
#define VBD_TERM_H_

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

namespace vbd {

namespace ns {
inline constexpr std::string_view kRdf =
    "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr std::string_view kRdfs =
    "http://www.w3.org/2000/01/rdf-schema#";
inline constexpr std::string_view kOwl = "http://www.w3.org/2002/07/owl#";
inline constexpr std::string_view kXsd = "http://www.w3.org/2001/XMLSchema#";
inline constexpr std::string_view kSwrlb =
    "http://www.w3.org/2003/11/swrlb#";
// Namespace of the shipped VBD knowledge base.
inline constexpr std::string_view kVbd = "http://example.org/vbd#";
}  // namespace ns

enum class TermKind : std::uint8_t { kIri, kLiteral };

enum class Datatype : std::uint8_t {
  kNone,  // IRIs
  kString,
  kBoolean,
  kInteger,
  kDecimal,
};

std::string_view DatatypeName(Datatype type);
// Accepts "string", "boolean", "integer", "decimal" and their xsd: IRIs.
std::optional<Datatype> DatatypeFromName(std::string_view name);

// An RDF term: an IRI (absolute, or `_:label` for blank nodes) or a typed
// literal. Literal lexical forms are canonicalized on construction so that
// equality of terms is equality of values ("01" and "1" are the same integer).
class Term {
 public:
  Term() = default;

  static Term Iri(std::string iri);
  static Term String(std::string value);
  static Term Boolean(bool value);
  static Term Integer(std::int64_t value);
  // Throws vbd::Error if `lexical` is not a valid literal of `type`.
  static Term Literal(std::string_view lexical, Datatype type);

  TermKind kind() const { return kind_; }
  Datatype datatype() const { return datatype_; }
  bool is_iri() const { return kind_ == TermKind::kIri; }
  bool is_literal() const { return kind_ == TermKind::kLiteral; }
  bool is_blank() const { return is_iri() && value_.starts_with("_:"); }
  bool valid() const { return !value_.empty() || is_literal(); }

  // IRI string or literal lexical form.
  const std::string& value() const { return value_; }

  std::optional<bool> AsBoolean() const;
  std::optional<std::int64_t> AsInteger() const;

  // IRI fragment/last path segment, e.g. "has_Fever" for ...vbd#has_Fever.
  std::string_view LocalName() const;

  // N-Triples style rendering: <iri>, _:b, "lit", true, 3, 1.5.
  std::string ToString() const;

  auto operator<=>(const Term&) const = default;
  bool operator==(const Term&) const = default;

 private:
  Term(TermKind kind, Datatype type, std::string value)
      : kind_(kind), datatype_(type), value_(std::move(value)) {}

  TermKind kind_ = TermKind::kIri;
  Datatype datatype_ = Datatype::kNone;
  std::string value_;
};

std::ostream& operator<<(std::ostream& os, const Term& term);

// Convenience for IRIs in the shipped VBD namespace.
Term VbdIri(std::string_view local_name);
Term RdfType();

struct Triple {
  Term subject;
  Term predicate;
  Term object;

  auto operator<=>(const Triple&) const = default;
  bool operator==(const Triple&) const = default;

  std::string ToString() const;
};

std::ostream& operator<<(std::ostream& os, const Triple& triple);

// Interned term identifier. 0 is never assigned.
using TermId = std::uint32_t;
inline constexpr TermId kNoTerm = 0;

using IdTriple = std::array<TermId, 3>;

struct IdTripleHash {
  std::size_t operator()(const IdTriple& t) const noexcept {
    std::uint64_t h = t[0];
    h = h * 0x9E3779B97F4A7C15ULL ^ t[1];
    h = h * 0x9E3779B97F4A7C15ULL ^ t[2];
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

// Process-wide intern table. Thread-safe; ids are stable for the lifetime of
// the process and the referenced Terms are never moved.
class TermPool {
 public:
  static TermPool& Global();

  TermId Intern(const Term& term);
  // kNoTerm when the term was never interned.
  TermId Find(const Term& term) const;
  const Term& Get(TermId id) const;
  std::size_t size() const;

 private:
  TermPool();
  struct Impl;
  Impl* impl_;
};

inline TermId Intern(const Term& term) {
  return TermPool::Global().Intern(term);
}
inline const Term& Resolve(TermId id) { return TermPool::Global().Get(id); }

IdTriple InternTriple(const Triple& triple);
Triple ResolveTriple(const IdTriple& ids);

}  // namespace vbd

template <>
struct std::hash<vbd::Term> {
  std::size_t operator()(const vbd::Term& t) const noexcept {
    return std::hash<std::string>()(t.value()) ^
           (static_cast<std::size_t>(t.datatype()) << 1) ^
           static_cast<std::size_t>(t.kind());
  }
};

#endif  // VBD_TERM_H_
