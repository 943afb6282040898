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

#include "vbd/term.h"

#include <atomic>
#include <charconv>
#include <limits>
#include <memory>
#include <new>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

#include "vbd/errors.h"

namespace vbd {

namespace {

bool AllDigits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

std::string CanonicalInteger(std::string_view lexical) {
  std::int64_t value = 0;
  std::string_view digits = lexical;
  if (!digits.empty() && digits.front() == '+') digits.remove_prefix(1);
  auto [ptr, ec] =
      std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc() || ptr != digits.data() + digits.size() ||
      digits.empty()) {
    throw Error("invalid integer literal: " + std::string(lexical));
  }
  return std::to_string(value);
}

// Decimal canonical form: optional '-', no leading zeros in the integer part
// (but at least "0"), at least one fractional digit, no trailing zeros beyond
// the first. "-0.0" normalizes to "0.0".
std::string CanonicalDecimal(std::string_view lexical) {
  std::string_view s = lexical;
  bool negative = false;
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  std::size_t dot = s.find('.');
  std::string_view int_part = s.substr(0, dot);
  std::string_view frac_part =
      dot == std::string_view::npos ? std::string_view() : s.substr(dot + 1);
  bool int_ok = int_part.empty() || AllDigits(int_part);
  bool frac_ok = frac_part.empty() || AllDigits(frac_part);
  if (!int_ok || !frac_ok || (int_part.empty() && frac_part.empty())) {
    throw Error("invalid decimal literal: " + std::string(lexical));
  }
  while (int_part.size() > 1 && int_part.front() == '0') int_part.remove_prefix(1);
  while (!frac_part.empty() && frac_part.back() == '0') frac_part.remove_suffix(1);
  std::string out;
  if (int_part.empty()) int_part = "0";
  if (frac_part.empty()) frac_part = "0";
  if (negative && !(int_part == "0" && frac_part == "0")) out += '-';
  out.append(int_part);
  out += '.';
  out.append(frac_part);
  return out;
}

}  // namespace

std::string_view DatatypeName(Datatype type) {
  switch (type) {
    case Datatype::kNone:
      return "iri";
    case Datatype::kString:
      return "string";
    case Datatype::kBoolean:
      return "boolean";
    case Datatype::kInteger:
      return "integer";
    case Datatype::kDecimal:
      return "decimal";
  }
  return "iri";
}

std::optional<Datatype> DatatypeFromName(std::string_view name) {
  if (name.starts_with(ns::kXsd)) name.remove_prefix(ns::kXsd.size());
  if (name.starts_with("xsd:")) name.remove_prefix(4);
  if (name == "string") return Datatype::kString;
  if (name == "boolean") return Datatype::kBoolean;
  if (name == "integer" || name == "int" || name == "long") {
    return Datatype::kInteger;
  }
  if (name == "decimal") return Datatype::kDecimal;
  if (name == "iri") return Datatype::kNone;
  return std::nullopt;
}

Term Term::Iri(std::string iri) {
  if (iri.empty()) throw Error("IRI term must not be empty");
  return Term(TermKind::kIri, Datatype::kNone, std::move(iri));
}

Term Term::String(std::string value) {
  return Term(TermKind::kLiteral, Datatype::kString, std::move(value));
}

Term Term::Boolean(bool value) {
  return Term(TermKind::kLiteral, Datatype::kBoolean, value ? "true" : "false");
}

Term Term::Integer(std::int64_t value) {
  return Term(TermKind::kLiteral, Datatype::kInteger, std::to_string(value));
}

Term Term::Literal(std::string_view lexical, Datatype type) {
  switch (type) {
    case Datatype::kNone:
      return Iri(std::string(lexical));
    case Datatype::kString:
      return String(std::string(lexical));
    case Datatype::kBoolean:
      if (lexical == "true" || lexical == "1") return Boolean(true);
      if (lexical == "false" || lexical == "0") return Boolean(false);
      throw Error("invalid boolean literal: " + std::string(lexical));
    case Datatype::kInteger:
      return Term(TermKind::kLiteral, Datatype::kInteger,
                  CanonicalInteger(lexical));
    case Datatype::kDecimal:
      return Term(TermKind::kLiteral, Datatype::kDecimal,
                  CanonicalDecimal(lexical));
  }
  throw Error("unknown datatype");
}

std::optional<bool> Term::AsBoolean() const {
  if (datatype_ != Datatype::kBoolean) return std::nullopt;
  return value_ == "true";
}

std::optional<std::int64_t> Term::AsInteger() const {
  if (datatype_ != Datatype::kInteger) return std::nullopt;
  std::int64_t v = 0;
  std::from_chars(value_.data(), value_.data() + value_.size(), v);
  return v;
}

std::string_view Term::LocalName() const {
  std::string_view v = value_;
  if (!is_iri()) return v;
  std::size_t cut = v.find_last_of("#/:");
  if (cut == std::string_view::npos || cut + 1 == v.size()) return v;
  return v.substr(cut + 1);
}

std::string Term::ToString() const {
  if (is_iri()) {
    if (is_blank()) return value_;
    return "<" + value_ + ">";
  }
  if (datatype_ == Datatype::kString) {
    std::string out = "\"";
    for (char c : value_) {
      if (c == '"' || c == '\\') out += '\\';
      if (c == '\n') {
        out += "\\n";
        continue;
      }
      out += c;
    }
    return out + "\"";
  }
  return value_;
}

std::ostream& operator<<(std::ostream& os, const Term& term) {
  return os << term.ToString();
}

Term VbdIri(std::string_view local_name) {
  return Term::Iri(std::string(ns::kVbd) + std::string(local_name));
}

Term RdfType() { return Term::Iri(std::string(ns::kRdf) + "type"); }

std::string Triple::ToString() const {
  return subject.ToString() + " " + predicate.ToString() + " " +
         object.ToString() + " .";
}

std::ostream& operator<<(std::ostream& os, const Triple& triple) {
  return os << triple.ToString();
}

// Terms live in fixed-size chunks that are never moved or freed, and the
// count is published with release semantics, so Get needs no lock.
struct TermPool::Impl {
  static constexpr std::size_t kChunkBits = 16;
  static constexpr std::size_t kChunkSize = std::size_t{1} << kChunkBits;
  static constexpr std::size_t kMaxChunks = std::size_t{1} << (32 - kChunkBits);

  Impl() : chunks(new std::atomic<Term*>[kMaxChunks]()) {}

  mutable std::shared_mutex mu;  // guards `ids` and appends
  std::unordered_map<Term, TermId> ids;
  std::unique_ptr<std::atomic<Term*>[]> chunks;
  std::atomic<std::size_t> count{0};
};

TermPool::TermPool() : impl_(new Impl) {}

TermPool& TermPool::Global() {
  static TermPool* pool = new TermPool();
  return *pool;
}

TermId TermPool::Intern(const Term& term) {
  {
    std::shared_lock lock(impl_->mu);
    auto it = impl_->ids.find(term);
    if (it != impl_->ids.end()) return it->second;
  }
  std::unique_lock lock(impl_->mu);
  auto it = impl_->ids.find(term);
  if (it != impl_->ids.end()) return it->second;
  const std::size_t index = impl_->count.load(std::memory_order_relaxed);
  if (index + 1 >= std::numeric_limits<TermId>::max()) throw Error("term pool exhausted");
  std::atomic<Term*>& slot = impl_->chunks[index >> Impl::kChunkBits];
  Term* chunk = slot.load(std::memory_order_relaxed);
  if (chunk == nullptr) {
    chunk = static_cast<Term*>(::operator new(sizeof(Term) * Impl::kChunkSize));
    slot.store(chunk, std::memory_order_release);
  }
  new (chunk + (index & (Impl::kChunkSize - 1))) Term(term);
  const TermId id = static_cast<TermId>(index + 1);
  impl_->ids.emplace(term, id);
  impl_->count.store(index + 1, std::memory_order_release);
  return id;
}

TermId TermPool::Find(const Term& term) const {
  std::shared_lock lock(impl_->mu);
  auto it = impl_->ids.find(term);
  return it == impl_->ids.end() ? kNoTerm : it->second;
}

const Term& TermPool::Get(TermId id) const {
  if (id == kNoTerm || id > impl_->count.load(std::memory_order_acquire)) {
    throw Error("unknown term id " + std::to_string(id));
  }
  const std::size_t index = id - 1;
  const Term* chunk =
      impl_->chunks[index >> Impl::kChunkBits].load(std::memory_order_acquire);
  return chunk[index & (Impl::kChunkSize - 1)];
}

std::size_t TermPool::size() const {
  return impl_->count.load(std::memory_order_acquire);
}

IdTriple InternTriple(const Triple& triple) {
  TermPool& pool = TermPool::Global();
  return {pool.Intern(triple.subject), pool.Intern(triple.predicate),
          pool.Intern(triple.object)};
}

Triple ResolveTriple(const IdTriple& ids) {
  TermPool& pool = TermPool::Global();
  return {pool.Get(ids[0]), pool.Get(ids[1]), pool.Get(ids[2])};
}

}  // namespace vbd
