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

#ifndef VBD_GRAPH_H_
#define VBD_GRAPH_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "absl/container/flat_hash_map.h"
#include "absl/container/flat_hash_set.h"
#include "absl/container/inlined_vector.h"
#include "vbd/term.h"

namespace vbd {

// A triple pattern; std::nullopt positions are wildcards.
struct TriplePattern {
  std::optional<Term> subject;
  std::optional<Term> predicate;
  std::optional<Term> object;
};

// Id-level pattern; kNoTerm positions are wildcards.
using IdPattern = IdTriple;

// In-memory set of RDF triples with subject-, predicate- and object-first
// indexes. A Graph is a value: copies are independent. Concurrent const
// access is safe; mutation requires exclusive access.
class Graph {
 public:
  Graph() = default;

  // Returns true iff the triple was absent. Throws MalformedTripleError for
  // literal subjects or non-IRI / blank predicates.
  bool Insert(const Triple& triple);
  bool Insert(const IdTriple& triple);

  bool Remove(const Triple& triple);
  bool Remove(const IdTriple& triple);

  bool Contains(const Triple& triple) const;
  bool Contains(const IdTriple& triple) const {
    return triples_.contains(triple);
  }

  std::size_t size() const { return triples_.size(); }
  bool empty() const { return triples_.empty(); }

  std::vector<Triple> Match(const TriplePattern& pattern) const;

  // Calls fn(const IdTriple&) for every triple agreeing with `pattern`.
  // `fn` may return false to stop early. The graph must not be mutated
  // during the walk.
  template <typename Fn>
  void ForEachMatch(const IdPattern& pattern, Fn&& fn) const;

  // Upper bound on the matches for `pattern`, computed in O(1) from index
  // sizes. Exact when at most one position is a wildcard.
  std::size_t Estimate(const IdPattern& pattern) const;

  // All triples, sorted by (subject, predicate, object) term order.
  std::vector<Triple> Triples() const;
  const absl::flat_hash_set<IdTriple>& ids() const {
    return triples_;
  }

  void InsertAll(const Graph& other);

  // Set equality.
  bool operator==(const Graph& other) const {
    return triples_ == other.triples_;
  }

  // Checks that all three indexes hold exactly the triple set.
  bool IndexesConsistent() const;

 private:
  using Leaf = absl::InlinedVector<TermId, 2>;
  struct Index {
    // (a, b) -> every c.
    absl::flat_hash_map<std::uint64_t, Leaf> pairs;
    // a -> every b with a non-empty (a, b) leaf.
    absl::flat_hash_map<TermId, Leaf> seconds;
  };

  static std::uint64_t Key(TermId a, TermId b) {
    return (static_cast<std::uint64_t>(a) << 32) | b;
  }

  static void IndexInsert(Index& index, TermId a, TermId b, TermId c);
  static void IndexErase(Index& index, TermId a, TermId b, TermId c);
  static const Leaf* Lookup(const Index& index, TermId a, TermId b);

  absl::flat_hash_set<IdTriple> triples_;
  Index spo_;
  Index pos_;
  Index osp_;
  absl::flat_hash_map<TermId, std::size_t> subject_count_;
  absl::flat_hash_map<TermId, std::size_t> predicate_count_;
  absl::flat_hash_map<TermId, std::size_t> object_count_;
};

// Deduplicating, commutative union.
Graph Union(const Graph& a, const Graph& b);

template <typename Fn>
void Graph::ForEachMatch(const IdPattern& pattern, Fn&& fn) const {
  const auto [s, p, o] = pattern;
  auto call = [&fn](TermId a, TermId b, TermId c) -> bool {
    return fn(IdTriple{a, b, c});
  };
  if (s && p && o) {
    if (triples_.contains(pattern)) fn(pattern);
    return;
  }
  if (s && p) {
    if (const Leaf* leaf = Lookup(spo_, s, p)) {
      for (TermId x : *leaf) {
        if (!call(s, p, x)) return;
      }
    }
    return;
  }
  if (s && o) {
    if (const Leaf* leaf = Lookup(osp_, o, s)) {
      for (TermId x : *leaf) {
        if (!call(s, x, o)) return;
      }
    }
    return;
  }
  if (p && o) {
    if (const Leaf* leaf = Lookup(pos_, p, o)) {
      for (TermId x : *leaf) {
        if (!call(x, p, o)) return;
      }
    }
    return;
  }
  if (s) {
    auto it = spo_.seconds.find(s);
    if (it == spo_.seconds.end()) return;
    for (TermId pp : it->second) {
      for (TermId oo : *Lookup(spo_, s, pp)) {
        if (!call(s, pp, oo)) return;
      }
    }
    return;
  }
  if (p) {
    auto it = pos_.seconds.find(p);
    if (it == pos_.seconds.end()) return;
    for (TermId oo : it->second) {
      for (TermId ss : *Lookup(pos_, p, oo)) {
        if (!call(ss, p, oo)) return;
      }
    }
    return;
  }
  if (o) {
    auto it = osp_.seconds.find(o);
    if (it == osp_.seconds.end()) return;
    for (TermId ss : it->second) {
      for (TermId pp : *Lookup(osp_, o, ss)) {
        if (!call(ss, pp, o)) return;
      }
    }
    return;
  }
  for (const IdTriple& t : triples_) {
    if (!fn(t)) return;
  }
}

}  // namespace vbd

#endif  // VBD_GRAPH_H_
