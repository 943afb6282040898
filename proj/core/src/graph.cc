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

#include "vbd/graph.h"

#include <algorithm>

#include "vbd/errors.h"

namespace vbd {

namespace {

void CheckWellFormed(const Term& s, const Term& p, const Term& o) {
  if (!s.is_iri()) {
    throw MalformedTripleError("literal subject: " + s.ToString());
  }
  if (!p.is_iri() || p.is_blank()) {
    throw MalformedTripleError("predicate must be an IRI: " + p.ToString());
  }
  if (!o.valid()) throw MalformedTripleError("empty object term");
}

void Bump(absl::flat_hash_map<TermId, std::size_t>& counts, TermId id,
          int delta) {
  if (delta > 0) {
    ++counts[id];
    return;
  }
  auto it = counts.find(id);
  if (it != counts.end() && --it->second == 0) counts.erase(it);
}

}  // namespace

void Graph::IndexInsert(Index& index, TermId a, TermId b, TermId c) {
  Leaf& leaf = index.pairs[Key(a, b)];
  if (leaf.empty()) index.seconds[a].push_back(b);
  leaf.push_back(c);
}

void Graph::IndexErase(Index& index, TermId a, TermId b, TermId c) {
  auto swap_pop = [](Leaf& leaf, TermId x) {
    auto it = std::find(leaf.begin(), leaf.end(), x);
    if (it == leaf.end()) return;
    *it = leaf.back();
    leaf.pop_back();
  };
  auto pair = index.pairs.find(Key(a, b));
  if (pair == index.pairs.end()) return;
  swap_pop(pair->second, c);
  if (!pair->second.empty()) return;
  index.pairs.erase(pair);
  auto seconds = index.seconds.find(a);
  if (seconds == index.seconds.end()) return;
  swap_pop(seconds->second, b);
  if (seconds->second.empty()) index.seconds.erase(seconds);
}

const Graph::Leaf* Graph::Lookup(const Index& index, TermId a, TermId b) {
  auto it = index.pairs.find(Key(a, b));
  return it == index.pairs.end() ? nullptr : &it->second;
}

bool Graph::Insert(const Triple& triple) {
  CheckWellFormed(triple.subject, triple.predicate, triple.object);
  return Insert(InternTriple(triple));
}

bool Graph::Insert(const IdTriple& t) {
  if (triples_.contains(t)) return false;
  const Term& s = Resolve(t[0]);
  const Term& p = Resolve(t[1]);
  const Term& o = Resolve(t[2]);
  CheckWellFormed(s, p, o);
  triples_.insert(t);
  IndexInsert(spo_, t[0], t[1], t[2]);
  IndexInsert(pos_, t[1], t[2], t[0]);
  IndexInsert(osp_, t[2], t[0], t[1]);
  Bump(subject_count_, t[0], 1);
  Bump(predicate_count_, t[1], 1);
  Bump(object_count_, t[2], 1);
  return true;
}

bool Graph::Remove(const Triple& triple) {
  TermPool& pool = TermPool::Global();
  IdTriple t{pool.Find(triple.subject), pool.Find(triple.predicate),
             pool.Find(triple.object)};
  if (t[0] == kNoTerm || t[1] == kNoTerm || t[2] == kNoTerm) return false;
  return Remove(t);
}

bool Graph::Remove(const IdTriple& t) {
  if (triples_.erase(t) == 0) return false;
  IndexErase(spo_, t[0], t[1], t[2]);
  IndexErase(pos_, t[1], t[2], t[0]);
  IndexErase(osp_, t[2], t[0], t[1]);
  Bump(subject_count_, t[0], -1);
  Bump(predicate_count_, t[1], -1);
  Bump(object_count_, t[2], -1);
  return true;
}

bool Graph::Contains(const Triple& triple) const {
  TermPool& pool = TermPool::Global();
  IdTriple t{pool.Find(triple.subject), pool.Find(triple.predicate),
             pool.Find(triple.object)};
  return t[0] != kNoTerm && t[1] != kNoTerm && t[2] != kNoTerm &&
         triples_.contains(t);
}

std::vector<Triple> Graph::Match(const TriplePattern& pattern) const {
  TermPool& pool = TermPool::Global();
  IdPattern ids{kNoTerm, kNoTerm, kNoTerm};
  const std::optional<Term>* parts[3] = {&pattern.subject, &pattern.predicate,
                                         &pattern.object};
  for (int i = 0; i < 3; ++i) {
    if (!parts[i]->has_value()) continue;
    ids[i] = pool.Find(**parts[i]);
    if (ids[i] == kNoTerm) return {};
  }
  std::vector<Triple> out;
  ForEachMatch(ids, [&](const IdTriple& t) {
    out.push_back(ResolveTriple(t));
    return true;
  });
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t Graph::Estimate(const IdPattern& pattern) const {
  const auto [s, p, o] = pattern;
  if (s && p && o) return triples_.contains(pattern) ? 1 : 0;
  if (s && p) {
    const Leaf* leaf = Lookup(spo_, s, p);
    return leaf ? leaf->size() : 0;
  }
  if (s && o) {
    const Leaf* leaf = Lookup(osp_, o, s);
    return leaf ? leaf->size() : 0;
  }
  if (p && o) {
    const Leaf* leaf = Lookup(pos_, p, o);
    return leaf ? leaf->size() : 0;
  }
  auto count = [](const absl::flat_hash_map<TermId, std::size_t>& m,
                  TermId id) -> std::size_t {
    auto it = m.find(id);
    return it == m.end() ? 0 : it->second;
  };
  if (s) return count(subject_count_, s);
  if (p) return count(predicate_count_, p);
  if (o) return count(object_count_, o);
  return triples_.size();
}

std::vector<Triple> Graph::Triples() const {
  std::vector<Triple> out;
  out.reserve(triples_.size());
  for (const IdTriple& t : triples_) out.push_back(ResolveTriple(t));
  std::sort(out.begin(), out.end());
  return out;
}

void Graph::InsertAll(const Graph& other) {
  // Id order follows intern order, which keeps related terms adjacent.
  std::vector<IdTriple> ordered(other.triples_.begin(), other.triples_.end());
  std::sort(ordered.begin(), ordered.end());
  triples_.reserve(triples_.size() + ordered.size());
  for (const IdTriple& t : ordered) Insert(t);
}

bool Graph::IndexesConsistent() const {
  auto walk = [this](const Index& index, int a, int b, int c) {
    std::size_t n = 0;
    std::size_t listed = 0;
    for (const auto& [key, leaf] : index.pairs) {
      if (leaf.empty()) return false;
      IdTriple t;
      t[a] = static_cast<TermId>(key >> 32);
      t[b] = static_cast<TermId>(key);
      auto seconds = index.seconds.find(t[a]);
      if (seconds == index.seconds.end() ||
          std::find(seconds->second.begin(), seconds->second.end(), t[b]) ==
              seconds->second.end()) {
        return false;
      }
      for (TermId z : leaf) {
        t[c] = z;
        if (!triples_.contains(t)) return false;
        ++n;
      }
    }
    for (const auto& [x, seconds] : index.seconds) listed += seconds.size();
    return n == triples_.size() && listed == index.pairs.size();
  };
  return walk(spo_, 0, 1, 2) && walk(pos_, 1, 2, 0) && walk(osp_, 2, 0, 1);
}

Graph Union(const Graph& a, const Graph& b) {
  const Graph& big = a.size() >= b.size() ? a : b;
  const Graph& small = a.size() >= b.size() ? b : a;
  Graph out = big;
  out.InsertAll(small);
  return out;
}

}  // namespace vbd
