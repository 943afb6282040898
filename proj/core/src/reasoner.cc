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

#include "vbd/reasoner.h"

#include <algorithm>
#include <cctype>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <tuple>

#include "vbd/errors.h"

namespace vbd {

namespace {

constexpr int kNoVar = -1;

struct Slot {
  int var = kNoVar;           // variable index, or kNoVar for a constant
  TermId constant = kNoTerm;  // interned constant
};

struct CompiledAtom {
  AtomKind kind = AtomKind::kClass;
  TermId predicate = kNoTerm;
  std::vector<Slot> args;
  std::vector<TermId> classes;  // class atoms: the class and its subclasses
};

struct CompiledRule {
  std::size_t index = 0;  // position in the input rule list
  std::vector<CompiledAtom> body;      // class and property atoms
  std::vector<CompiledAtom> builtins;  // swrlb:equal
  std::vector<CompiledAtom> head;
  std::vector<std::string> variables;
  std::size_t visible_variables = 0;  // leading entries of `variables`
};

// Which stamp window a body atom may match in the current round.
enum class Window { kOld, kDelta, kAll };

struct PlanStep {
  std::size_t atom = 0;
  Window window = Window::kAll;
  std::vector<std::size_t> builtins;  // evaluable once this step is bound
};

bool EqualsIgnoreCase(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(a[i])) !=
        std::tolower(static_cast<unsigned char>(b[i]))) {
      return false;
    }
  }
  return true;
}

class Engine {
 public:
  Engine(const Graph& graph, const std::vector<Rule>& rules,
         const OntologySchema& schema, const InferenceOptions& options)
      : graph_(graph), rules_(rules), schema_(schema), options_(options) {
    rdf_type_ = Intern(RdfType());
    for (const IdTriple& t : graph_.ids()) stamp_.emplace(t, 0);
    for (std::size_t i = 0; i < rules_.size(); ++i) {
      compiled_.push_back(Compile(rules_[i], i));
    }
  }

  void Run() {
    for (std::size_t round = 1;; ++round) {
      current_round_ = round;
      for (const CompiledRule& rule : compiled_) {
        if (options_.strategy == EvalStrategy::kNaive) {
          std::vector<std::size_t> order(rule.body.size());
          for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
          Evaluate(rule, MakePlan(rule, order, std::nullopt));
        } else {
          for (std::size_t delta = 0; delta < rule.body.size(); ++delta) {
            std::vector<std::size_t> order(rule.body.size());
            for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
            Evaluate(rule, MakePlan(rule, order, delta));
          }
        }
      }
      if (pending_.empty()) {
        rounds_ = round;
        break;
      }
      for (const IdTriple& t : pending_) {
        graph_.Insert(t);
        stamp_.emplace(t, round);
      }
      pending_.clear();
    }
  }

  Graph& graph() { return graph_; }
  std::size_t rounds() const { return rounds_; }

  struct Fact {
    IdTriple triple;
    std::size_t round;
    std::set<std::pair<std::size_t, std::vector<TermId>>> provenance;
  };
  std::vector<Fact>& facts() { return facts_; }
  const std::vector<CompiledRule>& compiled() const { return compiled_; }

 private:
  int VarIndex(CompiledRule& rule, const std::string& name) {
    auto it = std::find(rule.variables.begin(), rule.variables.end(), name);
    if (it != rule.variables.end()) {
      return static_cast<int>(it - rule.variables.begin());
    }
    rule.variables.push_back(name);
    return static_cast<int>(rule.variables.size() - 1);
  }

  CompiledAtom CompileAtom(CompiledRule& rule, const Atom& atom) {
    CompiledAtom out;
    out.kind = atom.kind;
    out.predicate = Intern(atom.predicate);
    for (const AtomArg& arg : atom.args) {
      Slot slot;
      if (arg.is_variable) {
        slot.var = VarIndex(rule, arg.variable);
      } else {
        slot.constant = Intern(arg.constant);
      }
      out.args.push_back(slot);
    }
    if (atom.kind == AtomKind::kClass) {
      out.classes = schema_.DescendantIds(out.predicate);
    }
    return out;
  }

  CompiledRule Compile(const Rule& rule, std::size_t index) {
    CompiledRule out;
    out.index = index;
    for (const std::string& v : rule.Variables()) VarIndex(out, v);
    out.visible_variables = out.variables.size();
    std::size_t fresh = 0;
    for (const Atom& atom : rule.body) {
      if (atom.kind == AtomKind::kBuiltin) {
        out.builtins.push_back(CompileAtom(out, atom));
        continue;
      }
      if (!options_.strict_equality && atom.kind == AtomKind::kProperty &&
          !atom.args[1].is_variable &&
          atom.args[1].constant.datatype() == Datatype::kString) {
        // p(?x, "Lit") becomes p(?x, ?_sN) ^ swrlb:equal(?_sN, "Lit").
        Atom rewritten = atom;
        std::string var = "?_s" + std::to_string(fresh++);
        rewritten.args[1] = AtomArg::Variable(var);
        out.body.push_back(CompileAtom(out, rewritten));
        Atom equal;
        equal.kind = AtomKind::kBuiltin;
        equal.predicate = SwrlbEqual();
        equal.args = {AtomArg::Variable(var), atom.args[1]};
        out.builtins.push_back(CompileAtom(out, equal));
        continue;
      }
      out.body.push_back(CompileAtom(out, atom));
    }
    for (const Atom& atom : rule.head) out.head.push_back(CompileAtom(out, atom));
    return out;
  }

  std::size_t EstimateAtom(const CompiledAtom& atom) const {
    if (atom.kind == AtomKind::kClass) {
      std::size_t n = 0;
      TermId x = atom.args[0].var == kNoVar ? atom.args[0].constant : kNoTerm;
      for (TermId c : atom.classes) n += graph_.Estimate({x, rdf_type_, c});
      return n;
    }
    TermId s = atom.args[0].var == kNoVar ? atom.args[0].constant : kNoTerm;
    TermId o = atom.args[1].var == kNoVar ? atom.args[1].constant : kNoTerm;
    return graph_.Estimate({s, atom.predicate, o});
  }

  // Orders body atoms: the delta atom (if any) first, then greedily by
  // (unbound variables, estimated matches). Builtins attach to the first step
  // after which all their variables are bound.
  std::vector<PlanStep> MakePlan(const CompiledRule& rule,
                                 std::vector<std::size_t> remaining,
                                 std::optional<std::size_t> delta) {
    std::vector<PlanStep> plan;
    std::vector<bool> bound(rule.variables.size(), false);
    auto unbound_count = [&](const CompiledAtom& atom) {
      std::size_t n = 0;
      for (const Slot& s : atom.args) {
        if (s.var != kNoVar && !bound[s.var]) ++n;
      }
      return n;
    };
    auto take = [&](std::size_t pos) {
      std::size_t atom = remaining[pos];
      remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pos));
      PlanStep step;
      step.atom = atom;
      if (!delta) {
        step.window = Window::kAll;
      } else if (atom < *delta) {
        step.window = Window::kOld;
      } else if (atom == *delta) {
        step.window = Window::kDelta;
      } else {
        step.window = Window::kAll;
      }
      for (const Slot& s : rule.body[atom].args) {
        if (s.var != kNoVar) bound[s.var] = true;
      }
      plan.push_back(std::move(step));
    };
    if (delta) {
      take(static_cast<std::size_t>(
          std::find(remaining.begin(), remaining.end(), *delta) -
          remaining.begin()));
    }
    while (!remaining.empty()) {
      std::size_t best = 0;
      std::pair<std::size_t, std::size_t> best_key{
          std::numeric_limits<std::size_t>::max(), 0};
      for (std::size_t i = 0; i < remaining.size(); ++i) {
        const CompiledAtom& atom = rule.body[remaining[i]];
        std::pair<std::size_t, std::size_t> key{unbound_count(atom),
                                                EstimateAtom(atom)};
        if (key < best_key) {
          best_key = key;
          best = i;
        }
      }
      take(best);
    }
    // Attach builtins.
    std::vector<bool> seen(rule.variables.size(), false);
    std::vector<bool> placed(rule.builtins.size(), false);
    for (PlanStep& step : plan) {
      for (const Slot& s : rule.body[step.atom].args) {
        if (s.var != kNoVar) seen[s.var] = true;
      }
      for (std::size_t b = 0; b < rule.builtins.size(); ++b) {
        if (placed[b]) continue;
        bool ready = std::all_of(
            rule.builtins[b].args.begin(), rule.builtins[b].args.end(),
            [&](const Slot& s) { return s.var == kNoVar || seen[s.var]; });
        if (ready) {
          step.builtins.push_back(b);
          placed[b] = true;
        }
      }
    }
    return plan;
  }

  bool InWindow(const IdTriple& t, Window window) const {
    std::size_t stamp = stamp_.at(t);
    const std::size_t last = current_round_ - 1;
    switch (window) {
      case Window::kOld:
        return stamp < last;
      case Window::kDelta:
        return stamp == last;
      case Window::kAll:
        return true;
    }
    return true;
  }

  bool BuiltinHolds(const CompiledAtom& atom,
                    const std::vector<TermId>& values) const {
    auto value = [&](const Slot& s) {
      return s.var == kNoVar ? s.constant : values[s.var];
    };
    TermId a = value(atom.args[0]);
    TermId b = value(atom.args[1]);
    if (a == b) return true;
    if (options_.strict_equality) return false;
    const Term& ta = Resolve(a);
    const Term& tb = Resolve(b);
    return ta.datatype() == Datatype::kString &&
           tb.datatype() == Datatype::kString &&
           EqualsIgnoreCase(ta.value(), tb.value());
  }

  void Evaluate(const CompiledRule& rule, const std::vector<PlanStep>& plan) {
    std::vector<TermId> values(rule.variables.size(), kNoTerm);
    Join(rule, plan, 0, values);
  }

  // Binds `slot` to `id`; returns false on conflict. `newly` records
  // variables bound here so the caller can undo them.
  static bool Unify(const Slot& slot, TermId id, std::vector<TermId>& values,
                    std::vector<int>& newly) {
    if (slot.var == kNoVar) return slot.constant == id;
    if (values[slot.var] == kNoTerm) {
      values[slot.var] = id;
      newly.push_back(slot.var);
      return true;
    }
    return values[slot.var] == id;
  }

  void Join(const CompiledRule& rule, const std::vector<PlanStep>& plan,
            std::size_t depth, std::vector<TermId>& values) {
    if (depth == plan.size()) {
      Emit(rule, values);
      return;
    }
    const PlanStep& step = plan[depth];
    const CompiledAtom& atom = rule.body[step.atom];
    auto bound_value = [&](const Slot& s) {
      return s.var == kNoVar ? s.constant : values[s.var];
    };
    auto on_match = [&](const IdTriple& t, const Slot* subject_slot,
                        const Slot* object_slot) {
      if (!InWindow(t, step.window)) return;
      std::vector<int> newly;
      bool ok = Unify(*subject_slot, t[0], values, newly);
      if (ok && object_slot) ok = Unify(*object_slot, t[2], values, newly);
      if (ok) {
        for (std::size_t b : step.builtins) {
          if (!BuiltinHolds(rule.builtins[b], values)) {
            ok = false;
            break;
          }
        }
      }
      if (ok) Join(rule, plan, depth + 1, values);
      for (int v : newly) values[v] = kNoTerm;
    };
    if (atom.kind == AtomKind::kClass) {
      TermId x = bound_value(atom.args[0]);
      for (TermId c : atom.classes) {
        graph_.ForEachMatch({x, rdf_type_, c}, [&](const IdTriple& t) {
          on_match(t, &atom.args[0], nullptr);
          return true;
        });
      }
      return;
    }
    TermId s = bound_value(atom.args[0]);
    TermId o = bound_value(atom.args[1]);
    graph_.ForEachMatch({s, atom.predicate, o}, [&](const IdTriple& t) {
      on_match(t, &atom.args[0], &atom.args[1]);
      return true;
    });
  }

  void Emit(const CompiledRule& rule, const std::vector<TermId>& values) {
    auto value = [&](const Slot& s) {
      return s.var == kNoVar ? s.constant : values[s.var];
    };
    std::vector<TermId> visible(values.begin(),
                                values.begin() + static_cast<std::ptrdiff_t>(
                                                     rule.visible_variables));
    for (const CompiledAtom& atom : rule.head) {
      IdTriple t;
      if (atom.kind == AtomKind::kClass) {
        t = {value(atom.args[0]), rdf_type_, atom.predicate};
      } else {
        t = {value(atom.args[0]), atom.predicate, value(atom.args[1])};
      }
      if (!Resolve(t[0]).is_iri()) continue;
      auto fact_it = fact_index_.find(t);
      if (fact_it == fact_index_.end()) {
        if (graph_.Contains(t)) continue;  // asserted input fact
        fact_it = fact_index_.emplace(t, facts_.size()).first;
        facts_.push_back(Fact{t, current_round_, {}});
        pending_.push_back(t);
      }
      facts_[fact_it->second].provenance.emplace(rule.index, visible);
    }
  }

  Graph graph_;
  const std::vector<Rule>& rules_;
  const OntologySchema& schema_;
  InferenceOptions options_;
  TermId rdf_type_ = kNoTerm;
  std::vector<CompiledRule> compiled_;
  std::unordered_map<IdTriple, std::size_t, IdTripleHash> stamp_;
  std::size_t current_round_ = 1;
  std::size_t rounds_ = 0;
  std::vector<IdTriple> pending_;
  std::vector<Fact> facts_;
  std::unordered_map<IdTriple, std::size_t, IdTripleHash> fact_index_;
};

Triple TypeTriple(TermId subject, TermId klass) {
  return {Resolve(subject), RdfType(), Resolve(klass)};
}

}  // namespace

std::string_view ViolationKindName(ViolationKind kind) {
  return kind == ViolationKind::kDisjointMembership ? "disjoint_membership"
                                                    : "conflicting_boolean";
}

std::string Violation::ToString() const {
  return std::string(ViolationKindName(kind)) + " on " + subject.ToString() +
         ": " + first.ToString() + " vs " + second.ToString();
}

const DerivedFact* InferenceResult::FindDerived(const Triple& triple) const {
  TermPool& pool = TermPool::Global();
  IdTriple ids{pool.Find(triple.subject), pool.Find(triple.predicate),
               pool.Find(triple.object)};
  auto it = derived_index_.find(ids);
  return it == derived_index_.end() ? nullptr : &derived_[it->second];
}

const Rule* InferenceResult::FindRule(const std::string& id) const {
  for (const Rule& r : rules_) {
    if (r.id == id) return &r;
  }
  return nullptr;
}

InferenceResult ApplyRules(const Graph& graph, const std::vector<Rule>& rules,
                           const OntologySchema& schema,
                           const InferenceOptions& options) {
  Engine engine(graph, rules, schema, options);
  engine.Run();

  InferenceResult result;
  result.rules_ = rules;
  result.rounds_ = engine.rounds();
  for (auto& fact : engine.facts()) {
    DerivedFact derived;
    derived.triple = ResolveTriple(fact.triple);
    derived.round = fact.round;
    for (const auto& [rule_index, values] : fact.provenance) {
      const CompiledRule& compiled = engine.compiled()[rule_index];
      Provenance p;
      p.rule_id = rules[rule_index].id;
      for (std::size_t v = 0; v < values.size(); ++v) {
        p.bindings.emplace_back(compiled.variables[v], Resolve(values[v]));
      }
      derived.provenance.push_back(std::move(p));
    }
    std::sort(derived.provenance.begin(), derived.provenance.end());
    derived.provenance.erase(
        std::unique(derived.provenance.begin(), derived.provenance.end()),
        derived.provenance.end());
    result.derived_.push_back(std::move(derived));
  }
  std::sort(result.derived_.begin(), result.derived_.end(),
            [](const DerivedFact& a, const DerivedFact& b) {
              return std::tie(a.round, a.triple) < std::tie(b.round, b.triple);
            });
  for (std::size_t i = 0; i < result.derived_.size(); ++i) {
    result.derived_index_.emplace(InternTriple(result.derived_[i].triple), i);
  }
  result.graph_ = std::move(engine.graph());
  result.violations_ = CheckConsistency(result.graph_, schema);
  return result;
}

std::vector<Explanation> Explain(const InferenceResult& result,
                                 const Triple& fact) {
  const DerivedFact* derived = result.FindDerived(fact);
  if (!derived) {
    throw NotDerivedError(result.graph().Contains(fact)
                              ? NotDerivedError::Reason::kAsserted
                              : NotDerivedError::Reason::kAbsent,
                          fact.ToString());
  }
  std::vector<Explanation> out;
  for (const Provenance& p : derived->provenance) {
    const Rule* rule = result.FindRule(p.rule_id);
    out.push_back(Explanation{rule ? *rule : Rule{}, p.bindings});
  }
  return out;
}

std::vector<Violation> CheckConsistency(const Graph& graph,
                                        const OntologySchema& schema) {
  std::vector<Violation> out;
  const TermId rdf_type = Intern(RdfType());

  // subject -> (type id, ancestors)
  std::map<Term, std::vector<std::pair<TermId, std::vector<TermId>>>> types;
  graph.ForEachMatch({kNoTerm, rdf_type, kNoTerm}, [&](const IdTriple& t) {
    types[Resolve(t[0])].emplace_back(t[2], schema.AncestorIds(t[2]));
    return true;
  });
  std::vector<std::pair<TermId, TermId>> pairs;
  for (const auto& [a, b] : schema.disjoint_pairs()) {
    pairs.emplace_back(Intern(a), Intern(b));
  }
  for (auto& [subject, typed] : types) {
    std::sort(typed.begin(), typed.end(), [](const auto& x, const auto& y) {
      return Resolve(x.first) < Resolve(y.first);
    });
    for (const auto& [a, b] : pairs) {
      const std::pair<TermId, std::vector<TermId>>* in_a = nullptr;
      const std::pair<TermId, std::vector<TermId>>* in_b = nullptr;
      for (const auto& entry : typed) {
        const auto& up = entry.second;
        if (!in_a && std::find(up.begin(), up.end(), a) != up.end()) in_a = &entry;
        if (!in_b && std::find(up.begin(), up.end(), b) != up.end()) in_b = &entry;
      }
      if (in_a && in_b) {
        out.push_back(Violation{ViolationKind::kDisjointMembership, subject,
                                TypeTriple(Intern(subject), in_a->first),
                                TypeTriple(Intern(subject), in_b->first)});
      }
    }
  }

  const TermId true_id = Intern(Term::Boolean(true));
  const TermId false_id = Intern(Term::Boolean(false));
  graph.ForEachMatch({kNoTerm, kNoTerm, true_id}, [&](const IdTriple& t) {
    IdTriple negated{t[0], t[1], false_id};
    if (graph.Contains(negated)) {
      out.push_back(Violation{ViolationKind::kConflictingBoolean,
                              Resolve(t[0]), ResolveTriple(t),
                              ResolveTriple(negated)});
    }
    return true;
  });
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace vbd
