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

#include "oracles.h"

#include <algorithm>
#include <cctype>
#include <optional>
#include <tuple>

namespace vbd::oracle {

namespace {

using Env = std::map<std::string, Term>;

std::string AsciiLower(const std::string& s) {
  std::string out = s;
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool LenientEqual(const Term& a, const Term& b) {
  if (a == b) return true;
  return a.is_literal() && b.is_literal() && a.datatype() == Datatype::kString &&
         b.datatype() == Datatype::kString && AsciiLower(a.value()) == AsciiLower(b.value());
}

// Binds `arg` to `value` in `env`; false on a clash.
bool Unify(const AtomArg& arg, const Term& value, Env& env, bool lenient_constant) {
  if (!arg.is_variable) {
    return lenient_constant ? LenientEqual(arg.constant, value) : arg.constant == value;
  }
  auto [it, inserted] = env.emplace(arg.variable, value);
  return inserted || it->second == value;
}

std::optional<Term> Value(const AtomArg& arg, const Env& env) {
  if (!arg.is_variable) return arg.constant;
  auto it = env.find(arg.variable);
  if (it == env.end()) return std::nullopt;
  return it->second;
}

std::map<Term, std::set<Term>> SubclassClosure(const OntologySchema& schema) {
  // descendants[c] = {c} plus everything reaching c through subclass edges.
  std::set<Term> nodes = schema.classes();
  for (const auto& [child, parent] : schema.subclass_edges()) {
    nodes.insert(child);
    nodes.insert(parent);
  }
  std::map<Term, std::set<Term>> out;
  for (const Term& c : nodes) out[c].insert(c);
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& [child, parent] : schema.subclass_edges()) {
      for (const Term& d : std::set<Term>(out[child])) {
        if (out[parent].insert(d).second) changed = true;
      }
    }
  }
  return out;
}

struct Matcher {
  const std::vector<Triple>* triples;
  const std::map<Term, std::set<Term>>* descendants;
  bool lenient;
  Term type = RdfType();

  bool ClassMatches(const Term& cls, const Term& actual) const {
    auto it = descendants->find(cls);
    if (it == descendants->end()) return cls == actual;
    return it->second.contains(actual);
  }

  template <typename Emit>
  void Solve(const std::vector<const Atom*>& atoms, std::size_t i, Env& env,
             const Emit& emit) const {
    if (i == atoms.size()) {
      emit(env);
      return;
    }
    const Atom& atom = *atoms[i];
    for (const Triple& t : *triples) {
      Env next = env;
      if (atom.kind == AtomKind::kClass) {
        if (t.predicate != type || !ClassMatches(atom.predicate, t.object)) continue;
        if (!Unify(atom.args[0], t.subject, next, false)) continue;
      } else {
        if (t.predicate != atom.predicate) continue;
        if (!Unify(atom.args[0], t.subject, next, false)) continue;
        if (!Unify(atom.args[1], t.object, next, lenient)) continue;
      }
      Solve(atoms, i + 1, next, emit);
    }
  }
};

}  // namespace

std::set<Triple> NaiveFixpoint(const Graph& graph, const std::vector<Rule>& rules,
                               const OntologySchema& schema) {
  const std::map<Term, std::set<Term>> descendants = SubclassClosure(schema);
  std::set<Triple> facts;
  for (const Triple& t : graph.Triples()) facts.insert(t);

  bool changed = true;
  while (changed) {
    changed = false;
    const std::vector<Triple> snapshot(facts.begin(), facts.end());
    Matcher matcher{&snapshot, &descendants, true};
    std::set<Triple> fresh;
    for (const Rule& rule : rules) {
      std::vector<const Atom*> atoms;
      std::vector<const Atom*> builtins;
      for (const Atom& a : rule.body) {
        (a.kind == AtomKind::kBuiltin ? builtins : atoms).push_back(&a);
      }
      Env env;
      matcher.Solve(atoms, 0, env, [&](const Env& e) {
        for (const Atom* b : builtins) {
          std::optional<Term> l = Value(b->args[0], e);
          std::optional<Term> r = Value(b->args[1], e);
          if (!l || !r || !LenientEqual(*l, *r)) return;
        }
        for (const Atom& h : rule.head) {
          std::optional<Term> s = Value(h.args[0], e);
          if (!s || s->is_literal()) continue;
          if (h.kind == AtomKind::kClass) {
            fresh.insert(Triple{*s, RdfType(), h.predicate});
          } else {
            std::optional<Term> o = Value(h.args[1], e);
            if (o) fresh.insert(Triple{*s, h.predicate, *o});
          }
        }
      });
    }
    for (const Triple& t : fresh) {
      if (facts.insert(t).second) changed = true;
    }
  }
  return facts;
}

std::vector<std::vector<Term>> BruteForceQuery(const Query& query, const Graph& graph) {
  const std::vector<Triple> triples = graph.Triples();
  std::set<std::vector<Term>> rows;

  auto bind = [](const QueryTerm& q, const Term& value, Env& env) {
    if (!q.is_variable) return q.constant == value;
    auto [it, inserted] = env.emplace(q.variable, value);
    return inserted || it->second == value;
  };

  std::vector<Env> partial = {Env{}};
  for (const QueryPattern& p : query.patterns) {
    std::vector<Env> next;
    for (const Env& env : partial) {
      for (const Triple& t : triples) {
        Env e = env;
        if (bind(p.subject, t.subject, e) && bind(p.predicate, t.predicate, e) &&
            bind(p.object, t.object, e)) {
          next.push_back(std::move(e));
        }
      }
    }
    partial = std::move(next);
  }
  for (const Env& env : partial) {
    bool keep = true;
    for (const QueryFilter& f : query.filters) {
      const Term& left = env.at(f.left);
      const Term& right = f.right.is_variable ? env.at(f.right.variable) : f.right.constant;
      bool equal = left == right;
      if ((f.op == QueryFilter::Op::kEqual) != equal) {
        keep = false;
        break;
      }
    }
    if (!keep) continue;
    std::vector<Term> row;
    for (const std::string& v : query.select_vars) row.push_back(env.at(v));
    rows.insert(std::move(row));
  }
  return {rows.begin(), rows.end()};
}

std::size_t Levenshtein(const std::string& a, const std::string& b) {
  std::vector<std::vector<std::size_t>> d(a.size() + 1,
                                          std::vector<std::size_t>(b.size() + 1));
  for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t sub = d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, sub});
    }
  }
  return d[a.size()][b.size()];
}

std::vector<std::string> RankCorrections(const std::string& word, const Lexicon& lexicon) {
  const std::string lower = AsciiLower(word);
  if (lexicon.dictionary().contains(lower)) return {lower};
  std::vector<std::tuple<std::size_t, std::int64_t, std::string>> ranked;
  for (const auto& [entry, freq] : lexicon.dictionary()) {
    std::size_t d = Levenshtein(lower, entry);
    if (d <= 2) ranked.emplace_back(d, -static_cast<std::int64_t>(freq), entry);
  }
  std::sort(ranked.begin(), ranked.end());
  std::vector<std::string> out;
  for (const auto& r : ranked) out.push_back(std::get<2>(r));
  return out;
}

namespace {

template <typename T>
const T& Pick(const std::vector<T>& v, std::mt19937_64& rng) {
  return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

bool Chance(double p, std::mt19937_64& rng) {
  return std::bernoulli_distribution(p)(rng);
}

std::size_t Between(std::size_t lo, std::size_t hi, std::mt19937_64& rng) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

Term Ex(const std::string& local) { return Term::Iri("http://example.org/rand#" + local); }

}  // namespace

RandomInstance RandomRuleInstance(std::mt19937_64& rng, std::size_t max_triples,
                                  std::size_t max_rules) {
  const Term owl_class = Term::Iri(std::string(ns::kOwl) + "Class");
  const Term subclass_of = Term::Iri(std::string(ns::kRdfs) + "subClassOf");

  std::vector<Term> classes;
  for (int i = 0; i < 6; ++i) classes.push_back(Ex("C" + std::to_string(i)));
  std::vector<Term> props;
  for (int i = 0; i < 4; ++i) props.push_back(Ex("p" + std::to_string(i)));
  std::vector<Term> entities;
  for (int i = 0; i < 8; ++i) entities.push_back(Ex("e" + std::to_string(i)));
  const std::vector<Term> literals = {Term::String("a"),   Term::String("A"),
                                      Term::String("b"),   Term::Boolean(true),
                                      Term::Boolean(false), Term::Integer(1),
                                      Term::Integer(2)};

  Graph schema_graph;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    schema_graph.Insert(Triple{classes[i], RdfType(), owl_class});
    if (i > 0 && Chance(0.6, rng)) {
      schema_graph.Insert(Triple{classes[i], subclass_of, classes[Between(0, i - 1, rng)]});
    }
  }

  RandomInstance out;
  out.schema = OntologySchema::Build(schema_graph);

  auto random_object = [&]() {
    return Chance(0.6, rng) ? Pick(entities, rng) : Pick(literals, rng);
  };
  const std::size_t n = Between(1, max_triples, rng);
  for (std::size_t i = 0; i < n; ++i) {
    if (Chance(0.3, rng)) {
      out.graph.Insert(Triple{Pick(entities, rng), RdfType(), Pick(classes, rng)});
    } else {
      out.graph.Insert(Triple{Pick(entities, rng), Pick(props, rng), random_object()});
    }
  }

  const std::vector<std::string> vars = {"?x", "?y", "?z"};
  const std::size_t rule_count = Between(1, max_rules, rng);
  for (std::size_t r = 0; r < rule_count; ++r) {
    Rule rule;
    rule.id = "r" + std::to_string(r);
    std::vector<std::string> bound;
    auto subject_arg = [&]() {
      if (Chance(0.9, rng)) {
        std::string v = Pick(vars, rng);
        if (std::find(bound.begin(), bound.end(), v) == bound.end()) bound.push_back(v);
        return AtomArg::Variable(v);
      }
      return AtomArg::Constant(Pick(entities, rng));
    };
    const std::size_t body = Between(1, 3, rng);
    for (std::size_t b = 0; b < body; ++b) {
      Atom atom;
      if (Chance(0.35, rng)) {
        atom.kind = AtomKind::kClass;
        atom.predicate = Pick(classes, rng);
        atom.args = {subject_arg()};
      } else {
        atom.kind = AtomKind::kProperty;
        atom.predicate = Pick(props, rng);
        AtomArg s = subject_arg();
        AtomArg o = Chance(0.7, rng) ? subject_arg() : AtomArg::Constant(random_object());
        atom.args = {s, o};
      }
      rule.body.push_back(std::move(atom));
    }
    if (!bound.empty() && Chance(0.3, rng)) {
      Atom eq;
      eq.kind = AtomKind::kBuiltin;
      eq.predicate = SwrlbEqual();
      eq.args = {AtomArg::Variable(Pick(bound, rng)),
                 Chance(0.5, rng) ? AtomArg::Variable(Pick(bound, rng))
                                  : AtomArg::Constant(Pick(literals, rng))};
      rule.body.push_back(std::move(eq));
    }
    auto head_arg = [&]() {
      if (!bound.empty() && Chance(0.85, rng)) return AtomArg::Variable(Pick(bound, rng));
      return AtomArg::Constant(Pick(entities, rng));
    };
    const std::size_t head = Between(1, 2, rng);
    for (std::size_t h = 0; h < head; ++h) {
      Atom atom;
      if (Chance(0.4, rng)) {
        atom.kind = AtomKind::kClass;
        atom.predicate = Pick(classes, rng);
        atom.args = {head_arg()};
      } else {
        atom.kind = AtomKind::kProperty;
        atom.predicate = Pick(props, rng);
        AtomArg s = head_arg();
        AtomArg o = Chance(0.8, rng) ? head_arg() : AtomArg::Constant(random_object());
        atom.args = {s, o};
      }
      rule.head.push_back(std::move(atom));
    }
    rule.text = rule.ToString();
    out.rules.push_back(std::move(rule));
  }
  return out;
}

RandomQueryInstance RandomQuery(std::mt19937_64& rng, std::size_t max_triples,
                                std::size_t max_patterns) {
  std::vector<Term> entities;
  for (int i = 0; i < 10; ++i) entities.push_back(Ex("e" + std::to_string(i)));
  std::vector<Term> preds;
  for (int i = 0; i < 4; ++i) preds.push_back(Ex("q" + std::to_string(i)));
  const std::vector<Term> literals = {Term::String("x"), Term::String("X"),
                                      Term::String("y"), Term::Integer(1),
                                      Term::Boolean(true)};
  auto object = [&]() {
    return Chance(0.6, rng) ? Pick(entities, rng) : Pick(literals, rng);
  };

  RandomQueryInstance out;
  const std::size_t n = Between(0, max_triples, rng);
  for (std::size_t i = 0; i < n; ++i) {
    out.graph.Insert(Triple{Pick(entities, rng), Pick(preds, rng), object()});
  }

  // One constant the graph never uses, so empty joins come up.
  std::vector<Term> subject_pool = entities;
  subject_pool.push_back(Ex("missing"));
  const std::vector<std::string> vars = {"?a", "?b", "?c", "?d"};

  Query& q = out.query;
  const std::size_t patterns = Between(1, max_patterns, rng);
  for (std::size_t i = 0; i < patterns; ++i) {
    QueryPattern p;
    p.subject = (i == 0 || Chance(0.6, rng)) ? QueryTerm::Variable(Pick(vars, rng))
                                             : QueryTerm::Constant(Pick(subject_pool, rng));
    p.predicate = Chance(0.25, rng) ? QueryTerm::Variable(Pick(vars, rng))
                                    : QueryTerm::Constant(Pick(preds, rng));
    p.object = Chance(0.6, rng) ? QueryTerm::Variable(Pick(vars, rng))
                                : QueryTerm::Constant(object());
    q.patterns.push_back(std::move(p));
  }
  const std::vector<std::string> bound = q.PatternVariables();
  const std::size_t filters = Between(0, 2, rng);
  for (std::size_t i = 0; i < filters; ++i) {
    QueryFilter f;
    f.op = Chance(0.5, rng) ? QueryFilter::Op::kEqual : QueryFilter::Op::kNotEqual;
    f.left = Pick(bound, rng);
    f.right = Chance(0.5, rng) ? QueryTerm::Variable(Pick(bound, rng))
                               : QueryTerm::Constant(Chance(0.5, rng) ? Pick(entities, rng)
                                                                      : object());
    q.filters.push_back(std::move(f));
  }
  for (const std::string& v : bound) {
    if (Chance(0.6, rng)) q.select_vars.push_back(v);
  }
  if (q.select_vars.empty()) q.select_vars.push_back(Pick(bound, rng));
  q.distinct = Chance(0.5, rng);
  return out;
}

Graph RandomTurtleGraph(std::mt19937_64& rng, std::size_t max_triples) {
  static const std::vector<std::string> kIris = {
      "http://example.org/vbd#has_Fever",
      "http://example.org/vbd#with-dash",
      "http://example.org/vbd#a.b",
      "http://example.org/vbd#trailing.",
      "http://example.org/vbd#1digit",
      "http://example.org/vbd#caf\xC3\xA9",
      "http://example.org/other/path/seg",
      "http://example.org/q?x=1&y=2",
      "http://example.org/vbd#",
      "urn:isbn:0451450523",
      "http://www.w3.org/2002/07/owl#Class",
  };
  static const std::vector<std::string> kStrings = {
      "",
      "plain",
      "with \"quotes\"",
      "back\\slash",
      "line\nbreak",
      "tab\there\r",
      "unicode \xC3\xA9 \xE2\x9C\x93",
      "'single'",
      "#hash ; , .",
      "a@b.c",
      "\"\"\"triple\"\"\"",
      "true",
      "42",
  };
  static const std::vector<std::string> kDecimals = {"3.25", "-0.5", "0.0", "10.125",
                                                     "-7.75"};

  auto iri = [&]() { return Term::Iri(Pick(kIris, rng)); };
  auto blank = [&]() { return Term::Iri("_:b" + std::to_string(Between(0, 3, rng))); };

  Graph g;
  const std::size_t n = Between(0, max_triples, rng);
  for (std::size_t i = 0; i < n; ++i) {
    Term s = Chance(0.2, rng) ? blank() : iri();
    Term p = Chance(0.15, rng) ? RdfType() : iri();
    Term o;
    switch (Between(0, 6, rng)) {
      case 0: o = iri(); break;
      case 1: o = blank(); break;
      case 2: o = Term::String(Pick(kStrings, rng)); break;
      case 3: o = Term::Boolean(Chance(0.5, rng)); break;
      case 4:
        o = Term::Integer(std::uniform_int_distribution<std::int64_t>(-1000000, 1000000)(rng));
        break;
      case 5: o = Term::Literal(Pick(kDecimals, rng), Datatype::kDecimal); break;
      default: o = Term::String(Pick(kStrings, rng) + Pick(kStrings, rng)); break;
    }
    g.Insert(Triple{s, p, o});
  }
  return g;
}

std::string InjectTypo(const std::string& word, std::mt19937_64& rng) {
  static const std::string kLetters = "abcdefghijklmnopqrstuvwxyz";
  auto letter = [&]() { return kLetters[Between(0, kLetters.size() - 1, rng)]; };
  std::string out = word;
  const std::size_t kind = word.size() > 1 ? Between(0, 2, rng) : Between(0, 1, rng);
  if (kind == 0) {
    std::size_t i = Between(0, word.size() - 1, rng);
    char c = letter();
    while (c == out[i]) c = letter();
    out[i] = c;
  } else if (kind == 1) {
    out.insert(out.begin() + static_cast<std::ptrdiff_t>(Between(0, word.size(), rng)),
               letter());
  } else {
    out.erase(out.begin() + static_cast<std::ptrdiff_t>(Between(0, word.size() - 1, rng)));
  }
  return out;
}

}  // namespace vbd::oracle
