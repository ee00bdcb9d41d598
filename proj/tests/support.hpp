#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "vcsp/algebra.hpp"
#include "vcsp/core.hpp"
#include "vcsp/lp.hpp"
#include "vcsp/operation.hpp"

namespace testing_support {

using namespace vcsp;

inline Rational random_rational(std::mt19937_64& rng, int num_max, int den_max) {
  std::uniform_int_distribution<int> num(0, num_max), den(1, den_max);
  return Rational(num(rng), den(rng));
}

// Independent exhaustive minimum: walks D^n directly over the relation tables.
struct OracleResult {
  ExtRat value = ExtRat::infinity();
  std::vector<std::vector<int>> argmins;
};

inline ExtRat oracle_cost(const Instance& inst, std::span<const int> a) {
  ExtRat total(0);
  for (const auto& c : inst.constraints()) {
    std::vector<int> t;
    for (int v : c.scope) t.push_back(a[v]);
    const ExtRat& e = inst.relation(c.relation).at(t);
    if (e.is_inf()) return ExtRat::infinity();
    total += ExtRat(e.value() * Rational(c.multiplicity));
  }
  return total;
}

inline OracleResult oracle_min(const Instance& inst, bool keep_argmins = false) {
  OracleResult r;
  const int n = inst.num_vars(), d = inst.domain_size();
  std::vector<int> a(n, 0);
  while (true) {
    ExtRat v = oracle_cost(inst, a);
    if (v < r.value) {
      r.value = v;
      r.argmins.clear();
    }
    if (keep_argmins && v.is_finite() && v == r.value) r.argmins.push_back(a);
    int i = n - 1;
    while (i >= 0 && ++a[i] == d) a[i--] = 0;
    if (i < 0) break;
  }
  return r;
}

inline std::vector<int> distinct_vars(std::mt19937_64& rng, int n, int count) {
  std::vector<int> all(n);
  for (int i = 0; i < n; ++i) all[i] = i;
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(count);
  return all;
}

// Boolean 2-SAT clauses (crisp), rational unary costs and the two constants.
inline Instance random_2sat_costs(std::mt19937_64& rng, int n, int clauses, int unaries, int constants) {
  Instance inst(n, 2);
  int clause_rel[4];
  for (int s = 0; s < 4; ++s) {
    // clause (x ∨ y) with literal signs s: forbids the single tuple (s>>1, s&1) after sign flip
    WeightedRelation r(2, 2, ExtRat(0));
    r.set(std::vector<int>{(s >> 1) & 1, s & 1}, ExtRat::infinity());
    clause_rel[s] = inst.add_relation(r, "clause" + std::to_string(s));
  }
  const int c0 = inst.add_relation(constant_relation(2, 0), "const0");
  const int c1 = inst.add_relation(constant_relation(2, 1), "const1");
  std::uniform_int_distribution<int> pick(0, 3);
  for (int i = 0; i < clauses && n >= 2; ++i) inst.add_constraint(clause_rel[pick(rng)], distinct_vars(rng, n, 2));
  for (int i = 0; i < unaries; ++i) {
    WeightedRelation u(1, 2, std::vector<ExtRat>{random_rational(rng, 9, 4), random_rational(rng, 9, 4)});
    int id = inst.intern_relation(u, "u" + std::to_string(i));
    inst.add_constraint(id, distinct_vars(rng, n, 1));
  }
  std::uniform_int_distribution<int> coin(0, 1);
  for (int i = 0; i < constants; ++i) inst.add_constraint(coin(rng) ? c1 : c0, distinct_vars(rng, n, 1));
  return inst;
}

// Crisp 2-SAT: every clause forbids one of the four Boolean pairs.
inline Instance random_crisp_2sat(std::mt19937_64& rng, int n, int clauses) {
  Instance inst(n, 2);
  int clause_rel[4];
  for (int s = 0; s < 4; ++s) {
    WeightedRelation r(2, 2, ExtRat(0));
    r.set(std::vector<int>{(s >> 1) & 1, s & 1}, ExtRat::infinity());
    clause_rel[s] = inst.add_relation(r, "clause" + std::to_string(s));
  }
  std::uniform_int_distribution<int> pick(0, 3);
  for (int i = 0; i < clauses; ++i) inst.add_constraint(clause_rel[pick(rng)], distinct_vars(rng, n, 2));
  return inst;
}

// Submodular: directed and undirected cut weights plus arbitrary unary costs.
inline Instance random_cut(std::mt19937_64& rng, int n, int edges) {
  Instance inst(n, 2);
  std::uniform_int_distribution<int> coin(0, 1);
  for (int i = 0; i < edges; ++i) {
    const Rational w = random_rational(rng, 6, 3);
    std::vector<ExtRat> t{ExtRat(0), ExtRat(w), coin(rng) ? ExtRat(0) : ExtRat(w), ExtRat(0)};
    int id = inst.intern_relation(WeightedRelation(2, 2, t), "cut" + std::to_string(i));
    inst.add_constraint(id, distinct_vars(rng, n, 2));
  }
  for (int v = 0; v < n; ++v) {
    WeightedRelation u(1, 2, std::vector<ExtRat>{random_rational(rng, 8, 3), random_rational(rng, 8, 3)});
    inst.add_constraint(inst.intern_relation(u, "u" + std::to_string(v)), {v});
  }
  return inst;
}

// Arbitrary relations of arity ≤ 3 with some infinite entries.
inline Instance random_mixed(std::mt19937_64& rng, int n, int d, int constraints, int inf_percent = 15) {
  Instance inst(n, d);
  std::uniform_int_distribution<int> ar(1, std::min(3, n)), pct(0, 99);
  for (int i = 0; i < constraints; ++i) {
    const int m = ar(rng);
    WeightedRelation r(m, d);
    for (std::size_t j = 0; j < r.size(); ++j)
      r.set(j, pct(rng) < inf_percent ? ExtRat::infinity() : ExtRat(random_rational(rng, 5, 2)));
    inst.add_constraint(inst.intern_relation(r, "r" + std::to_string(i)), distinct_vars(rng, n, m));
  }
  return inst;
}

// Coordinatewise application used by the independent polymorphism checks.
inline bool oracle_is_polymorphism(const Operation& f, const WeightedRelation& rel) {
  const auto tuples = rel.feasible_tuples();
  const int m = f.arity(), r = rel.arity();
  if (tuples.empty()) return true;
  std::vector<std::size_t> pick(m, 0);
  while (true) {
    std::vector<int> image(r), args(m);
    for (int c = 0; c < r; ++c) {
      for (int i = 0; i < m; ++i) args[i] = tuples[pick[i]][c];
      image[c] = f(args);
    }
    if (!rel.feasible(image)) return false;
    int i = m - 1;
    while (i >= 0 && ++pick[i] == tuples.size()) pick[i--] = 0;
    if (i < 0) return true;
  }
}

inline bool oracle_is_polymorphism(const Operation& f, const Language& lang) {
  for (const auto& rel : lang.relations)
    if (!oracle_is_polymorphism(f, rel)) return false;
  return true;
}

// Weak near-unanimity checked pointwise from the definition.
inline bool oracle_is_wnu(const Operation& f) {
  const int m = f.arity(), d = f.domain_size();
  for (int x = 0; x < d; ++x) {
    if (f(std::vector<int>(m, x)) != x) return false;
    for (int y = 0; y < d; ++y) {
      std::vector<int> first(m, x);
      first[0] = y;
      const int v = f(first);
      for (int p = 1; p < m; ++p) {
        std::vector<int> t(m, x);
        t[p] = y;
        if (f(t) != v) return false;
      }
    }
  }
  return true;
}

inline Operation boolean_op(int arity, const std::function<int(std::span<const int>)>& g) {
  return Operation::from_function(arity, 2, g);
}

// All blocks of m feasible tuples of `rel`, in lexicographic pick order.
inline void for_each_block(const WeightedRelation& rel, int m,
                           const std::function<void(const std::vector<const Tuple*>&)>& visit) {
  const auto tuples = rel.feasible_tuples();
  if (tuples.empty()) return;
  std::vector<std::size_t> pick(m, 0);
  std::vector<const Tuple*> block(m);
  while (true) {
    for (int i = 0; i < m; ++i) block[i] = &tuples[pick[i]];
    visit(block);
    int i = m - 1;
    while (i >= 0 && ++pick[i] == tuples.size()) pick[i--] = 0;
    if (i < 0) return;
  }
}

inline Tuple apply_rows(const Operation& f, const std::vector<const Tuple*>& block) {
  const int r = int(block.front()->size()), m = int(block.size());
  Tuple image(r);
  std::vector<int> args(m);
  for (int c = 0; c < r; ++c) {
    for (int i = 0; i < m; ++i) args[i] = (*block[i])[c];
    image[c] = f(args);
  }
  return image;
}

// Σ_g ω(g) φ(g(x_1..x_m)) ≤ (1/m) Σ_i φ(x_i) on every block, evaluated from scratch.
inline bool oracle_is_fractional_polymorphism(const FractionalOperation& omega, const Language& lang) {
  const int m = omega.arity();
  bool ok = true;
  for (const auto& rel : lang.relations)
    for_each_block(rel, m, [&](const std::vector<const Tuple*>& block) {
      Rational avg(0);
      for (const Tuple* t : block) avg += rel.at(*t).value();
      avg /= Rational(m);
      ExtRat lhs(0);
      for (const auto& [g, w] : omega.weights()) lhs += rel.at(apply_rows(g, block)).scaled(w);
      if (!(lhs <= ExtRat(avg))) ok = false;
    });
  return ok;
}

// Membership by a direct LP over every m-ary polymorphism: max ω(f) under the inequality system.
inline bool oracle_in_support(const Operation& f, const Language& lang) {
  const int m = f.arity(), d = lang.domain_size;
  std::vector<Operation> cols;
  const std::uint64_t count = power(std::uint64_t(d), int(power(std::uint64_t(d), m)));
  for (std::uint64_t code = 0; code < count; ++code) {
    std::vector<int> table(power(std::uint64_t(d), m));
    std::uint64_t c = code;
    for (auto& v : table) {
      v = int(c % d);
      c /= d;
    }
    Operation g(m, d, table);
    if (oracle_is_polymorphism(g, lang)) cols.push_back(g);
  }
  const auto fit = std::find(cols.begin(), cols.end(), f);
  if (fit == cols.end()) return false;
  lp::LinearProgram prog{int(cols.size())};
  prog.set_objective(int(fit - cols.begin()), Rational(-1));
  std::vector<std::pair<int, Rational>> norm;
  for (int j = 0; j < int(cols.size()); ++j) norm.push_back({j, Rational(1)});
  prog.add_row(norm, lp::Sense::Equal, Rational(1));
  for (const auto& rel : lang.relations)
    for_each_block(rel, m, [&](const std::vector<const Tuple*>& block) {
      Rational avg(0);
      for (const Tuple* t : block) avg += rel.at(*t).value();
      avg /= Rational(m);
      std::vector<std::pair<int, Rational>> terms;
      for (int j = 0; j < int(cols.size()); ++j) terms.push_back({j, rel.at(apply_rows(cols[j], block)).value()});
      prog.add_row(terms, lp::Sense::LessEqual, avg);
    });
  const lp::Result r = lp::solve(prog);
  return r.status == lp::Status::Optimal && r.value < ExtRat(0);
}

}  // namespace testing_support
