#include "vcsp/gadgets.hpp"

#include <numeric>

#include "vcsp/error.hpp"

namespace vcsp {

namespace {

int find_root(std::vector<int>& parent, int v) {
  while (parent[v] != v) {
    parent[v] = parent[parent[v]];
    v = parent[v];
  }
  return v;
}

WeightedRelation shifted(const WeightedRelation& phi, const Rational& shift) {
  std::vector<ExtRat> t;
  t.reserve(phi.size());
  for (const auto& e : phi.table()) t.push_back(e.is_inf() ? e : ExtRat(e.value() - shift));
  return WeightedRelation(phi.arity(), phi.domain_size(), std::move(t));
}

bool single_finite_value(const WeightedRelation& phi) { return phi.min_finite() == phi.max_finite(); }

Rational least_positive(const WeightedRelation& phi) {
  std::optional<Rational> best;
  for (const auto& e : phi.table())
    if (e.is_finite() && e.value().sign() > 0 && (!best || e.value() < *best)) best = e.value();
  return best.value_or(Rational(0));
}

std::string fresh_name(const Instance& inst, const std::string& base) {
  std::string name = base;
  for (int i = 1; inst.find_relation(name); ++i) name = base + "_" + std::to_string(i);
  return name;
}

// Copies the relation store of `src` into a fresh instance with the same variables.
Instance empty_like(const Instance& src) {
  Instance out(src.num_vars(), src.domain_size());
  for (std::size_t i = 0; i < src.relations().size(); ++i) out.add_relation(src.relations()[i], src.relation_names()[i]);
  return out;
}

std::int64_t to_multiplicity(const mpz_class& z) {
  if (!z.fits_slong_p()) throw ResourceError("gadget multiplicity does not fit in 64 bits");
  return z.get_si();
}

}  // namespace

ContractionResult contract_equalities(const Instance& instance, int eq_relation) {
  if (eq_relation < 0 || eq_relation >= int(instance.relations().size()))
    throw InputError("equality relation id out of range");
  if (instance.relation(eq_relation) != equality_relation(instance.domain_size()))
    throw InputError("relation is not the crisp binary equality relation");

  const int n = instance.num_vars();
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  for (const auto& c : instance.constraints()) {
    if (c.relation != eq_relation) continue;
    int a = find_root(parent, c.scope[0]);
    int b = find_root(parent, c.scope[1]);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  ContractionResult out;
  out.class_of.assign(n, -1);
  std::vector<int> class_of_root(n, -1);
  int classes = 0;
  for (int v = 0; v < n; ++v) {
    int r = find_root(parent, v);
    if (class_of_root[r] < 0) class_of_root[r] = classes++;
    out.class_of[v] = class_of_root[r];
  }
  Instance q(classes, instance.domain_size());
  for (std::size_t i = 0; i < instance.relations().size(); ++i)
    q.add_relation(instance.relations()[i], instance.relation_names()[i]);
  for (const auto& c : instance.constraints()) {
    if (c.relation == eq_relation) continue;
    std::vector<int> scope;
    for (int v : c.scope) scope.push_back(out.class_of[v]);
    q.add_constraint(c.relation, std::move(scope), c.multiplicity);
  }
  out.instance = std::move(q);
  return out;
}

Assignment lift_assignment(const ContractionResult& contraction, std::span<const int> quotient_assignment) {
  if (int(quotient_assignment.size()) != contraction.instance.num_vars())
    throw InputError("quotient assignment length mismatch");
  Assignment a(contraction.class_of.size());
  for (std::size_t v = 0; v < a.size(); ++v) a[v] = quotient_assignment[contraction.class_of[v]];
  return a;
}

GadgetResult opt_gadget(const Instance& instance, const WeightedRelation& phi) {
  const WeightedRelation target = opt_relation(phi);  // throws on all-∞ φ
  GadgetResult g;
  g.shift = phi.min_finite();
  const WeightedRelation normalized = shifted(phi, g.shift);

  if (single_finite_value(normalized)) {
    g.copies = 1;
  } else {
    for (const auto& c : instance.constraints()) {
      const auto& rel = instance.relation_of(c);
      if (!rel.has_finite_entry()) continue;
      g.bound += (rel.max_finite() - rel.min_finite()) * Rational(c.multiplicity);
    }
    g.delta = least_positive(normalized);
    g.copies = ((g.bound + Rational(1)) / g.delta).ceil();
  }

  Instance out = empty_like(instance);
  const int phi_id = out.intern_relation(normalized, fresh_name(out, "phi"));
  const std::int64_t copies = to_multiplicity(g.copies);
  for (const auto& c : instance.constraints()) {
    if (instance.relation_of(c) == target) {
      out.add_constraint(phi_id, c.scope, c.multiplicity * copies);
      g.replaced += c.multiplicity;
    } else {
      out.add_constraint(c.relation, c.scope, c.multiplicity);
    }
  }
  g.instance = std::move(out);
  return g;
}

Rational opt_gadget_threshold(const Instance& original, const WeightedRelation& phi, const GadgetResult& g) {
  const WeightedRelation target = opt_relation(phi);
  Rational t = g.bound;
  for (const auto& c : original.constraints()) {
    const auto& rel = original.relation_of(c);
    if (rel == target || !rel.has_finite_entry()) continue;
    t += rel.min_finite() * Rational(c.multiplicity);
  }
  return t;
}

GadgetResult feas_gadget(const Instance& instance, const WeightedRelation& phi) {
  if (!phi.has_finite_entry()) throw InputError("feas gadget needs a relation with a finite entry");
  const WeightedRelation target = feas_relation(phi);
  GadgetResult g;
  g.shift = phi.min_finite();
  const WeightedRelation normalized = shifted(phi, g.shift);

  std::int64_t occurrences = 0;
  for (const auto& c : instance.constraints())
    if (instance.relation_of(c) == target) occurrences += c.multiplicity;

  if (single_finite_value(normalized)) {
    g.copies = 1;
  } else {
    g.bound = normalized.max_finite();
    mpz_class lcm = 1;
    auto absorb = [&](const WeightedRelation& rel) {
      for (const auto& e : rel.table())
        if (e.is_finite()) {
          mpz_class den = e.value().denominator();
          mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), den.get_mpz_t());
        }
    };
    for (const auto& c : instance.constraints()) absorb(instance.relation_of(c));
    absorb(normalized);
    g.delta = Rational(mpq_class(mpz_class(1), lcm));
    g.copies = ((Rational(occurrences) * (g.bound + Rational(1))) / g.delta).ceil();
    if (g.copies < 1) g.copies = 1;
  }
  g.replaced = occurrences;

  Instance out = empty_like(instance);
  const int phi_id = out.intern_relation(normalized, fresh_name(out, "phi"));
  const std::int64_t copies = to_multiplicity(g.copies);
  for (const auto& c : instance.constraints()) {
    if (instance.relation_of(c) == target)
      out.add_constraint(phi_id, c.scope, c.multiplicity);
    else
      out.add_constraint(c.relation, c.scope, c.multiplicity * copies);
  }
  g.instance = std::move(out);
  return g;
}

}  // namespace vcsp
