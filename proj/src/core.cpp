#include "vcsp/core.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

#include "vcsp/error.hpp"

namespace vcsp {

std::uint64_t power(std::uint64_t base, int exponent) {
  std::uint64_t r = 1;
  for (int i = 0; i < exponent; ++i) {
    if (base != 0 && r > (std::uint64_t(1) << 62) / base) throw ResourceError("table size overflows");
    r *= base;
  }
  return r;
}

std::uint64_t tuple_index(std::span<const int> t, int domain_size) {
  std::uint64_t idx = 0;
  for (int v : t) idx = idx * std::uint64_t(domain_size) + std::uint64_t(v);
  return idx;
}

Tuple tuple_at(std::uint64_t index, int arity, int domain_size) {
  Tuple t(arity);
  for (int i = arity - 1; i >= 0; --i) {
    t[i] = int(index % std::uint64_t(domain_size));
    index /= std::uint64_t(domain_size);
  }
  return t;
}

std::uint64_t default_budget() {
  static const std::uint64_t budget = [] {
    if (const char* env = std::getenv("VCSP_SA_BUDGET")) {
      try {
        return std::uint64_t(std::stoull(env));
      } catch (const std::exception&) {
        throw InputError("VCSP_SA_BUDGET is not a non-negative integer");
      }
    }
    return std::uint64_t(1) << 26;
  }();
  return budget;
}

WeightedRelation::WeightedRelation(int arity, int domain_size, ExtRat fill)
    : arity_(arity), domain_size_(domain_size) {
  if (arity < 0) throw InputError("negative arity");
  if (domain_size < 1) throw InputError("domain size must be positive");
  table_.assign(power(std::uint64_t(domain_size), arity), fill);
}

WeightedRelation::WeightedRelation(int arity, int domain_size, std::vector<ExtRat> table)
    : arity_(arity), domain_size_(domain_size), table_(std::move(table)) {
  if (arity < 0) throw InputError("negative arity");
  if (domain_size < 1) throw InputError("domain size must be positive");
  if (table_.size() != power(std::uint64_t(domain_size), arity))
    throw InputError("weighted relation table is not total over D^arity");
}

void WeightedRelation::set(std::span<const int> t, ExtRat value) {
  if (int(t.size()) != arity_) throw InputError("tuple length does not match arity");
  for (int v : t)
    if (v < 0 || v >= domain_size_) throw InputError("tuple entry outside the domain");
  table_[tuple_index(t, domain_size_)] = std::move(value);
}

bool WeightedRelation::is_crisp() const {
  return std::all_of(table_.begin(), table_.end(), [](const ExtRat& e) { return e.is_inf() || e.value().is_zero(); });
}

bool WeightedRelation::is_finite_valued() const {
  return std::all_of(table_.begin(), table_.end(), [](const ExtRat& e) { return e.is_finite(); });
}

bool WeightedRelation::has_finite_entry() const {
  return std::any_of(table_.begin(), table_.end(), [](const ExtRat& e) { return e.is_finite(); });
}

Rational WeightedRelation::min_finite() const {
  const ExtRat* best = nullptr;
  for (const auto& e : table_)
    if (e.is_finite() && (!best || e < *best)) best = &e;
  if (!best) throw InputError("weighted relation has no finite entry");
  return best->value();
}

Rational WeightedRelation::max_finite() const {
  const ExtRat* best = nullptr;
  for (const auto& e : table_)
    if (e.is_finite() && (!best || e > *best)) best = &e;
  if (!best) throw InputError("weighted relation has no finite entry");
  return best->value();
}

std::vector<Tuple> WeightedRelation::feasible_tuples() const {
  std::vector<Tuple> out;
  for (std::size_t i = 0; i < table_.size(); ++i)
    if (table_[i].is_finite()) out.push_back(tuple_at(i, arity_, domain_size_));
  return out;
}

WeightedRelation crisp_relation(int arity, int domain_size, const std::vector<Tuple>& tuples) {
  WeightedRelation r(arity, domain_size, ExtRat::infinity());
  for (const auto& t : tuples) r.set(t, ExtRat(0));
  return r;
}

WeightedRelation constant_relation(int domain_size, int a) { return crisp_relation(1, domain_size, {{a}}); }

WeightedRelation equality_relation(int domain_size) {
  std::vector<Tuple> diag;
  for (int a = 0; a < domain_size; ++a) diag.push_back({a, a});
  return crisp_relation(2, domain_size, diag);
}

Instance::Instance(int num_vars, int domain_size) : num_vars_(num_vars), domain_size_(domain_size) {
  if (num_vars < 0) throw InputError("negative variable count");
  if (domain_size < 1) throw InputError("domain size must be positive");
}

int Instance::add_relation(WeightedRelation rel, std::string name) {
  if (rel.domain_size() != domain_size_) throw InputError("relation domain does not match the instance");
  if (name.empty()) {
    int suffix = int(relations_.size());
    do name = "r" + std::to_string(suffix++);
    while (find_relation(name));
  }
  if (find_relation(name)) throw InputError("duplicate relation name '" + name + "'");
  relations_.push_back(std::move(rel));
  names_.push_back(std::move(name));
  return int(relations_.size()) - 1;
}

int Instance::intern_relation(const WeightedRelation& rel, const std::string& name) {
  for (std::size_t i = 0; i < relations_.size(); ++i)
    if (relations_[i] == rel) return int(i);
  return add_relation(rel, name);
}

std::optional<int> Instance::find_relation(const std::string& name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return int(i);
  return std::nullopt;
}

void Instance::add_constraint(int relation, std::vector<int> scope, std::int64_t multiplicity) {
  if (relation < 0 || relation >= int(relations_.size())) throw InputError("constraint names an unknown relation");
  if (int(scope.size()) != relations_[relation].arity())
    throw InputError("constraint scope length does not match relation arity");
  for (int v : scope)
    if (v < 0 || v >= num_vars_) throw InputError("constraint scope index out of range");
  if (multiplicity < 1) throw InputError("constraint multiplicity must be positive");
  constraints_.push_back({relation, std::move(scope), multiplicity});
}

Instance Instance::expanded() const {
  Instance out = *this;
  out.constraints_.clear();
  for (const auto& c : constraints_)
    for (std::int64_t i = 0; i < c.multiplicity; ++i) out.constraints_.push_back({c.relation, c.scope, 1});
  return out;
}

ExtRat evaluate(const Instance& instance, std::span<const int> assignment) {
  if (int(assignment.size()) != instance.num_vars()) throw InputError("assignment length does not match num_vars");
  for (int v : assignment)
    if (v < 0 || v >= instance.domain_size()) throw InputError("assignment value outside the domain");
  Rational sum;
  Tuple buf;
  for (const auto& c : instance.constraints()) {
    buf.resize(c.scope.size());
    for (std::size_t i = 0; i < c.scope.size(); ++i) buf[i] = assignment[c.scope[i]];
    const ExtRat& v = instance.relation_of(c).at(buf);
    if (v.is_inf()) return ExtRat::infinity();
    if (c.multiplicity == 1)
      sum += v.value();
    else
      sum += v.value() * Rational(c.multiplicity);
  }
  return sum;
}

namespace {

// Calls visit(assignment) over D^n in lexicographic order; stops early if visit returns false.
template <typename Visit>
void for_each_assignment(int n, int d, Visit&& visit) {
  Assignment a(n, 0);
  while (true) {
    if (!visit(a)) return;
    int i = n - 1;
    while (i >= 0 && ++a[i] == d) a[i--] = 0;
    if (i < 0) return;
  }
}

}  // namespace

OptResult brute_force_opt(const Instance& instance, std::uint64_t budget) {
  const std::uint64_t total = power(std::uint64_t(instance.domain_size()), instance.num_vars());
  if (total > budget)
    throw ResourceError("brute force needs " + std::to_string(total) + " assignments, budget is " +
                        std::to_string(budget));
  OptResult best{ExtRat::infinity(), std::nullopt};
  for_each_assignment(instance.num_vars(), instance.domain_size(), [&](const Assignment& a) {
    ExtRat v = evaluate(instance, a);
    if (v < best.value) {
      best.value = std::move(v);
      best.witness = a;
    }
    return true;
  });
  return best;
}

WeightedRelation feas_relation(const WeightedRelation& phi) {
  std::vector<ExtRat> t;
  t.reserve(phi.size());
  for (const auto& e : phi.table()) t.push_back(e.is_finite() ? ExtRat(0) : ExtRat::infinity());
  return WeightedRelation(phi.arity(), phi.domain_size(), std::move(t));
}

WeightedRelation opt_relation(const WeightedRelation& phi) {
  const Rational lo = phi.min_finite();
  std::vector<ExtRat> t;
  t.reserve(phi.size());
  for (const auto& e : phi.table()) t.push_back(e.is_finite() && e.value() == lo ? ExtRat(0) : ExtRat::infinity());
  return WeightedRelation(phi.arity(), phi.domain_size(), std::move(t));
}

WeightedRelation express(const Instance& instance, std::span<const int> designated, std::uint64_t budget) {
  const int n = instance.num_vars();
  const int d = instance.domain_size();
  std::vector<char> is_designated(n, 0);
  for (int v : designated) {
    if (v < 0 || v >= n) throw InputError("designated variable out of range");
    if (is_designated[v]) throw InputError("designated variables must be distinct");
    is_designated[v] = 1;
  }
  std::vector<int> aux;
  for (int v = 0; v < n; ++v)
    if (!is_designated[v]) aux.push_back(v);
  const std::uint64_t total = power(std::uint64_t(d), n);
  if (total > budget)
    throw ResourceError("express needs " + std::to_string(total) + " assignments, budget is " + std::to_string(budget));

  const int m = int(designated.size());
  WeightedRelation out(m, d, ExtRat::infinity());
  Assignment full(n, 0);
  for (std::uint64_t ti = 0; ti < out.size(); ++ti) {
    Tuple t = tuple_at(ti, m, d);
    for (int i = 0; i < m; ++i) full[designated[i]] = t[i];
    ExtRat best = ExtRat::infinity();
    for_each_assignment(int(aux.size()), d, [&](const Assignment& a) {
      for (std::size_t i = 0; i < aux.size(); ++i) full[aux[i]] = a[i];
      ExtRat v = evaluate(instance, full);
      if (v < best) best = std::move(v);
      return true;
    });
    out.set(ti, std::move(best));
  }
  return out;
}

}  // namespace vcsp
