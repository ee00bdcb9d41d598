#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vcsp/rational.hpp"

namespace vcsp {

using Tuple = std::vector<int>;

/// Number of tuples in D^arity; throws ResourceError if it does not fit in 63 bits.
std::uint64_t power(std::uint64_t base, int exponent);

/// Lexicographic index of `t` in D^|t|, first coordinate most significant.
std::uint64_t tuple_index(std::span<const int> t, int domain_size);
/// Inverse of tuple_index.
Tuple tuple_at(std::uint64_t index, int arity, int domain_size);

/// Default enumeration budget: 2^26 assignments, overridable through VCSP_SA_BUDGET.
std::uint64_t default_budget();

/// A total map D^arity -> Q ∪ {∞}, stored densely in lexicographic tuple order.
class WeightedRelation {
 public:
  WeightedRelation() = default;
  /// Constant relation (every entry equal to `fill`).
  WeightedRelation(int arity, int domain_size, ExtRat fill = ExtRat(0));
  WeightedRelation(int arity, int domain_size, std::vector<ExtRat> table);

  int arity() const { return arity_; }
  int domain_size() const { return domain_size_; }
  std::size_t size() const { return table_.size(); }

  const ExtRat& at(std::span<const int> t) const { return table_[tuple_index(t, domain_size_)]; }
  const ExtRat& operator[](std::size_t index) const { return table_[index]; }
  void set(std::span<const int> t, ExtRat value);
  void set(std::size_t index, ExtRat value) { table_.at(index) = std::move(value); }
  const std::vector<ExtRat>& table() const { return table_; }

  bool feasible(std::span<const int> t) const { return at(t).is_finite(); }
  bool is_crisp() const;
  bool is_finite_valued() const;
  bool has_finite_entry() const;
  /// Least finite entry; throws InputError if every entry is ∞.
  Rational min_finite() const;
  /// Largest finite entry; throws InputError if every entry is ∞.
  Rational max_finite() const;
  /// Feasible tuples in lexicographic order.
  std::vector<Tuple> feasible_tuples() const;

  friend bool operator==(const WeightedRelation&, const WeightedRelation&) = default;

 private:
  int arity_ = 0;
  int domain_size_ = 2;
  std::vector<ExtRat> table_;
};

/// Crisp relation with the given feasible tuples.
WeightedRelation crisp_relation(int arity, int domain_size, const std::vector<Tuple>& tuples);
/// The constant unary relation {(a)}.
WeightedRelation constant_relation(int domain_size, int a);
/// The crisp binary equality relation.
WeightedRelation equality_relation(int domain_size);

struct Constraint {
  int relation = 0;
  std::vector<int> scope;
  /// Number of copies of this constraint in the multiset; evaluates as repetition.
  std::int64_t multiplicity = 1;

  friend bool operator==(const Constraint&, const Constraint&) = default;
};

/// A VCSP instance: variables 0..num_vars-1 over domain {0..domain_size-1}
/// with a multiset of constraints drawn from a relation store.
class Instance {
 public:
  Instance() = default;
  Instance(int num_vars, int domain_size);

  int num_vars() const { return num_vars_; }
  int domain_size() const { return domain_size_; }
  const std::vector<WeightedRelation>& relations() const { return relations_; }
  const std::vector<std::string>& relation_names() const { return names_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  const WeightedRelation& relation(int id) const { return relations_.at(id); }
  const WeightedRelation& relation_of(const Constraint& c) const { return relations_[c.relation]; }

  /// Adds a relation and returns its id. Names default to `r<id>` and must be unique.
  int add_relation(WeightedRelation rel, std::string name = {});
  /// Id of an existing relation equal to `rel`, adding it if absent.
  int intern_relation(const WeightedRelation& rel, const std::string& name = {});
  std::optional<int> find_relation(const std::string& name) const;
  void add_constraint(int relation, std::vector<int> scope, std::int64_t multiplicity = 1);

  /// Copy with every multiplicity expanded into repeated unit constraints.
  Instance expanded() const;

  friend bool operator==(const Instance&, const Instance&) = default;

 private:
  int num_vars_ = 0;
  int domain_size_ = 2;
  std::vector<WeightedRelation> relations_;
  std::vector<std::string> names_;
  std::vector<Constraint> constraints_;
};

using Assignment = std::vector<int>;

/// Σ φ_i(σ(x_i)) with ∞ absorbing.
ExtRat evaluate(const Instance& instance, std::span<const int> assignment);

struct OptResult {
  ExtRat value;
  std::optional<Assignment> witness;  ///< lexicographically smallest optimum; absent iff value is ∞
};

/// Exact optimum by exhaustive enumeration of all |D|^n assignments.
OptResult brute_force_opt(const Instance& instance, std::uint64_t budget = default_budget());

WeightedRelation feas_relation(const WeightedRelation& phi);
/// Crisp relation of the tuples attaining min φ. Throws InputError if φ is all ∞.
WeightedRelation opt_relation(const WeightedRelation& phi);

/// The relation expressed by `instance` on the designated variables:
/// φ(t) = min over the remaining variables of φ_I with the designated ones fixed to t.
WeightedRelation express(const Instance& instance, std::span<const int> designated,
                         std::uint64_t budget = default_budget());

}  // namespace vcsp
