#pragma once

#include <vector>

#include "vcsp/core.hpp"

namespace vcsp {

struct ContractionResult {
  Instance instance;
  /// class_of[v] is the quotient variable that original variable v maps to.
  std::vector<int> class_of;
};

/// Merges variables joined by constraints over the crisp equality relation
/// `eq_relation`, drops those constraints and rewrites the remaining scopes.
/// Classes are numbered by their smallest member.
ContractionResult contract_equalities(const Instance& instance, int eq_relation);

/// Lifts a quotient assignment back to the original variables.
Assignment lift_assignment(const ContractionResult& contraction, std::span<const int> quotient_assignment);

struct GadgetResult {
  Instance instance;
  /// Number of copies used by the construction.
  mpz_class copies;
  /// U: for opt gadgets Σ over constraints of (max finite - min finite); for feas gadgets max finite of φ - min φ.
  Rational bound;
  /// δ: least non-zero finite value of normalized φ (opt), or 1/M (feas). Zero when copies = 1 by rule.
  Rational delta;
  /// min φ, subtracted from φ before substitution.
  Rational shift;
  /// Number of replaced constraint occurrences (counting multiplicity).
  std::int64_t replaced = 0;
};

/// Replaces every constraint over opt(φ) by C copies of φ - min φ.
/// When the original instance is satisfiable the optima coincide; a gadget
/// optimum above U + Σ min(φ_i) over the other constraints means the original is infeasible.
GadgetResult opt_gadget(const Instance& instance, const WeightedRelation& phi);

/// Replaces every constraint over feas(φ) by φ - min φ and repeats every other
/// constraint C times; optimal assignments of the result are optimal for the original.
GadgetResult feas_gadget(const Instance& instance, const WeightedRelation& phi);

/// Threshold above which an opt-gadget optimum certifies infeasibility of the original.
Rational opt_gadget_threshold(const Instance& original, const WeightedRelation& phi, const GadgetResult& g);

}  // namespace vcsp
