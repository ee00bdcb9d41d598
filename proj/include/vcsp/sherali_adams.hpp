#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "vcsp/core.hpp"
#include "vcsp/lp.hpp"
#include "vcsp/operation.hpp"

namespace vcsp::sa {

/// A set of variables, sorted ascending without repeats.
using Scope = std::vector<int>;

struct ScopeHash {
  std::size_t operator()(const Scope& s) const noexcept;
};

/// Lexicographic index of σ: X -> D (first scope variable most significant).
/// `values` is indexed by variable.
std::uint64_t assignment_index(const Scope& scope, std::span<const int> values, int domain_size);

/// Positions of `sub` inside `scope`; both sorted, `sub` ⊆ `scope`.
std::vector<int> positions_in(const Scope& sub, const Scope& scope);

/// Marginal of a distribution over D^scope onto the given positions.
std::vector<Rational> marginal(const std::vector<Rational>& dist, int scope_size, const std::vector<int>& positions,
                               int domain_size);

/// The scopes X_i of the relaxation: every constraint's variable set plus every
/// non-empty subset of at most ℓ variables (null constraints), each exactly once.
class ScopeIndex {
 public:
  ScopeIndex(const Instance& instance, int l);

  int domain_size() const { return domain_size_; }
  int level() const { return level_; }
  std::size_t size() const { return scopes_.size(); }
  const std::vector<Scope>& scopes() const { return scopes_; }
  const Scope& scope(std::size_t i) const { return scopes_[i]; }
  std::optional<std::size_t> find(const Scope& scope) const;
  /// Constraint indices whose variable set is scope i.
  const std::vector<int>& constraints_at(std::size_t i) const { return located_[i]; }

  /// Calls f(j, i) for every pair with X_j ⊊ X_i and |X_j| ≤ k, ordered by i then j.
  template <typename F>
  void for_each_pair(int k, F&& f) const {
    Scope sub;
    for (std::size_t i = 0; i < scopes_.size(); ++i) {
      const Scope& x = scopes_[i];
      const int size = int(x.size());
      std::vector<std::size_t> found;
      for (int s = 1; s <= std::min(k, size - 1); ++s) {
        std::vector<int> pick(s);
        for (int t = 0; t < s; ++t) pick[t] = t;
        while (true) {
          sub.resize(s);
          for (int t = 0; t < s; ++t) sub[t] = x[pick[t]];
          if (auto j = find(sub)) found.push_back(*j);
          int t = s - 1;
          while (t >= 0 && pick[t] == size - s + t) --t;
          if (t < 0) break;
          ++pick[t];
          for (int u = t + 1; u < s; ++u) pick[u] = pick[u - 1] + 1;
        }
      }
      std::sort(found.begin(), found.end());
      for (std::size_t j : found) f(j, i);
    }
  }
  std::vector<std::pair<std::size_t, std::size_t>> containment_pairs(int k) const;

 private:
  int domain_size_ = 2;
  int level_ = 0;
  std::vector<Scope> scopes_;
  std::vector<std::vector<int>> located_;
  std::unordered_map<Scope, std::size_t, ScopeHash> lookup_;
};

/// A family of distributions λ_X over assignments X -> D, one per scope.
class SaSolution {
 public:
  SaSolution() = default;
  explicit SaSolution(int domain_size) : domain_size_(domain_size) {}

  int domain_size() const { return domain_size_; }
  std::size_t size() const { return scopes_.size(); }
  const std::vector<Scope>& scopes() const { return scopes_; }
  const std::vector<Rational>& distribution(std::size_t i) const { return dists_[i]; }

  /// Inserts or replaces λ_scope; `dist` is dense over D^|scope|.
  void set(Scope scope, std::vector<Rational> dist);
  const std::vector<Rational>* find(const Scope& scope) const;

 private:
  int domain_size_ = 2;
  std::vector<Scope> scopes_;
  std::vector<std::vector<Rational>> dists_;
  std::unordered_map<Scope, std::size_t, ScopeHash> lookup_;
};

/// Whether σ (indexed over scope i) is feasible for every constraint located at scope i.
bool scope_assignment_feasible(const Instance& instance, const ScopeIndex& index, std::size_t i,
                               std::uint64_t sigma);
/// Σ over constraints located at scope i of multiplicity * φ(σ(x)).
ExtRat scope_assignment_cost(const Instance& instance, const ScopeIndex& index, std::size_t i, std::uint64_t sigma);

struct SaLp {
  ScopeIndex index;
  lp::LinearProgram lp;
  /// LP column of λ_i(σ) is offset[i] + σ.
  std::vector<std::size_t> offset;
};

/// The SA(k,ℓ) linear program. Infeasible λ_i(σ) are kept as columns with upper bound 0.
SaLp build_sa(const Instance& instance, int k, int l);

struct Options {
  lp::Options lp;
};

struct SaResult {
  bool feasible = false;
  ExtRat value = ExtRat::infinity();  ///< optimum of the relaxation, ∞ when infeasible
  SaSolution solution;
  std::int64_t pivots = 0;
};

SaResult solve_sa(const Instance& instance, int k, int l, const Options& options = {});

/// Objective Σ_i Σ_σ λ_i(σ) φ_i(σ) over the scopes of `index` (missing scopes throw InputError).
ExtRat sa_objective(const Instance& instance, const ScopeIndex& index, const SaSolution& lambda);

struct VerifyOptions {
  /// When set, audit only this many containment pairs chosen with `seed`.
  std::optional<std::uint64_t> sample_pairs;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

struct VerifyReport {
  bool feasible = false;
  /// Description of the first violation, empty when feasible.
  std::string violation;
  ExtRat objective;
  std::uint64_t scopes_checked = 0;
  std::uint64_t pairs_checked = 0;
};

/// Exact check of normalization, non-negativity, zero mass on infeasible
/// assignments and marginal consistency for every pair X_j ⊊ X_i, |X_j| ≤ k.
VerifyReport verify_sa_feasible(const Instance& instance, const SaSolution& lambda, int k, int l,
                                const VerifyOptions& options = {});

/// λ^ω_i(σ) = Pr_{f∼ω, σ_1..σ_m∼λ_i}[f(σ_1,…,σ_m) = σ], by full enumeration.
SaSolution symmetrize(const SaSolution& lambda, const FractionalOperation& omega, const Instance& instance,
                      std::uint64_t budget = default_budget());

/// ½(λ + μ), scope by scope.
SaSolution mix_half(const SaSolution& lambda, const SaSolution& mu);

/// Extends an SA(1,1) solution to SA(1,ℓ): scopes absent from λ get the product of unary marginals.
SaSolution extend_width1(const SaSolution& lambda, const Instance& instance, int l);

/// λ putting probability 1 on the restriction of σ to every scope of `index`.
SaSolution integral_solution(const ScopeIndex& index, std::span<const int> sigma);

enum class ExtractStatus { Extracted, Infeasible, NotExtractable };

struct ExtractResult {
  ExtractStatus status = ExtractStatus::NotExtractable;
  ExtRat sa_value = ExtRat::infinity();
  Assignment assignment;  ///< valid when Extracted
  std::string detail;
  int lp_solves = 0;
};

/// Self-reduction: fixes variables in index order to the smallest label that
/// keeps the SA(k,ℓ) optimum, then checks evaluate(σ) equals that optimum.
ExtractResult extract_assignment(const Instance& instance, int k, int l, const Options& options = {});

}  // namespace vcsp::sa
