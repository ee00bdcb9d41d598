#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vcsp/core.hpp"
#include "vcsp/operation.hpp"

namespace vcsp {

/// A finite valued constraint language over {0..domain_size-1}.
struct Language {
  int domain_size = 2;
  std::vector<WeightedRelation> relations;
  std::vector<std::string> names;

  void add(WeightedRelation rel, std::string name = {});
};

/// The relation store of an instance, as a language.
Language language_of(const Instance& instance);
/// Γ plus the constant unary relations C_a for every a ∈ D (skipping ones already present).
Language with_constants(const Language& gamma);
/// Γ[S]: every relation restricted to the sub-domain S, relabelled to 0..|S|-1 in the order given.
Language restrict_language(const Language& gamma, const std::vector<int>& subdomain);

/// f[g_1,…,g_m](x̄) = f(g_1(x̄),…,g_m(x̄)).
Operation compose(const Operation& f, const std::vector<Operation>& gs);

/// m tuples of one relation, fed to an m-ary operation coordinatewise.
struct PolymorphismViolation {
  int relation = 0;
  std::vector<Tuple> block;
  Tuple image;
};

std::optional<PolymorphismViolation> find_polymorphism_violation(const Operation& f, const Language& gamma);
bool is_polymorphism(const Operation& f, const Language& gamma);

/// Idempotent and f(y,x,…,x) = f(x,y,x,…,x) = … = f(x,…,x,y) for all x, y. Needs arity ≥ 3.
bool is_wnu(const Operation& f);
/// Invariant under every permutation of its arguments. Needs arity ≥ 2.
bool is_symmetric(const Operation& f);

struct EnumerationFilter {
  bool idempotent = false;
  bool wnu = false;
  bool symmetric = false;
  /// Cells of the table fixed in advance (index = lexicographic tuple index).
  std::vector<std::optional<int>> fixed;
};

/// Every m-ary polymorphism of Γ passing the filter, in lexicographic table order.
std::vector<Operation> enumerate_polymorphisms(const Language& gamma, int m, const EnumerationFilter& filter = {},
                                               std::uint64_t budget = default_budget());

/// z(φ, x_1,…,x_m) for the dual of the membership system, scaled to integers.
struct FarkasEntry {
  int relation = 0;
  std::vector<Tuple> block;
  std::int64_t z = 0;
};

struct FarkasCertificate {
  int arity = 0;
  std::vector<FarkasEntry> entries;
};

enum class SupportAnswer {
  Yes,
  No,
  /// f does not preserve the feasibility of some relation.
  NotPolymorphism,
  /// Candidate-set mode only: the LP over the candidates found no witness.
  Inconclusive,
};

std::string to_string(SupportAnswer a);

struct SupportResult {
  SupportAnswer answer = SupportAnswer::No;
  std::optional<FractionalOperation> witness;
  std::optional<FarkasCertificate> certificate;
  std::optional<PolymorphismViolation> violation;
  /// Number of columns of the membership LP.
  std::size_t columns = 0;
};

/// Decides f ∈ supp(Γ) for m-ary f through the membership LP over all m-ary
/// polymorphisms (or over a caller-supplied candidate set).
class SupportOracle {
 public:
  SupportOracle(const Language& gamma, int m, std::optional<std::vector<Operation>> candidates = std::nullopt,
                std::uint64_t budget = default_budget());

  SupportResult test(const Operation& f) const;

  int arity() const { return m_; }
  const std::vector<Operation>& columns() const { return columns_; }
  bool candidate_mode() const { return candidate_mode_; }

  struct Block {
    int relation;
    std::vector<Tuple> tuples;
    /// m · avg φ(x_i) = Σ φ(x_i).
    Rational sum;
  };
  const std::vector<Block>& blocks() const { return blocks_; }

 private:
  Language gamma_;
  int m_;
  bool candidate_mode_ = false;
  std::vector<Operation> columns_;
  std::vector<Block> blocks_;
};

SupportResult in_support(const Operation& f, const Language& gamma,
                         std::optional<std::vector<Operation>> candidates = std::nullopt,
                         std::uint64_t budget = default_budget());

/// Exact check of E_{f∼ω} φ(f(x_1..x_m)) ≤ avg φ(x_i) on every block, and that every f in supp(ω) is a polymorphism.
bool is_fractional_polymorphism(const FractionalOperation& omega, const Language& gamma);

/// Checks z ≥ 0 and the strict row for f; with `columns`, also every non-strict row.
bool certificate_is_valid(const FarkasCertificate& z, const Operation& f, const Language& gamma,
                          const std::vector<Operation>* columns = nullptr);

/// Instance on variables v_x, x ∈ D^m (index = lexicographic index of x), with each
/// certificate entry as a constraint of multiplicity z. Projections are optimal; f∘ι is not.
Instance separating_instance(const FarkasCertificate& z, const Operation& f, const Language& gamma);

struct CoreResult {
  /// Surviving original labels, ascending.
  std::vector<int> domain;
  Language core;
  /// Non-bijective unary support members used, in order, over the shrinking domains.
  std::vector<Operation> retractions;
};

CoreResult find_core(const Language& gamma, std::uint64_t budget = default_budget());

struct BwcResult {
  bool satisfied = false;
  std::optional<Operation> f;  ///< ternary WNU in the support
  std::optional<Operation> g;  ///< quaternary WNU in the support, g(y,x,x,x) = f(y,x,x)
  std::size_t ternary_checked = 0;
  std::size_t quaternary_checked = 0;
};

/// Bounded width test on a language that already contains the constants.
BwcResult test_bwc(const Language& gamma, std::uint64_t budget = default_budget());

struct SymArityReport {
  int arity = 0;
  std::optional<Operation> found;
  std::size_t candidates = 0;
};

/// For m = 2..m_max, a symmetric member of supp(Γ) (idempotent candidates tried first) or none.
std::vector<SymArityReport> test_sym(const Language& gamma, int m_max, std::uint64_t budget = default_budget());

}  // namespace vcsp
