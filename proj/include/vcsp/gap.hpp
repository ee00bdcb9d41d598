#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vcsp/algebra.hpp"
#include "vcsp/core.hpp"
#include "vcsp/sherali_adams.hpp"

namespace vcsp::gap {

/// A finite Abelian group on {0..order-1} given by its addition table; 0 is the identity.
class AbelianGroup {
 public:
  /// Z_p.
  static AbelianGroup cyclic(int p);
  /// Direct product; element (a, b) is a * |H| + b.
  static AbelianGroup product(const AbelianGroup& g, const AbelianGroup& h);
  /// Checks closure, identity, inverses, associativity and commutativity.
  AbelianGroup(std::string name, int order, std::vector<int> table);

  int order() const { return order_; }
  const std::string& name() const { return name_; }
  int add(int a, int b) const { return table_[std::size_t(a) * order_ + b]; }
  int neg(int a) const { return neg_[a]; }
  /// Designated non-zero element (1 for cyclic groups, (0,1) for products).
  int generator() const { return g_; }
  void set_generator(int g);

 private:
  std::string name_;
  int order_ = 0;
  std::vector<int> table_;
  std::vector<int> neg_;
  int g_ = 1;
};

/// Parses "Zp" or "ZpxZq" (any number of factors).
AbelianGroup parse_group(const std::string& text);

/// E_{G,r}: crisp relations R^m_a = {x_1+…+x_m = a} for 1 ≤ m ≤ r, a ∈ G, named "R<m>_<a>".
Language make_eqs_language(const AbelianGroup& group, int r);

/// The crisp table {x = y + z + a}.
WeightedRelation shifted_sum_relation(const AbelianGroup& group, int a);

struct ExpressedPair {
  WeightedRelation r0;
  WeightedRelation rg;
};

/// R_0 and R_g obtained by exhaustive minimization over the E_{G,3} gadgets with auxiliaries y', z'.
ExpressedPair express_r0_rg(const AbelianGroup& group);

/// Parameters c_{a,b}, d_{a,b} ∈ {0, g}, stored row-major.
struct TorusParameters {
  std::vector<int> c;
  std::vector<int> d;
  /// c_{0,0} = g, everything else 0.
  static TorusParameters canonical(const AbelianGroup& group, int n);
};

class Torus {
 public:
  /// Throws InputError unless every parameter is 0 or g and Σc - Σd = g.
  Torus(AbelianGroup group, int n, TorusParameters params);

  int n() const { return n_; }
  const AbelianGroup& group() const { return group_; }
  const TorusParameters& parameters() const { return params_; }
  int num_vars() const { return 3 * n_ * n_; }

  int x(int a, int b) const { return wrap(a) * n_ + wrap(b); }
  int y(int a, int b) const { return n_ * n_ + wrap(a) * n_ + wrap(b); }
  int z(int a, int b) const { return 2 * n_ * n_ + wrap(a) * n_ + wrap(b); }
  int c(int a, int b) const { return params_.c[std::size_t(wrap(a)) * n_ + wrap(b)]; }
  int d(int a, int b) const { return params_.d[std::size_t(wrap(a)) * n_ + wrap(b)]; }
  std::string var_name(int v) const;

  /// y_{a,b+1} = y_{a,b} + x_{a,b} + c_{a,b} and z_{a+1,b} = z_{a,b} + x_{a,b} + d_{a,b},
  /// as R_c(y_{a,b+1}, y_{a,b}, x_{a,b}) and R_d(z_{a+1,b}, z_{a,b}, x_{a,b}).
  const Instance& instance() const { return instance_; }
  /// The same system with every constraint replaced by its E_{G,3} gadget (two fresh auxiliaries each).
  Instance gadget_instance() const;

 private:
  int wrap(int a) const { return ((a % n_) + n_) % n_; }

  AbelianGroup group_;
  int n_;
  TorusParameters params_;
  Instance instance_;
};

/// X̄ for a variable set X: the vertex set S and all variables on and between its vertices.
struct Closure {
  /// in_s[a*n+b] iff x_{a,b} ∈ S.
  std::vector<bool> in_s;
  /// X̄, sorted.
  std::vector<int> vars;
  int vertices = 0;    ///< C
  int horizontal = 0;  ///< H
  int vertical = 0;    ///< V
  /// |G|^{C+H+V}.
  std::uint64_t predicted_size(const AbelianGroup& g) const;
};

/// Closed form: fill every component of the untouched vertices except the unique cross-containing one.
/// Needs 2|X| < n.
Closure closure_xbar(const std::vector<int>& x, const Torus& torus);

/// Var(T[S]) for an arbitrary vertex set.
std::vector<int> vars_of_vertex_set(const std::vector<bool>& in_s, const Torus& torus);
/// Whether S excludes a cross; whether S contains a hole.
bool excludes_cross(const std::vector<bool>& in_s, int n);
bool contains_hole(const std::vector<bool>& in_s, int n);

/// N: assignments to X̄ (in Closure::vars order) satisfying every constraint inside X̄,
/// generated from free choices and forward propagation. Throws ResourceError above `budget`.
std::vector<std::vector<int>> enumerate_n(const Closure& closure, const Torus& torus,
                                          std::uint64_t budget = default_budget());

/// λ_X(σ) = Pr_{σ̄ uniform on N}[σ̄|X = σ], dense over G^|X| for sorted X.
std::vector<Rational> gap_lambda(const std::vector<int>& x, const Torus& torus);

/// λ on every scope of the SA(k,k) relaxation of the torus instance.
sa::SaSolution build_gap_solution(const Torus& torus, int k, unsigned threads = 1);

}  // namespace vcsp::gap
