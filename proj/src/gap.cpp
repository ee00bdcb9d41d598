#include "vcsp/gap.hpp"

#include <algorithm>
#include <deque>
#include <thread>

#include "vcsp/error.hpp"

namespace vcsp::gap {

AbelianGroup::AbelianGroup(std::string name, int order, std::vector<int> table)
    : name_(std::move(name)), order_(order), table_(std::move(table)) {
  if (order < 2) throw InputError("group must be non-trivial");
  if (table_.size() != std::size_t(order) * order) throw InputError("group table has the wrong size");
  for (int v : table_)
    if (v < 0 || v >= order) throw InputError("group table leaves the carrier");
  for (int a = 0; a < order; ++a)
    if (add(0, a) != a || add(a, 0) != a) throw InputError("element 0 is not the identity");
  neg_.assign(order, -1);
  for (int a = 0; a < order; ++a)
    for (int b = 0; b < order; ++b)
      if (add(a, b) == 0) neg_[a] = b;
  for (int a = 0; a < order; ++a) {
    if (neg_[a] < 0) throw InputError("group element without an inverse");
    for (int b = 0; b < order; ++b) {
      if (add(a, b) != add(b, a)) throw InputError("group is not commutative");
      for (int c = 0; c < order; ++c)
        if (add(add(a, b), c) != add(a, add(b, c))) throw InputError("group is not associative");
    }
  }
}

void AbelianGroup::set_generator(int g) {
  if (g <= 0 || g >= order_) throw InputError("designated element must be non-zero");
  g_ = g;
}

AbelianGroup AbelianGroup::cyclic(int p) {
  if (p < 2) throw InputError("cyclic group order must be at least 2");
  std::vector<int> t(std::size_t(p) * p);
  for (int a = 0; a < p; ++a)
    for (int b = 0; b < p; ++b) t[std::size_t(a) * p + b] = (a + b) % p;
  return AbelianGroup("Z" + std::to_string(p), p, std::move(t));
}

AbelianGroup AbelianGroup::product(const AbelianGroup& g, const AbelianGroup& h) {
  const int p = g.order(), q = h.order();
  const int order = p * q;
  std::vector<int> t(std::size_t(order) * order);
  for (int a = 0; a < order; ++a)
    for (int b = 0; b < order; ++b)
      t[std::size_t(a) * order + b] = g.add(a / q, b / q) * q + h.add(a % q, b % q);
  AbelianGroup out(g.name() + "x" + h.name(), order, std::move(t));
  out.set_generator(h.generator());
  return out;
}

AbelianGroup parse_group(const std::string& text) {
  std::vector<AbelianGroup> factors;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('x', pos);
    std::string part = text.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
    if (part.size() < 2 || part[0] != 'Z') throw InputError("group must look like Zp or ZpxZq, got '" + text + "'");
    int p = 0;
    try {
      std::size_t used = 0;
      p = std::stoi(part.substr(1), &used);
      if (used != part.size() - 1) throw InputError("");
    } catch (const std::exception&) {
      throw InputError("bad group factor '" + part + "'");
    }
    factors.push_back(AbelianGroup::cyclic(p));
    if (end == std::string::npos) break;
    pos = end + 1;
  }
  AbelianGroup g = factors.front();
  for (std::size_t i = 1; i < factors.size(); ++i) g = AbelianGroup::product(g, factors[i]);
  return g;
}

Language make_eqs_language(const AbelianGroup& group, int r) {
  if (r < 1) throw InputError("equation language needs r >= 1");
  const int q = group.order();
  Language lang;
  lang.domain_size = q;
  for (int m = 1; m <= r; ++m)
    for (int a = 0; a < q; ++a) {
      WeightedRelation rel(m, q, ExtRat::infinity());
      for (std::uint64_t i = 0; i < rel.size(); ++i) {
        Tuple t = tuple_at(i, m, q);
        int sum = 0;
        for (int v : t) sum = group.add(sum, v);
        if (sum == a) rel.set(std::size_t(i), ExtRat(0));
      }
      lang.add(std::move(rel), "R" + std::to_string(m) + "_" + std::to_string(a));
    }
  return lang;
}

WeightedRelation shifted_sum_relation(const AbelianGroup& group, int a) {
  const int q = group.order();
  WeightedRelation rel(3, q, ExtRat::infinity());
  for (int y = 0; y < q; ++y)
    for (int z = 0; z < q; ++z) rel.set(Tuple{group.add(group.add(y, z), a), y, z}, ExtRat(0));
  return rel;
}

namespace {

// x, y, z, y', z' with R^3_a(x, y', z') + R^2_0(y', y) + R^2_0(z', z).
Instance r_gadget(const AbelianGroup& group, const Language& e3, int a) {
  Instance inst(5, group.order());
  const int r3 = inst.add_relation(e3.relations[2 * group.order() + a], e3.names[2 * group.order() + a]);
  const int r2 = inst.add_relation(e3.relations[group.order()], e3.names[group.order()]);
  inst.add_constraint(r3, {0, 3, 4});
  inst.add_constraint(r2, {3, 1});
  inst.add_constraint(r2, {4, 2});
  return inst;
}

}  // namespace

ExpressedPair express_r0_rg(const AbelianGroup& group) {
  const Language e3 = make_eqs_language(group, 3);
  const std::vector<int> designated{0, 1, 2};
  return {express(r_gadget(group, e3, 0), designated), express(r_gadget(group, e3, group.generator()), designated)};
}

TorusParameters TorusParameters::canonical(const AbelianGroup& group, int n) {
  TorusParameters p;
  p.c.assign(std::size_t(n) * n, 0);
  p.d.assign(std::size_t(n) * n, 0);
  p.c[0] = group.generator();
  return p;
}

Torus::Torus(AbelianGroup group, int n, TorusParameters params)
    : group_(std::move(group)), n_(n), params_(std::move(params)) {
  if (n < 1) throw InputError("torus size must be at least 1");
  const std::size_t cells = std::size_t(n) * n;
  if (params_.c.size() != cells || params_.d.size() != cells) throw InputError("torus parameter tables have the wrong size");
  const int g = group_.generator();
  int diff = 0;
  for (std::size_t i = 0; i < cells; ++i) {
    if ((params_.c[i] != 0 && params_.c[i] != g) || (params_.d[i] != 0 && params_.d[i] != g))
      throw InputError("torus parameters must be 0 or g");
    diff = group_.add(diff, params_.c[i]);
    diff = group_.add(diff, group_.neg(params_.d[i]));
  }
  if (diff != g) throw InputError("torus parameters must satisfy sum(c) - sum(d) = g");

  instance_ = Instance(num_vars(), group_.order());
  std::vector<int> rel_id(group_.order(), -1);
  auto rel = [&](int a) {
    if (rel_id[a] < 0) rel_id[a] = instance_.add_relation(shifted_sum_relation(group_, a), "R_" + std::to_string(a));
    return rel_id[a];
  };
  rel(0);
  rel(g);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) instance_.add_constraint(rel(c(a, b)), {y(a, b + 1), y(a, b), x(a, b)});
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) instance_.add_constraint(rel(d(a, b)), {z(a + 1, b), z(a, b), x(a, b)});
}

std::string Torus::var_name(int v) const {
  const int nn = n_ * n_;
  const char kind = "xyz"[v / nn];
  const int r = v % nn;
  return std::string(1, kind) + "_" + std::to_string(r / n_) + "_" + std::to_string(r % n_);
}

Instance Torus::gadget_instance() const {
  const Language e3 = make_eqs_language(group_, 3);
  const int q = group_.order();
  const auto& base = instance_;
  Instance out(base.num_vars() + 2 * int(base.constraints().size()), q);
  std::vector<int> ids(e3.relations.size());
  for (std::size_t r = 0; r < e3.relations.size(); ++r) ids[r] = out.add_relation(e3.relations[r], e3.names[r]);
  int fresh = base.num_vars();
  for (const auto& con : base.constraints()) {
    // The relation is {x = y + z + a}; recover a from the tuple (a, 0, 0).
    const auto& rel = base.relation_of(con);
    int a = 0;
    while (!rel.feasible(Tuple{a, 0, 0})) ++a;
    const int yp = fresh++, zp = fresh++;
    out.add_constraint(ids[2 * q + a], {con.scope[0], yp, zp});
    out.add_constraint(ids[q], {yp, con.scope[1]});
    out.add_constraint(ids[q], {zp, con.scope[2]});
  }
  return out;
}

std::uint64_t Closure::predicted_size(const AbelianGroup& g) const {
  return power(g.order(), vertices + horizontal + vertical);
}

std::vector<int> vars_of_vertex_set(const std::vector<bool>& in_s, const Torus& t) {
  const int n = t.n();
  std::vector<int> vars;
  auto in = [&](int a, int b) { return bool(in_s[std::size_t(((a % n) + n) % n) * n + ((b % n) + n) % n]); };
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (!in(a, b)) continue;
      vars.push_back(t.x(a, b));
      if (in(a, b + 1)) vars.push_back(t.y(a, b));
      if (in(a + 1, b)) vars.push_back(t.z(a, b));
    }
  std::sort(vars.begin(), vars.end());
  return vars;
}

namespace {

// Components of the vertices not in `in_s`, 4-neighbour torus adjacency; -1 for vertices of S.
std::vector<int> complement_components(const std::vector<bool>& in_s, int n, int& count) {
  std::vector<int> comp(std::size_t(n) * n, -1);
  count = 0;
  for (int start = 0; start < n * n; ++start) {
    if (in_s[start] || comp[start] >= 0) continue;
    std::deque<int> queue{start};
    comp[start] = count;
    while (!queue.empty()) {
      const int v = queue.front();
      queue.pop_front();
      const int a = v / n, b = v % n;
      const int nbrs[4] = {((a + 1) % n) * n + b, ((a + n - 1) % n) * n + b, a * n + (b + 1) % n,
                           a * n + (b + n - 1) % n};
      for (int w : nbrs)
        if (!in_s[w] && comp[w] < 0) {
          comp[w] = count;
          queue.push_back(w);
        }
    }
    ++count;
  }
  return comp;
}

bool component_has_cross(const std::vector<int>& comp, int n, int which) {
  bool row = false, col = false;
  for (int a = 0; a < n && !row; ++a) {
    bool full = true;
    for (int b = 0; b < n && full; ++b) full = comp[std::size_t(a) * n + b] == which;
    row = full;
  }
  for (int b = 0; b < n && !col; ++b) {
    bool full = true;
    for (int a = 0; a < n && full; ++a) full = comp[std::size_t(a) * n + b] == which;
    col = full;
  }
  return row && col;
}

// Affine expression over G: Σ free variables + constant.
struct Expr {
  std::vector<int> free;
  int constant = 0;
};

}  // namespace

bool excludes_cross(const std::vector<bool>& in_s, int n) {
  bool row = false, col = false;
  for (int a = 0; a < n && !row; ++a) {
    bool empty = true;
    for (int b = 0; b < n && empty; ++b) empty = !in_s[std::size_t(a) * n + b];
    row = empty;
  }
  for (int b = 0; b < n && !col; ++b) {
    bool empty = true;
    for (int a = 0; a < n && empty; ++a) empty = !in_s[std::size_t(a) * n + b];
    col = empty;
  }
  return row && col;
}

bool contains_hole(const std::vector<bool>& in_s, int n) {
  int count = 0;
  complement_components(in_s, n, count);
  return count > 1;
}

Closure closure_xbar(const std::vector<int>& x, const Torus& torus) {
  const int n = torus.n();
  const int nn = n * n;
  std::vector<int> vars = x;
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  std::vector<bool> touched(nn, false);
  for (int v : vars) {
    if (v < 0 || v >= torus.num_vars()) throw InputError("variable outside the torus");
    const int r = v % nn, a = r / n, b = r % n;
    touched[r] = true;
    if (v / nn == 1) touched[torus.x(a, b + 1)] = true;
    if (v / nn == 2) touched[torus.x(a + 1, b)] = true;
  }
  // fewer than n touched vertices leave a free row and column, and any two crosses meet
  if (std::count(touched.begin(), touched.end(), true) >= n) throw InputError("closure needs fewer than n touched vertices");
  int count = 0;
  const std::vector<int> comp = complement_components(touched, n, count);
  int cross = -1;
  for (int c = 0; c < count; ++c)
    if (component_has_cross(comp, n, c)) {
      if (cross >= 0) throw std::logic_error("two cross-containing components in the torus complement");
      cross = c;
    }
  if (cross < 0) throw std::logic_error("no cross-containing component in the torus complement");

  Closure out;
  out.in_s.assign(nn, false);
  for (int v = 0; v < nn; ++v) out.in_s[v] = comp[v] != cross;
  out.vars = vars_of_vertex_set(out.in_s, torus);
  auto in = [&](int a, int b) { return bool(out.in_s[std::size_t(((a % n) + n) % n) * n + ((b % n) + n) % n]); };
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (!in(a, b)) continue;
      ++out.vertices;
      // y_{a,b} starts a horizontal run when y_{a,b-1} is absent.
      if (in(a, b + 1) && !(in(a, b - 1))) ++out.horizontal;
      if (in(a + 1, b) && !(in(a - 1, b))) ++out.vertical;
    }
  return out;
}

namespace {

Expr expression_of(int v, const Closure& cl, const Torus& t) {
  const int n = t.n(), nn = n * n;
  const int kind = v / nn, r = v % nn, a = r / n, b = r % n;
  auto in = [&](int p, int q) { return bool(cl.in_s[std::size_t(((p % n) + n) % n) * n + ((q % n) + n) % n]); };
  const auto& g = t.group();
  Expr e;
  if (kind == 0) {
    e.free.push_back(v);
    return e;
  }
  if (kind == 1) {
    // Walk back to the run start; y_{a,s} ∈ X̄ iff x_{a,s}, x_{a,s+1} ∈ S.
    int s = b, steps = 0;
    while (in(a, s - 1) && in(a, s)) {
      --s;
      if (++steps > n) throw std::logic_error("horizontal run wraps the torus");
    }
    e.free.push_back(t.y(a, s));
    for (int u = s; u < s + steps; ++u) {
      e.free.push_back(t.x(a, u));
      e.constant = g.add(e.constant, t.c(a, u));
    }
    return e;
  }
  int s = a, steps = 0;
  while (in(s - 1, b) && in(s, b)) {
    --s;
    if (++steps > n) throw std::logic_error("vertical run wraps the torus");
  }
  e.free.push_back(t.z(s, b));
  for (int u = s; u < s + steps; ++u) {
    e.free.push_back(t.x(u, b));
    e.constant = g.add(e.constant, t.d(u, b));
  }
  return e;
}

// Enumerates all assignments of `free` (odometer) and calls visit(values-by-free-position).
template <typename Visit>
void for_each_free(std::size_t count, int q, Visit&& visit) {
  std::vector<int> vals(count, 0);
  while (true) {
    visit(vals);
    int i = int(count) - 1;
    while (i >= 0 && ++vals[i] == q) vals[i--] = 0;
    if (i < 0) return;
  }
}

}  // namespace

std::vector<std::vector<int>> enumerate_n(const Closure& closure, const Torus& torus, std::uint64_t budget) {
  const std::uint64_t size = closure.predicted_size(torus.group());
  if (size > budget) throw ResourceError("N is larger than the budget");
  const auto& g = torus.group();
  std::vector<Expr> exprs;
  std::vector<int> free;
  for (int v : closure.vars) {
    exprs.push_back(expression_of(v, closure, torus));
    for (int f : exprs.back().free) free.push_back(f);
  }
  std::sort(free.begin(), free.end());
  free.erase(std::unique(free.begin(), free.end()), free.end());
  std::vector<std::vector<int>> where(exprs.size());
  for (std::size_t i = 0; i < exprs.size(); ++i)
    for (int f : exprs[i].free) where[i].push_back(int(std::lower_bound(free.begin(), free.end(), f) - free.begin()));

  // Constraints entirely inside X̄, with positions in closure.vars.
  std::vector<std::pair<int, std::vector<int>>> inside;
  for (const auto& c : torus.instance().constraints()) {
    std::vector<int> pos;
    for (int v : c.scope) {
      auto it = std::lower_bound(closure.vars.begin(), closure.vars.end(), v);
      if (it == closure.vars.end() || *it != v) break;
      pos.push_back(int(it - closure.vars.begin()));
    }
    if (pos.size() == c.scope.size()) inside.emplace_back(c.relation, std::move(pos));
  }

  std::vector<std::vector<int>> out;
  Tuple args;
  for_each_free(free.size(), g.order(), [&](const std::vector<int>& vals) {
    std::vector<int> sigma(exprs.size());
    for (std::size_t i = 0; i < exprs.size(); ++i) {
      int s = exprs[i].constant;
      for (int p : where[i]) s = g.add(s, vals[p]);
      sigma[i] = s;
    }
    for (const auto& [rel, pos] : inside) {
      args.resize(pos.size());
      for (std::size_t t = 0; t < pos.size(); ++t) args[t] = sigma[pos[t]];
      if (!torus.instance().relation(rel).feasible(args)) throw std::logic_error("propagated assignment violates a constraint");
    }
    out.push_back(std::move(sigma));
  });
  return out;
}

std::vector<Rational> gap_lambda(const std::vector<int>& x, const Torus& torus) {
  std::vector<int> scope = x;
  std::sort(scope.begin(), scope.end());
  scope.erase(std::unique(scope.begin(), scope.end()), scope.end());
  const Closure cl = closure_xbar(scope, torus);
  const auto& g = torus.group();
  const int q = g.order();
  std::vector<Expr> exprs;
  std::vector<int> free;
  for (int v : scope) {
    exprs.push_back(expression_of(v, cl, torus));
    for (int f : exprs.back().free) free.push_back(f);
  }
  std::sort(free.begin(), free.end());
  free.erase(std::unique(free.begin(), free.end()), free.end());
  std::vector<std::vector<int>> where(exprs.size());
  for (std::size_t i = 0; i < exprs.size(); ++i)
    for (int f : exprs[i].free) where[i].push_back(int(std::lower_bound(free.begin(), free.end(), f) - free.begin()));

  // Free choices that do not reach X factor out of the uniform distribution on N.
  std::vector<std::int64_t> counts(power(q, int(scope.size())), 0);
  for_each_free(free.size(), q, [&](const std::vector<int>& vals) {
    std::uint64_t idx = 0;
    for (std::size_t i = 0; i < exprs.size(); ++i) {
      int s = exprs[i].constant;
      for (int p : where[i]) s = g.add(s, vals[p]);
      idx = idx * q + s;
    }
    ++counts[idx];
  });
  const std::int64_t total = std::int64_t(power(q, int(free.size())));
  std::vector<Rational> dist;
  dist.reserve(counts.size());
  for (auto c : counts) dist.emplace_back(c, total);
  return dist;
}

sa::SaSolution build_gap_solution(const Torus& torus, int k, unsigned threads) {
  if (k < 1) throw InputError("gap solution needs k >= 1");
  if (torus.n() <= 2 * k) throw InputError("gap solution needs n > 2k");
  sa::ScopeIndex index(torus.instance(), k);
  std::vector<std::vector<Rational>> dists(index.size());
  threads = std::max(1u, threads);
  auto work = [&](unsigned w) {
    for (std::size_t i = w; i < index.size(); i += threads) dists[i] = gap_lambda(index.scope(i), torus);
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  sa::SaSolution out(torus.group().order());
  for (std::size_t i = 0; i < index.size(); ++i) out.set(index.scope(i), std::move(dists[i]));
  return out;
}

}  // namespace vcsp::gap
