#include "vcsp/sherali_adams.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <random>
#include <set>
#include <limits>
#include <thread>

#include "vcsp/error.hpp"

namespace vcsp::sa {

std::size_t ScopeHash::operator()(const Scope& s) const noexcept {
  std::size_t h = 0xcbf29ce484222325ull;
  for (int v : s) {
    h ^= std::size_t(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return h;
}

std::uint64_t assignment_index(const Scope& scope, std::span<const int> values, int domain_size) {
  std::uint64_t idx = 0;
  for (int v : scope) idx = idx * domain_size + values[v];
  return idx;
}

std::vector<int> positions_in(const Scope& sub, const Scope& scope) {
  std::vector<int> pos;
  pos.reserve(sub.size());
  std::size_t p = 0;
  for (int v : sub) {
    while (p < scope.size() && scope[p] < v) ++p;
    if (p == scope.size() || scope[p] != v) throw InputError("scope is not contained in its superset");
    pos.push_back(int(p));
  }
  return pos;
}

std::vector<Rational> marginal(const std::vector<Rational>& dist, int scope_size, const std::vector<int>& positions,
                               int domain_size) {
  std::vector<Rational> out(power(domain_size, int(positions.size())));
  Tuple t(scope_size, 0);
  for (std::size_t s = 0; s < dist.size(); ++s) {
    if (!dist[s].is_zero()) {
      std::uint64_t idx = 0;
      for (int p : positions) idx = idx * domain_size + t[p];
      out[idx] += dist[s];
    }
    int c = scope_size - 1;
    while (c >= 0 && ++t[c] == domain_size) t[c--] = 0;
  }
  return out;
}

namespace {

Scope scope_set(const std::vector<int>& vars) {
  Scope s(vars);
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

// Calls f(subset) for every subset of {0..n-1} with 1..l elements, in lexicographic order per size.
template <typename F>
void for_each_small_subset(int n, int l, F&& f) {
  for (int s = 1; s <= std::min(l, n); ++s) {
    Scope pick(s);
    for (int t = 0; t < s; ++t) pick[t] = t;
    while (true) {
      f(pick);
      int t = s - 1;
      while (t >= 0 && pick[t] == n - s + t) --t;
      if (t < 0) break;
      ++pick[t];
      for (int u = t + 1; u < s; ++u) pick[u] = pick[u - 1] + 1;
    }
  }
}

void check_levels(const Instance& instance, int k, int l) {
  if (k < 1 || k > l) throw InputError("SA levels need 1 <= k <= l");
  if (l > instance.num_vars()) throw InputError("SA level l exceeds the number of variables");
}

}  // namespace

ScopeIndex::ScopeIndex(const Instance& instance, int l) : domain_size_(instance.domain_size()), level_(l) {
  if (l < 1) throw InputError("scope level must be positive");
  auto add = [&](const Scope& s) {
    auto [it, inserted] = lookup_.emplace(s, scopes_.size());
    if (inserted) scopes_.push_back(s);
    return it->second;
  };
  for_each_small_subset(instance.num_vars(), l, add);
  // Constraint scopes larger than l follow, in constraint order.
  located_.assign(scopes_.size(), {});
  for (std::size_t c = 0; c < instance.constraints().size(); ++c) {
    Scope s = scope_set(instance.constraints()[c].scope);
    std::size_t i = add(s);
    if (i >= located_.size()) located_.resize(i + 1);
    located_[i].push_back(int(c));
  }
}

std::optional<std::size_t> ScopeIndex::find(const Scope& scope) const {
  auto it = lookup_.find(scope);
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::pair<std::size_t, std::size_t>> ScopeIndex::containment_pairs(int k) const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for_each_pair(k, [&](std::size_t j, std::size_t i) { out.emplace_back(j, i); });
  return out;
}

void SaSolution::set(Scope scope, std::vector<Rational> dist) {
  if (dist.size() != power(domain_size_, int(scope.size())))
    throw InputError("distribution size does not match its scope");
  auto it = lookup_.find(scope);
  if (it != lookup_.end()) {
    dists_[it->second] = std::move(dist);
    return;
  }
  lookup_.emplace(scope, scopes_.size());
  scopes_.push_back(std::move(scope));
  dists_.push_back(std::move(dist));
}

const std::vector<Rational>* SaSolution::find(const Scope& scope) const {
  auto it = lookup_.find(scope);
  return it == lookup_.end() ? nullptr : &dists_[it->second];
}

namespace {

// Evaluates the constraints located at scope i under σ; stops at the first ∞ when only feasibility matters.
ExtRat located_cost(const Instance& instance, const ScopeIndex& index, std::size_t i, std::uint64_t sigma,
                    bool feasibility_only) {
  const Scope& scope = index.scope(i);
  const int d = instance.domain_size();
  Tuple local = tuple_at(sigma, int(scope.size()), d);
  Rational sum;
  Tuple args;
  for (int ci : index.constraints_at(i)) {
    const Constraint& c = instance.constraints()[ci];
    args.resize(c.scope.size());
    for (std::size_t t = 0; t < c.scope.size(); ++t) {
      auto p = std::lower_bound(scope.begin(), scope.end(), c.scope[t]) - scope.begin();
      args[t] = local[p];
    }
    const ExtRat& v = instance.relation_of(c).at(args);
    if (v.is_inf()) return ExtRat::infinity();
    if (!feasibility_only) sum += v.value() * Rational(c.multiplicity);
  }
  return sum;
}

}  // namespace

bool scope_assignment_feasible(const Instance& instance, const ScopeIndex& index, std::size_t i,
                               std::uint64_t sigma) {
  return located_cost(instance, index, i, sigma, true).is_finite();
}

ExtRat scope_assignment_cost(const Instance& instance, const ScopeIndex& index, std::size_t i, std::uint64_t sigma) {
  return located_cost(instance, index, i, sigma, false);
}

SaLp build_sa(const Instance& instance, int k, int l) {
  check_levels(instance, k, l);
  ScopeIndex index(instance, l);
  const int d = instance.domain_size();
  std::vector<std::size_t> offset(index.size());
  std::size_t cols = 0;
  for (std::size_t i = 0; i < index.size(); ++i) {
    offset[i] = cols;
    cols += power(d, int(index.scope(i).size()));
  }
  if (cols > std::size_t(std::numeric_limits<int>::max())) throw ResourceError("SA LP has too many columns");
  lp::LinearProgram prog{int(cols)};
  for (std::size_t i = 0; i < index.size(); ++i) {
    const std::uint64_t count = power(d, int(index.scope(i).size()));
    std::vector<std::pair<int, Rational>> terms;
    for (std::uint64_t s = 0; s < count; ++s) {
      const int col = int(offset[i] + s);
      terms.emplace_back(col, Rational(1));
      if (index.constraints_at(i).empty()) continue;
      ExtRat cost = scope_assignment_cost(instance, index, i, s);
      if (cost.is_inf())
        prog.set_upper(col, Rational(0));
      else if (!cost.value().is_zero())
        prog.set_objective(col, cost.value());
    }
    prog.add_row(std::move(terms), lp::Sense::Equal, Rational(1));
  }
  index.for_each_pair(k, [&](std::size_t j, std::size_t i) {
    const Scope& xi = index.scope(i);
    const Scope& xj = index.scope(j);
    const std::vector<int> pos = positions_in(xj, xi);
    const std::uint64_t sub_count = power(d, int(xj.size()));
    std::vector<std::vector<std::pair<int, Rational>>> rows(sub_count);
    for (std::uint64_t t = 0; t < sub_count; ++t) rows[t].emplace_back(int(offset[j] + t), Rational(-1));
    const std::uint64_t count = power(d, int(xi.size()));
    Tuple local(xi.size(), 0);
    for (std::uint64_t s = 0; s < count; ++s) {
      std::uint64_t t = 0;
      for (int p : pos) t = t * d + local[p];
      rows[t].emplace_back(int(offset[i] + s), Rational(1));
      int c = int(xi.size()) - 1;
      while (c >= 0 && ++local[c] == d) local[c--] = 0;
    }
    for (auto& r : rows) prog.add_row(std::move(r), lp::Sense::Equal, Rational(0));
  });
  return SaLp{std::move(index), std::move(prog), std::move(offset)};
}

SaResult solve_sa(const Instance& instance, int k, int l, const Options& options) {
  SaLp built = build_sa(instance, k, l);
  lp::Result r = lp::solve(built.lp, options.lp);
  SaResult out;
  out.pivots = r.pivots;
  if (r.status == lp::Status::Infeasible) return out;
  if (r.status == lp::Status::Unbounded) throw std::logic_error("SA relaxation reported unbounded");
  out.feasible = true;
  out.value = r.value;
  out.solution = SaSolution(instance.domain_size());
  const int d = instance.domain_size();
  for (std::size_t i = 0; i < built.index.size(); ++i) {
    const Scope& x = built.index.scope(i);
    const std::uint64_t count = power(d, int(x.size()));
    std::vector<Rational> dist(r.point.begin() + std::ptrdiff_t(built.offset[i]),
                               r.point.begin() + std::ptrdiff_t(built.offset[i] + count));
    out.solution.set(x, std::move(dist));
  }
  return out;
}

namespace {

const std::vector<Rational>& require(const SaSolution& lambda, const Scope& scope) {
  const auto* dist = lambda.find(scope);
  if (!dist) {
    std::string s;
    for (int v : scope) s += (s.empty() ? "" : " ") + std::to_string(v);
    throw InputError("missing distribution for scope {" + s + "}");
  }
  return *dist;
}

std::string scope_text(const Scope& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? " " : "") + std::to_string(s[i]);
  return out + "}";
}

std::string tuple_text(const Tuple& t) {
  std::string out = "(";
  for (std::size_t i = 0; i < t.size(); ++i) out += (i ? " " : "") + std::to_string(t[i]);
  return out + ")";
}

}  // namespace

ExtRat sa_objective(const Instance& instance, const ScopeIndex& index, const SaSolution& lambda) {
  ExtRat total(0);
  for (std::size_t i = 0; i < index.size(); ++i) {
    if (index.constraints_at(i).empty()) continue;
    const auto& dist = require(lambda, index.scope(i));
    for (std::uint64_t s = 0; s < dist.size(); ++s) {
      if (dist[s].is_zero()) continue;
      ExtRat cost = scope_assignment_cost(instance, index, i, s);
      if (cost.is_inf()) return ExtRat::infinity();
      total += ExtRat(cost.value() * dist[s]);
    }
  }
  return total;
}

namespace {

// Checks scope i on its own; returns a violation message or empty.
std::string check_scope(const Instance& instance, const ScopeIndex& index, std::size_t i,
                        const std::vector<Rational>& dist) {
  const Scope& x = index.scope(i);
  const int d = instance.domain_size();
  Rational sum;
  for (std::uint64_t s = 0; s < dist.size(); ++s) {
    if (dist[s].sign() < 0)
      return "negative mass " + dist[s].str() + " at scope " + scope_text(x) + " assignment " +
             tuple_text(tuple_at(s, int(x.size()), d));
    if (!dist[s].is_zero() && !index.constraints_at(i).empty() && !scope_assignment_feasible(instance, index, i, s))
      return "mass " + dist[s].str() + " on infeasible assignment " + tuple_text(tuple_at(s, int(x.size()), d)) +
             " of scope " + scope_text(x);
    sum += dist[s];
  }
  if (sum != Rational(1)) return "scope " + scope_text(x) + " sums to " + sum.str();
  return {};
}

std::string check_pair(const ScopeIndex& index, std::size_t j, std::size_t i, const std::vector<Rational>& dj,
                       const std::vector<Rational>& di, int d) {
  const Scope& xi = index.scope(i);
  const Scope& xj = index.scope(j);
  std::vector<Rational> m = marginal(di, int(xi.size()), positions_in(xj, xi), d);
  for (std::uint64_t t = 0; t < m.size(); ++t)
    if (m[t] != dj[t])
      return "marginal of scope " + scope_text(xi) + " on " + scope_text(xj) + " at " +
             tuple_text(tuple_at(t, int(xj.size()), d)) + " is " + m[t].str() + ", expected " + dj[t].str();
  return {};
}

struct Finding {
  std::size_t scope = std::numeric_limits<std::size_t>::max();
  std::string message;
};

}  // namespace

VerifyReport verify_sa_feasible(const Instance& instance, const SaSolution& lambda, int k, int l,
                                const VerifyOptions& options) {
  check_levels(instance, k, l);
  if (lambda.domain_size() != instance.domain_size()) throw InputError("solution and instance domains differ");
  ScopeIndex index(instance, l);
  const int d = instance.domain_size();
  VerifyReport report;

  // Resolve every distribution up front so missing scopes are reported as input errors.
  std::vector<const std::vector<Rational>*> dists(index.size());
  for (std::size_t i = 0; i < index.size(); ++i) {
    dists[i] = &require(lambda, index.scope(i));
    if (dists[i]->size() != power(d, int(index.scope(i).size())))
      throw InputError("distribution for scope " + scope_text(index.scope(i)) + " has the wrong size");
  }

  if (options.sample_pairs) {
    std::mt19937_64 rng(options.seed);
    std::uniform_int_distribution<std::size_t> pick_scope(0, index.size() - 1);
    std::uint64_t attempts = 0;
    while (report.pairs_checked < *options.sample_pairs && attempts < 64 * (*options.sample_pairs + 1)) {
      ++attempts;
      const std::size_t i = pick_scope(rng);
      ++report.scopes_checked;
      if (auto msg = check_scope(instance, index, i, *dists[i]); !msg.empty()) {
        report.violation = msg;
        return report;
      }
      std::vector<std::size_t> subs;
      Scope x = index.scope(i);
      // Subsets of size <= k of a single scope, found through the index.
      for (int s = 1; s <= std::min<int>(k, int(x.size()) - 1); ++s) {
        std::vector<int> sel(s);
        for (int t = 0; t < s; ++t) sel[t] = t;
        while (true) {
          Scope sub(s);
          for (int t = 0; t < s; ++t) sub[t] = x[sel[t]];
          if (auto j = index.find(sub)) subs.push_back(*j);
          int t = s - 1;
          while (t >= 0 && sel[t] == int(x.size()) - s + t) --t;
          if (t < 0) break;
          ++sel[t];
          for (int u = t + 1; u < s; ++u) sel[u] = sel[u - 1] + 1;
        }
      }
      if (subs.empty()) continue;
      std::uniform_int_distribution<std::size_t> pick_sub(0, subs.size() - 1);
      const std::size_t j = subs[pick_sub(rng)];
      ++report.pairs_checked;
      if (auto msg = check_pair(index, j, i, *dists[j], *dists[i], d); !msg.empty()) {
        report.violation = msg;
        return report;
      }
    }
  } else {
    const unsigned threads = std::max(1u, options.threads);
    std::vector<Finding> found(threads);
    std::vector<std::uint64_t> pair_counts(threads, 0);
    auto work = [&](unsigned w) {
      Finding& f = found[w];
      // Scope i is checked by worker i % threads; the lowest failing scope index wins.
      for (std::size_t i = w; i < index.size(); i += threads) {
        if (i > f.scope) break;
        if (auto msg = check_scope(instance, index, i, *dists[i]); !msg.empty()) {
          f = {i, msg};
          break;
        }
      }
      index.for_each_pair(k, [&](std::size_t j, std::size_t i) {
        if (i % threads != w || i >= f.scope) return;
        ++pair_counts[w];
        if (auto msg = check_pair(index, j, i, *dists[j], *dists[i], d); !msg.empty()) f = {i, msg};
      });
    };
    if (threads == 1) {
      work(0);
    } else {
      std::vector<std::thread> pool;
      for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
      for (auto& t : pool) t.join();
    }
    report.scopes_checked = index.size();
    for (auto c : pair_counts) report.pairs_checked += c;
    const Finding* first = nullptr;
    for (const auto& f : found)
      if (!f.message.empty() && (!first || f.scope < first->scope)) first = &f;
    if (first) {
      report.violation = first->message;
      return report;
    }
  }
  report.feasible = true;
  report.objective = sa_objective(instance, index, lambda);
  return report;
}

SaSolution symmetrize(const SaSolution& lambda, const FractionalOperation& omega, const Instance& instance,
                      std::uint64_t budget) {
  const int d = lambda.domain_size();
  const int m = omega.arity();
  SaSolution out(d);
  Tuple args(m);
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    const Scope& x = lambda.scopes()[i];
    const auto& dist = lambda.distribution(i);
    const int width = int(x.size());
    std::vector<std::uint64_t> support;
    for (std::uint64_t s = 0; s < dist.size(); ++s)
      if (!dist[s].is_zero()) support.push_back(s);
    const std::uint64_t blocks = power(support.size(), m);
    if (blocks > budget / std::max<std::uint64_t>(1, omega.weights().size()))
      throw ResourceError("symmetrization of scope " + scope_text(x) + " exceeds the budget");
    std::vector<Tuple> decoded;
    for (auto s : support) decoded.push_back(tuple_at(s, width, d));
    std::vector<Rational> res(dist.size());
    std::vector<std::size_t> pick(m, 0);
    Tuple image(width);
    while (!support.empty()) {
      Rational prob(1);
      for (int t = 0; t < m; ++t) prob *= dist[support[pick[t]]];
      for (const auto& [f, w] : omega.weights()) {
        for (int c = 0; c < width; ++c) {
          for (int t = 0; t < m; ++t) args[t] = decoded[pick[t]][c];
          image[c] = f(args);
        }
        res[tuple_index(image, d)] += prob * w;
      }
      int t = m - 1;
      while (t >= 0 && ++pick[t] == support.size()) pick[t--] = 0;
      if (t < 0) break;
    }
    out.set(x, std::move(res));
  }
  (void)instance;
  return out;
}

SaSolution mix_half(const SaSolution& lambda, const SaSolution& mu) {
  SaSolution out(lambda.domain_size());
  const Rational half(1, 2);
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    const auto& a = lambda.distribution(i);
    const auto& b = require(mu, lambda.scopes()[i]);
    std::vector<Rational> m(a.size());
    for (std::size_t s = 0; s < a.size(); ++s) m[s] = (a[s] + b[s]) * half;
    out.set(lambda.scopes()[i], std::move(m));
  }
  return out;
}

SaSolution extend_width1(const SaSolution& lambda, const Instance& instance, int l) {
  check_levels(instance, 1, l);
  const int d = instance.domain_size();
  ScopeIndex index(instance, l);
  SaSolution out(d);
  for (std::size_t i = 0; i < index.size(); ++i) {
    const Scope& x = index.scope(i);
    if (const auto* dist = lambda.find(x)) {
      out.set(x, *dist);
      continue;
    }
    std::vector<const std::vector<Rational>*> unary;
    for (int v : x) unary.push_back(&require(lambda, Scope{v}));
    const std::uint64_t count = power(d, int(x.size()));
    std::vector<Rational> dist(count);
    Tuple t(x.size(), 0);
    for (std::uint64_t s = 0; s < count; ++s) {
      Rational p(1);
      for (std::size_t c = 0; c < x.size() && !p.is_zero(); ++c) p *= (*unary[c])[t[c]];
      dist[s] = std::move(p);
      int c = int(x.size()) - 1;
      while (c >= 0 && ++t[c] == d) t[c--] = 0;
    }
    out.set(x, std::move(dist));
  }
  return out;
}

SaSolution integral_solution(const ScopeIndex& index, std::span<const int> sigma) {
  const int d = index.domain_size();
  SaSolution out(d);
  for (const Scope& x : index.scopes()) {
    std::vector<Rational> dist(power(d, int(x.size())));
    dist[assignment_index(x, sigma, d)] = Rational(1);
    out.set(x, std::move(dist));
  }
  return out;
}

ExtractResult extract_assignment(const Instance& instance, int k, int l, const Options& options) {
  check_levels(instance, k, l);
  const int n = instance.num_vars();
  const int d = instance.domain_size();
  Instance work = instance;
  std::vector<int> constant_id(d);
  for (int a = 0; a < d; ++a) constant_id[a] = work.intern_relation(constant_relation(d, a), "const" + std::to_string(a));

  ExtractResult out;
  SaResult base = solve_sa(work, k, l, options);
  ++out.lp_solves;
  if (!base.feasible) {
    out.status = ExtractStatus::Infeasible;
    out.detail = "SA relaxation is infeasible";
    return out;
  }
  out.sa_value = base.value;
  Assignment sigma(n, -1);
  for (int v = 0; v < n; ++v) {
    bool fixed = false;
    for (int a = 0; a < d && !fixed; ++a) {
      Instance trial = work;
      trial.add_constraint(constant_id[a], {v});
      SaResult r = solve_sa(trial, k, l, options);
      ++out.lp_solves;
      if (r.feasible && r.value == base.value) {
        work = std::move(trial);
        sigma[v] = a;
        fixed = true;
      }
    }
    if (!fixed) {
      out.status = ExtractStatus::NotExtractable;
      out.detail = "no label of variable " + std::to_string(v) + " preserves the SA optimum";
      return out;
    }
  }
  ExtRat value = evaluate(instance, sigma);
  if (value != base.value) {
    out.status = ExtractStatus::NotExtractable;
    out.detail = "forced assignment has value " + value.str() + ", SA optimum is " + base.value.str();
    out.assignment = sigma;
    return out;
  }
  out.status = ExtractStatus::Extracted;
  out.assignment = std::move(sigma);
  return out;
}

}  // namespace vcsp::sa
