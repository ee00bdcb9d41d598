#include "vcsp/algebra.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "vcsp/error.hpp"
#include "vcsp/lp.hpp"

namespace vcsp {

void Language::add(WeightedRelation rel, std::string name) {
  if (rel.domain_size() != domain_size) throw InputError("relation domain does not match the language");
  if (name.empty()) name = "r" + std::to_string(relations.size());
  relations.push_back(std::move(rel));
  names.push_back(std::move(name));
}

Language language_of(const Instance& instance) {
  Language g;
  g.domain_size = instance.domain_size();
  g.relations = instance.relations();
  g.names = instance.relation_names();
  return g;
}

Language with_constants(const Language& gamma) {
  Language out = gamma;
  for (int a = 0; a < gamma.domain_size; ++a) {
    WeightedRelation c = constant_relation(gamma.domain_size, a);
    if (std::find(out.relations.begin(), out.relations.end(), c) != out.relations.end()) continue;
    std::string name = "const" + std::to_string(a);
    while (std::find(out.names.begin(), out.names.end(), name) != out.names.end()) name += "_";
    out.add(std::move(c), name);
  }
  return out;
}

Language restrict_language(const Language& gamma, const std::vector<int>& subdomain) {
  if (subdomain.empty()) throw InputError("sub-domain must be non-empty");
  for (int a : subdomain)
    if (a < 0 || a >= gamma.domain_size) throw InputError("sub-domain label outside the domain");
  const int s = int(subdomain.size());
  Language out;
  out.domain_size = s;
  for (std::size_t r = 0; r < gamma.relations.size(); ++r) {
    const auto& phi = gamma.relations[r];
    WeightedRelation res(phi.arity(), s);
    for (std::uint64_t i = 0; i < res.size(); ++i) {
      Tuple t = tuple_at(i, phi.arity(), s);
      for (int& v : t) v = subdomain[v];
      res.set(std::size_t(i), phi.at(t));
    }
    out.add(std::move(res), gamma.names[r]);
  }
  return out;
}

Operation compose(const Operation& f, const std::vector<Operation>& gs) {
  if (int(gs.size()) != f.arity()) throw InputError("compose: number of inner operations differs from the arity");
  const int n = gs.front().arity();
  const int d = f.domain_size();
  for (const auto& g : gs)
    if (g.arity() != n || g.domain_size() != d) throw InputError("compose: inner operations disagree on arity or domain");
  std::vector<int> table(power(d, n));
  std::vector<int> inner(f.arity());
  for (std::size_t i = 0; i < table.size(); ++i) {
    for (int j = 0; j < f.arity(); ++j) inner[j] = gs[j].table()[i];
    table[i] = f(inner);
  }
  return Operation(n, d, std::move(table));
}

namespace {

// Calls visit(block, cells) for every m-tuple of feasible tuples of phi; cells[c] is the
// lexicographic index of column c in D^m.
template <typename Visit>
void for_each_block(const WeightedRelation& phi, int m, Visit&& visit) {
  const std::vector<Tuple> feas = phi.feasible_tuples();
  if (feas.empty()) return;
  const int r = phi.arity();
  const int d = phi.domain_size();
  std::vector<std::size_t> pick(m, 0);
  std::vector<Tuple> block(m);
  std::vector<std::uint64_t> cells(r);
  while (true) {
    for (int j = 0; j < m; ++j) block[j] = feas[pick[j]];
    for (int c = 0; c < r; ++c) {
      std::uint64_t idx = 0;
      for (int j = 0; j < m; ++j) idx = idx * d + block[j][c];
      cells[c] = idx;
    }
    visit(block, cells);
    int j = m - 1;
    while (j >= 0 && ++pick[j] == feas.size()) pick[j--] = 0;
    if (j < 0) return;
  }
}

Tuple image_of(const Operation& f, const std::vector<std::uint64_t>& cells) {
  Tuple t(cells.size());
  for (std::size_t c = 0; c < cells.size(); ++c) t[c] = f.table()[cells[c]];
  return t;
}

void check_domain(const Operation& f, const Language& gamma) {
  if (f.domain_size() != gamma.domain_size) throw InputError("operation and language domains differ");
}

}  // namespace

std::optional<PolymorphismViolation> find_polymorphism_violation(const Operation& f, const Language& gamma) {
  check_domain(f, gamma);
  for (std::size_t r = 0; r < gamma.relations.size(); ++r) {
    std::optional<PolymorphismViolation> found;
    const auto& phi = gamma.relations[r];
    for_each_block(phi, f.arity(), [&](const std::vector<Tuple>& block, const std::vector<std::uint64_t>& cells) {
      if (found) return;
      Tuple img = image_of(f, cells);
      if (!phi.feasible(img)) found = PolymorphismViolation{int(r), block, img};
    });
    if (found) return found;
  }
  return std::nullopt;
}

bool is_polymorphism(const Operation& f, const Language& gamma) { return !find_polymorphism_violation(f, gamma); }

bool is_wnu(const Operation& f) {
  const int m = f.arity();
  if (m < 3) throw InputError("WNU needs arity at least 3");
  if (!f.is_idempotent()) return false;
  const int d = f.domain_size();
  std::vector<int> args(m);
  for (int x = 0; x < d; ++x)
    for (int y = 0; y < d; ++y) {
      if (x == y) continue;
      std::optional<int> value;
      for (int p = 0; p < m; ++p) {
        std::fill(args.begin(), args.end(), x);
        args[p] = y;
        int v = f(args);
        if (value && *value != v) return false;
        value = v;
      }
    }
  return true;
}

bool is_symmetric(const Operation& f) {
  const int m = f.arity();
  if (m < 2) throw InputError("symmetry needs arity at least 2");
  const int d = f.domain_size();
  // A transposition and a full cycle generate every permutation.
  for (std::uint64_t i = 0; i < f.table().size(); ++i) {
    Tuple t = tuple_at(i, m, d);
    Tuple swapped = t;
    std::swap(swapped[0], swapped[1]);
    Tuple rotated(m);
    for (int p = 0; p < m; ++p) rotated[p] = t[(p + 1) % m];
    if (f(swapped) != f.table()[i] || f(rotated) != f.table()[i]) return false;
  }
  return true;
}

namespace {

int find_root(std::vector<int>& parent, int v) {
  while (parent[v] != v) v = parent[v] = parent[parent[v]];
  return v;
}

}  // namespace

std::vector<Operation> enumerate_polymorphisms(const Language& gamma, int m, const EnumerationFilter& filter,
                                               std::uint64_t budget) {
  if (m < 1) throw InputError("operation arity must be positive");
  if (filter.wnu && m < 3) throw InputError("WNU filter needs arity at least 3");
  if (filter.symmetric && m < 2) throw InputError("symmetric filter needs arity at least 2");
  const int d = gamma.domain_size;
  const std::uint64_t cells = power(d, m);
  if (cells > (std::uint64_t(1) << 24)) throw ResourceError("operation tables are too large to enumerate");
  if (!filter.fixed.empty() && filter.fixed.size() != cells) throw InputError("fixed-cell map has the wrong size");

  // Tie cells that the filters force to be equal.
  std::vector<int> parent(cells);
  std::iota(parent.begin(), parent.end(), 0);
  auto unite = [&](std::uint64_t a, std::uint64_t b) {
    int ra = find_root(parent, int(a)), rb = find_root(parent, int(b));
    if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
  };
  std::vector<std::optional<int>> forced(cells);
  if (!filter.fixed.empty()) forced = filter.fixed;
  auto force = [&](std::uint64_t cell, int v) {
    if (forced[cell] && *forced[cell] != v) return false;
    forced[cell] = v;
    return true;
  };
  bool consistent = true;
  if (filter.idempotent || filter.wnu) {
    for (int a = 0; a < d; ++a) consistent &= force(tuple_index(Tuple(m, a), d), a);
  }
  if (filter.wnu) {
    for (int x = 0; x < d; ++x)
      for (int y = 0; y < d; ++y) {
        if (x == y) continue;
        Tuple first(m, x);
        first[0] = y;
        for (int p = 1; p < m; ++p) {
          Tuple t(m, x);
          t[p] = y;
          unite(tuple_index(first, d), tuple_index(t, d));
        }
      }
  }
  if (filter.symmetric) {
    for (std::uint64_t i = 0; i < cells; ++i) {
      Tuple t = tuple_at(i, m, d);
      std::sort(t.begin(), t.end());
      unite(i, tuple_index(t, d));
    }
  }
  if (!consistent) return {};

  // Classes in order of their smallest cell.
  std::vector<int> class_of(cells, -1);
  std::vector<int> root_class(cells, -1);
  int classes = 0;
  std::vector<std::optional<int>> class_forced;
  for (std::uint64_t i = 0; i < cells; ++i) {
    int r = find_root(parent, int(i));
    if (root_class[r] < 0) {
      root_class[r] = classes++;
      class_forced.emplace_back();
    }
    class_of[i] = root_class[r];
    if (forced[i]) {
      auto& cf = class_forced[class_of[i]];
      if (cf && *cf != *forced[i]) return {};
      cf = forced[i];
    }
  }
  std::vector<std::vector<std::uint64_t>> class_cells(classes);
  for (std::uint64_t i = 0; i < cells; ++i) class_cells[class_of[i]].push_back(i);

  // Each block is checked once the last of its cells' classes is assigned.
  struct PendingBlock {
    int relation;
    std::vector<std::uint64_t> cells;
  };
  std::vector<std::vector<PendingBlock>> checks(classes);
  for (std::size_t r = 0; r < gamma.relations.size(); ++r) {
    const auto& phi = gamma.relations[r];
    if (phi.is_finite_valued()) continue;
    std::uint64_t blocks = 0;
    for_each_block(phi, m, [&](const std::vector<Tuple>&, const std::vector<std::uint64_t>& cs) {
      if (++blocks > budget) throw ResourceError("too many tuple blocks to enumerate polymorphisms");
      int last = 0;
      for (auto c : cs) last = std::max(last, class_of[c]);
      checks[last].push_back({int(r), cs});
    });
  }

  std::vector<Operation> out;
  std::vector<int> table(cells, 0);
  std::vector<int> value(classes, -1);
  std::uint64_t nodes = 0;
  Tuple img;
  int c = 0;
  while (c >= 0) {
    // Advance class c to its next admissible value.
    int next = value[c] + 1;
    if (class_forced[c]) next = value[c] < 0 ? *class_forced[c] : d;
    if (next >= d) {
      value[c] = -1;
      --c;
      continue;
    }
    if (++nodes > budget) throw ResourceError("polymorphism enumeration exceeded the budget");
    value[c] = next;
    for (auto cell : class_cells[c]) table[cell] = next;
    bool ok = true;
    for (const auto& b : checks[c]) {
      img.resize(b.cells.size());
      for (std::size_t t = 0; t < b.cells.size(); ++t) img[t] = table[b.cells[t]];
      if (!gamma.relations[b.relation].feasible(img)) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    if (c + 1 == classes) {
      out.emplace_back(m, d, table);
      continue;
    }
    ++c;
  }
  return out;
}

std::string to_string(SupportAnswer a) {
  switch (a) {
    case SupportAnswer::Yes: return "yes";
    case SupportAnswer::No: return "no";
    case SupportAnswer::NotPolymorphism: return "not-polymorphism";
    case SupportAnswer::Inconclusive: return "inconclusive";
  }
  return "?";
}

SupportOracle::SupportOracle(const Language& gamma, int m, std::optional<std::vector<Operation>> candidates,
                             std::uint64_t budget)
    : gamma_(gamma), m_(m) {
  if (candidates) {
    candidate_mode_ = true;
    for (auto& g : *candidates) {
      if (g.arity() != m) throw InputError("candidate operation has the wrong arity");
      check_domain(g, gamma_);
      if (is_polymorphism(g, gamma_)) columns_.push_back(std::move(g));
    }
    std::sort(columns_.begin(), columns_.end());
    columns_.erase(std::unique(columns_.begin(), columns_.end()), columns_.end());
  } else {
    columns_ = enumerate_polymorphisms(gamma_, m, {}, budget);
  }
  std::uint64_t count = 0;
  for (std::size_t r = 0; r < gamma_.relations.size(); ++r) {
    const auto& phi = gamma_.relations[r];
    for_each_block(phi, m, [&](const std::vector<Tuple>& block, const std::vector<std::uint64_t>&) {
      if (++count > budget) throw ResourceError("membership LP has too many tuple blocks");
      Rational sum;
      for (const auto& t : block) sum += phi.at(t).value();
      blocks_.push_back({int(r), block, std::move(sum)});
    });
  }
}

namespace {

std::vector<std::uint64_t> block_cells(const std::vector<Tuple>& block, int d) {
  const std::size_t r = block.front().size();
  std::vector<std::uint64_t> cells(r);
  for (std::size_t c = 0; c < r; ++c) {
    std::uint64_t idx = 0;
    for (const auto& t : block) idx = idx * d + t[c];
    cells[c] = idx;
  }
  return cells;
}

// m · φ(g(block)); g must be a polymorphism so the value is finite.
Rational scaled_image_cost(const WeightedRelation& phi, const Operation& g, const std::vector<std::uint64_t>& cells,
                           int m) {
  const ExtRat& v = phi.at(image_of(g, cells));
  if (v.is_inf()) throw std::logic_error("column is not a polymorphism");
  return v.value() * Rational(m);
}

}  // namespace

SupportResult SupportOracle::test(const Operation& f) const {
  if (f.arity() != m_) throw InputError("operation arity does not match the oracle");
  check_domain(f, gamma_);
  SupportResult res;
  if (auto v = find_polymorphism_violation(f, gamma_)) {
    res.answer = SupportAnswer::NotPolymorphism;
    res.violation = std::move(v);
    return res;
  }
  std::vector<Operation> cols = columns_;
  auto fit = std::find(cols.begin(), cols.end(), f);
  if (fit == cols.end()) {
    if (!candidate_mode_) throw std::logic_error("polymorphism missing from the enumerated columns");
    cols.push_back(f);
    fit = cols.end() - 1;
  }
  const std::size_t f_col = std::size_t(fit - cols.begin());
  const int n = int(cols.size());
  res.columns = cols.size();

  // coef[b][g] = m φ(g(b)); blocks where no column exceeds the bound are implied by Σω = 1.
  std::vector<std::vector<Rational>> coef;
  std::vector<std::size_t> live;
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    const auto& blk = blocks_[b];
    const auto& phi = gamma_.relations[blk.relation];
    const auto cells = block_cells(blk.tuples, gamma_.domain_size);
    std::vector<Rational> row(n);
    bool binding = false;
    for (int g = 0; g < n; ++g) {
      row[g] = scaled_image_cost(phi, cols[g], cells, m_);
      if (row[g] > blk.sum) binding = true;
    }
    if (!binding) continue;
    live.push_back(b);
    coef.push_back(std::move(row));
  }

  // Primal: maximize ω(f) subject to the averaging rows.
  lp::LinearProgram primal(n);
  primal.set_objective(int(f_col), Rational(-1));
  {
    std::vector<std::pair<int, Rational>> terms;
    for (int g = 0; g < n; ++g) terms.emplace_back(g, Rational(1));
    primal.add_row(std::move(terms), lp::Sense::Equal, Rational(1));
  }
  std::map<std::pair<std::vector<Rational>, Rational>, bool> seen;
  for (std::size_t i = 0; i < live.size(); ++i) {
    auto key = std::make_pair(coef[i], blocks_[live[i]].sum);
    if (!seen.emplace(key, true).second) continue;
    std::vector<std::pair<int, Rational>> terms;
    for (int g = 0; g < n; ++g)
      if (!coef[i][g].is_zero()) terms.emplace_back(g, coef[i][g]);
    primal.add_row(std::move(terms), lp::Sense::LessEqual, blocks_[live[i]].sum);
  }
  lp::Result pr = lp::solve(primal);
  if (pr.status == lp::Status::Optimal && pr.value.value().sign() < 0) {
    std::vector<std::pair<Operation, Rational>> w;
    for (int g = 0; g < n; ++g)
      if (pr.point[g].sign() > 0) w.emplace_back(cols[g], pr.point[g]);
    res.answer = SupportAnswer::Yes;
    res.witness = FractionalOperation(std::move(w));
    return res;
  }
  if (candidate_mode_) {
    res.answer = SupportAnswer::Inconclusive;
    return res;
  }

  // Dual: z ≥ 0 with Σ_b z_b (sum_b - m φ(g(b))) ≤ 0 for every g, ≤ -1 for f.
  const int nz = int(live.size());
  lp::LinearProgram dual(nz);
  for (int b = 0; b < nz; ++b) dual.set_objective(b, Rational(1));
  for (int g = 0; g < n; ++g) {
    std::vector<std::pair<int, Rational>> terms;
    for (int b = 0; b < nz; ++b) {
      Rational a = blocks_[live[b]].sum - coef[b][g];
      if (!a.is_zero()) terms.emplace_back(b, std::move(a));
    }
    dual.add_row(std::move(terms), lp::Sense::LessEqual, std::size_t(g) == f_col ? Rational(-1) : Rational(0));
  }
  lp::Result dr = lp::solve(dual);
  if (dr.status != lp::Status::Optimal) throw std::logic_error("membership LP and its Farkas dual are both infeasible");
  mpz_class lcm = 1;
  for (const auto& z : dr.point) {
    mpz_class den = z.denominator();
    mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), den.get_mpz_t());
  }
  std::vector<mpz_class> ints;
  mpz_class gcd = 0;
  for (const auto& z : dr.point) {
    mpz_class v = z.numerator() * (lcm / z.denominator());
    mpz_gcd(gcd.get_mpz_t(), gcd.get_mpz_t(), v.get_mpz_t());
    ints.push_back(v);
  }
  FarkasCertificate cert;
  cert.arity = m_;
  for (int b = 0; b < nz; ++b) {
    if (ints[b] == 0) continue;
    mpz_class v = ints[b] / gcd;
    if (!v.fits_slong_p()) throw ResourceError("Farkas certificate entry does not fit in 64 bits");
    cert.entries.push_back({blocks_[live[b]].relation, blocks_[live[b]].tuples, v.get_si()});
  }
  res.answer = SupportAnswer::No;
  res.certificate = std::move(cert);
  return res;
}

SupportResult in_support(const Operation& f, const Language& gamma, std::optional<std::vector<Operation>> candidates,
                         std::uint64_t budget) {
  check_domain(f, gamma);
  if (!candidates) {
    if (auto v = find_polymorphism_violation(f, gamma)) {
      SupportResult res;
      res.answer = SupportAnswer::NotPolymorphism;
      res.violation = std::move(v);
      return res;
    }
  }
  SupportOracle oracle(gamma, f.arity(), std::move(candidates), budget);
  return oracle.test(f);
}

bool is_fractional_polymorphism(const FractionalOperation& omega, const Language& gamma) {
  for (const auto& [g, w] : omega.weights())
    if (g.domain_size() != gamma.domain_size || !is_polymorphism(g, gamma)) return false;
  const int m = omega.arity();
  for (const auto& phi : gamma.relations) {
    bool ok = true;
    for_each_block(phi, m, [&](const std::vector<Tuple>& block, const std::vector<std::uint64_t>& cells) {
      if (!ok) return;
      Rational lhs;
      for (const auto& [g, w] : omega.weights()) lhs += w * phi.at(image_of(g, cells)).value();
      Rational sum;
      for (const auto& t : block) sum += phi.at(t).value();
      if (lhs * Rational(m) > sum) ok = false;
    });
    if (!ok) return false;
  }
  return true;
}

namespace {

// Σ_b z_b (Σ φ(x_i) - m φ(g(b))), or nullopt if the certificate is malformed for Γ.
std::optional<Rational> certificate_row(const FarkasCertificate& z, const Operation& g, const Language& gamma) {
  Rational total;
  const int m = z.arity;
  for (const auto& e : z.entries) {
    if (e.relation < 0 || e.relation >= int(gamma.relations.size())) return std::nullopt;
    const auto& phi = gamma.relations[e.relation];
    if (int(e.block.size()) != m) return std::nullopt;
    Rational sum;
    for (const auto& t : e.block) {
      if (int(t.size()) != phi.arity()) return std::nullopt;
      for (int v : t)
        if (v < 0 || v >= gamma.domain_size) return std::nullopt;
      if (!phi.feasible(t)) return std::nullopt;
      sum += phi.at(t).value();
    }
    const ExtRat& img = phi.at(image_of(g, block_cells(e.block, gamma.domain_size)));
    if (img.is_inf()) return std::nullopt;
    total += Rational(e.z) * (sum - img.value() * Rational(m));
  }
  return total;
}

}  // namespace

bool certificate_is_valid(const FarkasCertificate& z, const Operation& f, const Language& gamma,
                          const std::vector<Operation>* columns) {
  if (z.arity != f.arity() || f.domain_size() != gamma.domain_size) return false;
  for (const auto& e : z.entries)
    if (e.z < 0) return false;
  auto strict = certificate_row(z, f, gamma);
  if (!strict || strict->sign() >= 0) return false;
  if (columns)
    for (const auto& g : *columns) {
      auto row = certificate_row(z, g, gamma);
      if (!row || row->sign() > 0) return false;
    }
  return true;
}

Instance separating_instance(const FarkasCertificate& z, const Operation& f, const Language& gamma) {
  if (!certificate_is_valid(z, f, gamma)) throw InputError("invalid Farkas certificate");
  const int d = gamma.domain_size;
  const std::uint64_t vars = power(d, z.arity);
  if (vars > std::uint64_t(std::numeric_limits<int>::max())) throw ResourceError("separating instance too large");
  Instance inst(int(vars), d);
  for (std::size_t r = 0; r < gamma.relations.size(); ++r) inst.add_relation(gamma.relations[r], gamma.names[r]);
  for (const auto& e : z.entries) {
    if (e.z == 0) continue;
    std::vector<int> scope;
    for (auto c : block_cells(e.block, d)) scope.push_back(int(c));
    inst.add_constraint(e.relation, std::move(scope), e.z);
  }
  return inst;
}

CoreResult find_core(const Language& gamma, std::uint64_t budget) {
  CoreResult out;
  out.domain.resize(gamma.domain_size);
  std::iota(out.domain.begin(), out.domain.end(), 0);
  out.core = gamma;
  while (true) {
    const int d = out.core.domain_size;
    SupportOracle oracle(out.core, 1, std::nullopt, budget);
    bool shrunk = false;
    for (const auto& f : oracle.columns()) {
      std::vector<int> image = f.table();
      std::sort(image.begin(), image.end());
      image.erase(std::unique(image.begin(), image.end()), image.end());
      if (int(image.size()) == d) continue;
      if (oracle.test(f).answer != SupportAnswer::Yes) continue;
      std::vector<int> labels;
      for (int a : image) labels.push_back(out.domain[a]);
      out.core = restrict_language(out.core, image);
      out.domain = std::move(labels);
      out.retractions.push_back(f);
      shrunk = true;
      break;
    }
    if (!shrunk) return out;
  }
}

BwcResult test_bwc(const Language& gamma, std::uint64_t budget) {
  BwcResult res;
  const int d = gamma.domain_size;
  EnumerationFilter wnu;
  wnu.wnu = true;
  const auto ternary = enumerate_polymorphisms(gamma, 3, wnu, budget);
  if (ternary.empty()) return res;
  SupportOracle oracle3(gamma, 3, std::nullopt, budget);
  std::optional<SupportOracle> oracle4;
  for (const auto& f : ternary) {
    ++res.ternary_checked;
    if (oracle3.test(f).answer != SupportAnswer::Yes) continue;
    EnumerationFilter link;
    link.wnu = true;
    link.fixed.assign(power(d, 4), std::nullopt);
    for (int x = 0; x < d; ++x)
      for (int y = 0; y < d; ++y)
        if (x != y) link.fixed[tuple_index(Tuple{y, x, x, x}, d)] = f({y, x, x});
    const auto quaternary = enumerate_polymorphisms(gamma, 4, link, budget);
    if (quaternary.empty()) continue;
    if (!oracle4) oracle4.emplace(gamma, 4, std::nullopt, budget);
    for (const auto& g : quaternary) {
      ++res.quaternary_checked;
      if (oracle4->test(g).answer == SupportAnswer::Yes) {
        res.satisfied = true;
        res.f = f;
        res.g = g;
        return res;
      }
    }
  }
  return res;
}

std::vector<SymArityReport> test_sym(const Language& gamma, int m_max, std::uint64_t budget) {
  if (m_max < 2) throw InputError("test_sym needs m_max >= 2");
  std::vector<SymArityReport> out;
  for (int m = 2; m <= m_max; ++m) {
    SymArityReport rep;
    rep.arity = m;
    EnumerationFilter sym;
    sym.symmetric = true;
    auto cands = enumerate_polymorphisms(gamma, m, sym, budget);
    std::stable_partition(cands.begin(), cands.end(), [](const Operation& f) { return f.is_idempotent(); });
    rep.candidates = cands.size();
    if (!cands.empty()) {
      SupportOracle oracle(gamma, m, std::nullopt, budget);
      for (const auto& f : cands)
        if (oracle.test(f).answer == SupportAnswer::Yes) {
          rep.found = f;
          break;
        }
    }
    out.push_back(std::move(rep));
  }
  return out;
}

}  // namespace vcsp
