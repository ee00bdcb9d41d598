// Acceptance run: prints one PASS/FAIL line per criterion and exits non-zero if any fail.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "lp_suite.hpp"
#include "support.hpp"
#include "vcsp/consistency.hpp"
#include "vcsp/gadgets.hpp"
#include "vcsp/gap.hpp"
#include "vcsp/io.hpp"
#include "vcsp/sherali_adams.hpp"

using namespace vcsp;
using namespace testing_support;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

std::string str(const ExtRat& v) { return v.str(); }

std::pair<int, std::string> run_cli(const std::string& args) {
  const std::string cmd = std::string(VCSP_CLI_PATH) + " " + args + " 2>&1";
  std::string out;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return {-1, ""};
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, got);
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

gap::Torus z2_torus(int n) {
  const gap::AbelianGroup g = gap::AbelianGroup::cyclic(2);
  return gap::Torus(g, n, gap::TorusParameters::canonical(g, n));
}

std::vector<int> random_subset(std::mt19937_64& rng, int universe, int size) {
  std::vector<int> x;
  std::uniform_int_distribution<int> pick(0, universe - 1);
  while (int(x.size()) < size) {
    const int v = pick(rng);
    if (std::find(x.begin(), x.end(), v) == x.end()) x.push_back(v);
  }
  std::sort(x.begin(), x.end());
  return x;
}

Language two_sat_language() {
  Language l;
  for (int s = 0; s < 4; ++s) {
    WeightedRelation r(2, 2, ExtRat(0));
    r.set(std::vector<int>{(s >> 1) & 1, s & 1}, ExtRat::infinity());
    l.add(r, "clause" + std::to_string(s));
  }
  return with_constants(l);
}

Outcome gap_reproduction() {
  Outcome o;
  const auto dir = std::filesystem::temp_directory_path() / "vcsp-acceptance-gap";
  std::filesystem::create_directories(dir);
  const std::string inst = (dir / "i7.vcsp").string(), cert = (dir / "l7.sa").string();
  if (run_cli("gen-gap --group Z2 --n 7 -o " + inst).first != 0) o.fail("gen-gap failed");
  if (run_cli("--threads 4 gap-cert --group Z2 --n 7 --k 3 -o " + cert).first != 0) o.fail("gap-cert failed");
  const auto [code, out] = run_cli("--threads 4 verify " + inst + " " + cert + " --k 3 --l 3");
  if (code != 0 || out.find("feasible\nobjective 0\n") == std::string::npos) o.fail("verify: " + out);
  // every subset pair of the 3-level index must have been audited
  const sa::ScopeIndex index(z2_torus(7).instance(), 3);
  const std::string expect_pairs = "pairs-checked " + std::to_string(index.containment_pairs(3).size()) + "\n";
  if (out.find(expect_pairs) == std::string::npos) o.fail("not every pair checked: " + out);
  for (int n : {1, 2})
    if (!oracle_min(z2_torus(n).instance()).value.is_inf()) o.fail("I_" + std::to_string(n) + " is satisfiable");
  std::filesystem::remove_all(dir);
  if (o.pass) o.detail = "I_7 SA(3,3) feasible, objective 0, " + expect_pairs.substr(0, expect_pairs.size() - 1) + "; I_1, I_2 unsatisfiable";
  return o;
}

Outcome counting_law() {
  Outcome o;
  const gap::Torus t = z2_torus(7);
  const gap::AbelianGroup& g = t.group();
  std::mt19937_64 rng(101);
  for (int i = 0; i < 500; ++i) {
    const auto x = random_subset(rng, t.num_vars(), 1 + i % 3);
    const gap::Closure c = gap::closure_xbar(x, t);
    const auto n_set = gap::enumerate_n(c, t);
    if (n_set.size() != c.predicted_size(g)) o.fail("count mismatch on scope " + std::to_string(i));
  }
  int pairs = 0;
  while (pairs < 200) {
    const auto xi = random_subset(rng, t.num_vars(), 2 + pairs % 2);
    std::vector<int> xj;
    for (int v : xi)
      if (rng() % 2) xj.push_back(v);
    if (xj.size() == xi.size()) xj.pop_back();
    const gap::Closure ci = gap::closure_xbar(xi, t), cj = gap::closure_xbar(xj, t);
    const auto ni = gap::enumerate_n(ci, t), nj = gap::enumerate_n(cj, t);
    if (ni.size() % nj.size() != 0) {
      o.fail("|N_i| not divisible by |N_j|");
      break;
    }
    std::vector<int> pos;
    for (int v : cj.vars) {
      const auto it = std::find(ci.vars.begin(), ci.vars.end(), v);
      if (it == ci.vars.end()) {
        o.fail("closure not monotone");
        return o;
      }
      pos.push_back(int(it - ci.vars.begin()));
    }
    std::map<std::vector<int>, std::size_t> ext;
    for (const auto& a : ni) {
      std::vector<int> r;
      for (int p : pos) r.push_back(a[p]);
      ++ext[r];
    }
    const std::set<std::vector<int>> nj_set(nj.begin(), nj.end());
    if (ext.size() != nj.size()) o.fail("restriction of N_i does not cover N_j");
    for (const auto& [r, count] : ext)
      if (!nj_set.count(r) || count != ni.size() / nj.size()) o.fail("extension count differs from |N_i|/|N_j|");
    ++pairs;
  }
  if (o.pass) o.detail = "500 scopes match |G|^(C+H+V); 200 nested pairs have uniform extension counts";
  return o;
}

Outcome sa23_exactness() {
  Outcome o;
  std::mt19937_64 rng(103);
  int extracted = 0;
  for (int t = 0; t < 100; ++t) {
    const int n = 3 + t % 8;
    const Instance inst = random_2sat_costs(rng, n, n, n, 1 + t % 2);
    const OracleResult truth = oracle_min(inst);
    const sa::SaResult r = sa::solve_sa(inst, 2, 3);
    if (r.value != truth.value) {
      o.fail("instance " + std::to_string(t) + ": SA " + str(r.value) + " vs " + str(truth.value));
      continue;
    }
    const sa::ExtractResult e = sa::extract_assignment(inst, 2, 3);
    if (truth.value.is_inf()) {
      if (e.status != sa::ExtractStatus::Infeasible) o.fail("instance " + std::to_string(t) + ": extraction on infeasible");
      continue;
    }
    if (e.status != sa::ExtractStatus::Extracted || oracle_cost(inst, e.assignment) != truth.value)
      o.fail("instance " + std::to_string(t) + ": extraction " + e.detail);
    else
      ++extracted;
  }
  if (o.pass) o.detail = "100 instances exact; " + std::to_string(extracted) + " optimal assignments extracted and re-evaluated";
  return o;
}

Outcome width1_exactness() {
  Outcome o;
  std::mt19937_64 rng(107);
  for (int t = 0; t < 100; ++t) {
    const int n = 3 + t % 5;
    const Instance inst = random_cut(rng, n, n + t % 4);
    const ExtRat truth = oracle_min(inst).value;
    const sa::SaResult r = sa::solve_sa(inst, 1, 1);
    if (r.value != truth) o.fail("instance " + std::to_string(t) + ": SA(1,1) " + str(r.value) + " vs " + str(truth));
    const sa::VerifyReport rep = sa::verify_sa_feasible(inst, sa::extend_width1(r.solution, inst, 3), 1, 3);
    if (!rep.feasible) o.fail("instance " + std::to_string(t) + ": extension infeasible: " + rep.violation);
    if (rep.objective != r.value) o.fail("instance " + std::to_string(t) + ": extension changed the value");
  }
  if (o.pass) o.detail = "100 cut instances: SA(1,1) = brute force; extensions feasible at (1,3) with equal value";
  return o;
}

Outcome lattice() {
  Outcome o;
  std::mt19937_64 rng(109);
  const std::vector<std::pair<int, int>> levels{{1, 1}, {1, 2}, {2, 2}, {1, 3}, {2, 3}, {3, 3}};
  for (int t = 0; t < 50; ++t) {
    const Instance inst = random_mixed(rng, 3 + t % 3, 2 + t % 2, 4 + t % 4);
    const ExtRat truth = oracle_min(inst).value;
    std::vector<ExtRat> v;
    for (auto [k, l] : levels) v.push_back(sa::solve_sa(inst, k, l).value);
    for (std::size_t a = 0; a < levels.size(); ++a) {
      if (v[a] > truth) o.fail("instance " + std::to_string(t) + ": relaxation above the optimum");
      for (std::size_t b = 0; b < levels.size(); ++b)
        if (levels[a].first <= levels[b].first && levels[a].second <= levels[b].second && v[a] > v[b])
          o.fail("instance " + std::to_string(t) + ": not monotone");
    }
  }
  if (o.pass) o.detail = "50 instances monotone over 6 levels and bounded by brute force";
  return o;
}

Outcome membership_lp() {
  Outcome o;
  Language cut;
  cut.add(WeightedRelation(2, 2, std::vector<ExtRat>{0, 1, 1, 0}), "cut");
  for (bool use_min : {true, false}) {
    const Operation f = boolean_op(2, [use_min](std::span<const int> a) {
      return use_min ? std::min(a[0], a[1]) : std::max(a[0], a[1]);
    });
    const SupportResult r = in_support(f, cut);
    if (r.answer != SupportAnswer::Yes || !r.witness) {
      o.fail(std::string(use_min ? "min" : "max") + " not certified");
      continue;
    }
    if (!oracle_is_fractional_polymorphism(*r.witness, cut) || r.witness->weight(f) <= Rational(0))
      o.fail("witness fails the inequality system");
  }
  Language xor_lang;
  xor_lang.add(WeightedRelation(2, 2, std::vector<ExtRat>{1, 0, 0, 1}), "xor");
  const Operation maj = boolean_op(3, [](std::span<const int> a) { return a[0] + a[1] + a[2] >= 2 ? 1 : 0; });
  const SupportResult r = in_support(maj, xor_lang);
  if (r.answer != SupportAnswer::No || !r.certificate) {
    o.fail("majority not refuted");
    return o;
  }
  const Instance sep = separating_instance(*r.certificate, maj, xor_lang);
  const ExtRat best = oracle_min(sep).value;
  for (int i = 0; i < 3; ++i) {
    Assignment proj(sep.num_vars());
    for (int x = 0; x < sep.num_vars(); ++x) proj[x] = tuple_at(x, 3, 2)[i];
    if (oracle_cost(sep, proj) != best) o.fail("projection " + std::to_string(i) + " not optimal");
  }
  Assignment img(sep.num_vars());
  for (int x = 0; x < sep.num_vars(); ++x) img[x] = maj(tuple_at(x, 3, 2));
  const ExtRat maj_cost = oracle_cost(sep, img);
  if (!(maj_cost > best)) o.fail("majority image not strictly suboptimal");
  if (o.pass)
    o.detail = "min, max certified on cut; separating instance: projections " + str(best) + ", majority " + str(maj_cost);
  return o;
}

Outcome bwc_tester() {
  Outcome o;
  const Language eqs = with_constants(gap::make_eqs_language(gap::AbelianGroup::cyclic(2), 3));
  if (test_bwc(eqs).satisfied) o.fail("E_{Z2,3} with constants reported Satisfied");
  int wnu_pols = 0, idempotent = 0;
  for (int code = 0; code < 65536; ++code) {
    std::vector<int> t(16);
    for (int i = 0; i < 16; ++i) t[i] = (code >> i) & 1;
    const Operation g(4, 2, t);
    if (g.is_idempotent()) ++idempotent;
    if (oracle_is_wnu(g) && oracle_is_polymorphism(g, eqs)) ++wnu_pols;
  }
  if (wnu_pols != 0) o.fail("found a quaternary WNU polymorphism of E_{Z2,3}");

  const Language sat = two_sat_language();
  const BwcResult r = test_bwc(sat);
  if (!r.satisfied || !r.f || !r.g) {
    o.fail("2-SAT language reported Violated");
    return o;
  }
  if (!oracle_is_wnu(*r.f) || !oracle_is_wnu(*r.g)) o.fail("returned operations are not WNUs");
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      if ((*r.f)({y, x, x}) != (*r.g)({y, x, x, x})) o.fail("f(y,x,x) != g(y,x,x,x)");
  for (const Operation* op : {&*r.f, &*r.g}) {
    const SupportResult s = in_support(*op, sat);
    if (s.answer != SupportAnswer::Yes || !oracle_is_fractional_polymorphism(*s.witness, sat) ||
        s.witness->weight(*op) <= Rational(0))
      o.fail("returned operation not certified in the support");
  }
  if (o.pass)
    o.detail = "E_{Z2,3}: Violated, 0 of 65536 quaternary operations (" + std::to_string(idempotent) +
               " idempotent) are WNU polymorphisms; 2-SAT: Satisfied with linked (f,g)";
  return o;
}

Outcome consistency_truth() {
  Outcome o;
  std::mt19937_64 rng(113);
  int empty = 0;
  for (int t = 0; t < 200; ++t) {
    const int n = 4 + t % 11;
    const Instance inst = random_crisp_2sat(rng, n, n + int(rng() % (n + 1)));
    const MinimalityState a = kl_minimality(inst, 2, 3, PropagationOrder::Fifo);
    const MinimalityState b = kl_minimality(inst, 2, 3, PropagationOrder::ReverseLifo);
    const bool unsat = oracle_min(inst).value.is_inf();
    if (a.empty != unsat) o.fail("instance " + std::to_string(t) + ": Empty disagrees with brute force");
    if (a.empty != b.empty || a.allowed != b.allowed) o.fail("instance " + std::to_string(t) + ": orders disagree");
    if (!a.empty && !check_minimal(a, 2).empty()) o.fail("instance " + std::to_string(t) + ": fixpoint not minimal");
    empty += a.empty;
  }
  if (o.pass) o.detail = "200 instances (" + std::to_string(empty) + " unsatisfiable) agree; FIFO and reverse-LIFO fixpoints identical";
  return o;
}

Outcome lp_exactness() {
  Outcome o;
  for (auto rule : {lp::PivotRule::Bland, lp::PivotRule::DantzigWithBlandFallback}) {
    lp::Options opt;
    opt.rule = rule;
    const lp::Result b = lp::solve(beale_cycling(), opt);
    if (b.status != lp::Status::Optimal || b.value != ExtRat(Rational(-1, 20))) o.fail("cycling example");
    int n = 0;
    for (const auto& c : regression_suite()) {
      const lp::Result r = lp::solve(c.lp, opt);
      ++n;
      if (r.status != c.status) o.fail(c.name + ": status " + lp::to_string(r.status));
      else if (c.value && (r.value != ExtRat(*c.value) || !lp::check_point(c.lp, r.point).ok))
        o.fail(c.name + ": value " + str(r.value));
    }
    if (n != 10) o.fail("suite size");
  }
  if (o.pass) o.detail = "cycling example optimum -1/20; 10 regression LPs exact under both pivot rules";
  return o;
}

WeightedRelation random_phi(std::mt19937_64& rng) {
  std::vector<ExtRat> t;
  for (int i = 0; i < 4; ++i) t.push_back(rng() % 6 == 0 ? ExtRat::infinity() : ExtRat(random_rational(rng, 5, 2)));
  t[rng() % 4] = ExtRat(random_rational(rng, 5, 2));
  return WeightedRelation(2, 2, t);
}

Outcome gadget_preservation() {
  Outcome o;
  std::mt19937_64 rng(127);
  for (int t = 0; t < 10; ++t) {  // opt(φ)
    Instance inst = random_mixed(rng, 4, 2, 3, 10);
    const WeightedRelation phi = random_phi(rng);
    const int id = inst.intern_relation(opt_relation(phi), "opt_phi");
    for (int j = 0; j < 2; ++j) inst.add_constraint(id, distinct_vars(rng, 4, 2));
    const GadgetResult g = opt_gadget(inst, phi);
    const ExtRat before = oracle_min(inst).value, after = oracle_min(g.instance).value;
    if (before.is_finite() && after != before) o.fail("opt gadget changed the optimum");
    if (before.is_inf() && after.is_finite() && !(after > ExtRat(opt_gadget_threshold(inst, phi, g))))
      o.fail("opt gadget missed infeasibility");
  }
  for (int t = 0; t < 10; ++t) {  // feas(φ)
    Instance inst = random_mixed(rng, 4, 2, 3, 10);
    const WeightedRelation phi = random_phi(rng);
    const int id = inst.intern_relation(feas_relation(phi), "feas_phi");
    for (int j = 0; j < 2; ++j) inst.add_constraint(id, distinct_vars(rng, 4, 2));
    const GadgetResult g = feas_gadget(inst, phi);
    const OracleResult before = oracle_min(inst, true), after = oracle_min(g.instance, true);
    if (before.value.is_inf() != after.value.is_inf()) o.fail("feas gadget changed feasibility");
    for (const auto& a : after.argmins)
      if (oracle_cost(inst, a) != before.value) o.fail("feas gadget optimum not optimal for the original");
  }
  for (int t = 0; t < 10; ++t) {  // equality contraction
    Instance inst = random_mixed(rng, 5, 2, 4, 10);
    const int eq = inst.intern_relation(equality_relation(2), "eq");
    for (int j = 0; j < 2; ++j) inst.add_constraint(eq, distinct_vars(rng, 5, 2));
    const ContractionResult c = contract_equalities(inst, eq);
    const OracleResult before = oracle_min(inst), after = oracle_min(c.instance, true);
    if (before.value != after.value) o.fail("contraction changed the optimum");
    for (const auto& a : after.argmins)
      if (oracle_cost(inst, lift_assignment(c, a)) != before.value) o.fail("lifted optimum not optimal");
  }
  if (o.pass) o.detail = "30 instances: opt, feas and equality gadgets preserve brute-force optima";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"gap instance I_7 certified for SA(3,3)", gap_reproduction},
      {"counting law and extension counts", counting_law},
      {"SA(2,3) exact on 2-SAT with costs", sa23_exactness},
      {"SA(1,1) exact on cut instances", width1_exactness},
      {"relaxation lattice monotone", lattice},
      {"membership LP witnesses and certificates", membership_lp},
      {"bounded width tester", bwc_tester},
      {"(2,3)-minimality decides 2-SAT", consistency_truth},
      {"exact LP solver", lp_exactness},
      {"gadgets preserve optima", gadget_preservation},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::ostringstream line;
    line << (o.pass ? "PASS" : "FAIL") << " criterion " << (i + 1) << ": " << criteria[i].first << " (" << o.detail
         << ") [" << std::fixed;
    line.precision(1);
    line << secs << "s]";
    std::cout << line.str() << std::endl;
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
