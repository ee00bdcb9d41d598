// vcsp: command-line front end for the library.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "vcsp/algebra.hpp"
#include "vcsp/consistency.hpp"
#include "vcsp/core.hpp"
#include "vcsp/error.hpp"
#include "vcsp/gadgets.hpp"
#include "vcsp/gap.hpp"
#include "vcsp/io.hpp"
#include "vcsp/lp.hpp"
#include "vcsp/sherali_adams.hpp"

namespace {

using namespace vcsp;

enum Exit : int {
  kOk = 0,
  kInputError = 1,
  kInfeasible = 2,
  kEmpty = 3,
  kViolated = 4,
  kNotExtractable = 5,
  kResource = 6,
  kVerifyViolation = 7,
};

struct Globals {
  unsigned threads = 1;
  std::uint64_t budget = 0;  // 0: library default
  std::uint64_t seed = 1;
  std::uint64_t budget_or_default() const { return budget ? budget : default_budget(); }
};

Instance load_instance(const std::string& path) { return io::parse_instance(io::read_file(path), path); }

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-")
    std::cout << text;
  else
    io::write_file(path, text);
}

std::string assignment_text(const Assignment& a) {
  std::string s;
  for (std::size_t i = 0; i < a.size(); ++i) s += (i ? " " : "") + std::to_string(a[i]);
  return s;
}

std::string relation_block(const std::string& name, const WeightedRelation& rel) {
  Instance tmp(0, rel.domain_size());
  tmp.add_relation(rel, name);
  std::string text = io::format_instance(tmp);
  return text.substr(text.find('\n') + 1);
}

std::string language_text(const Language& lang) {
  Instance tmp(0, lang.domain_size);
  for (std::size_t r = 0; r < lang.relations.size(); ++r) tmp.add_relation(lang.relations[r], lang.names[r]);
  return io::format_instance(tmp);
}

int require_relation(const Instance& inst, const std::string& name) {
  auto id = inst.find_relation(name);
  if (!id) throw InputError("no relation named '" + name + "'");
  return *id;
}

sa::Options sa_options(bool dantzig) {
  sa::Options o;
  if (dantzig) o.lp.rule = lp::PivotRule::DantzigWithBlandFallback;
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact valued CSP toolkit: Sherali-Adams relaxations, polymorphisms, gap instances"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--threads", g.threads, "Worker threads for parallel stages")->check(CLI::Range(1u, 256u));
  app.add_option("--budget", g.budget, "Enumeration budget (default 2^26 or VCSP_SA_BUDGET)");
  app.add_option("--seed", g.seed, "Seed for sampled verification");

  std::string file, file2, out_path, rel_name, op_name, group = "Z2", lambda_out, emit_lp, vars_text, candidates;
  int k = 1, l = 1, n = 7, r = 0, max_arity = 2;
  std::uint64_t sample = 0;
  bool dump = false, dantzig = false, show_lambda = false;

  auto* solve_exact = app.add_subcommand("solve-exact", "Exact optimum by exhaustive enumeration");
  solve_exact->add_option("instance", file, "Instance file")->required();

  auto* solve_sa = app.add_subcommand("solve-sa", "Optimum of the SA(k,l) relaxation");
  solve_sa->add_option("instance", file, "Instance file")->required();
  solve_sa->add_option("--k", k, "Marginal level k")->required();
  solve_sa->add_option("--l", l, "Scope level l")->required();
  solve_sa->add_option("--emit-lp", emit_lp, "Also write the LP to this path");
  solve_sa->add_option("--lambda", lambda_out, "Write the optimal solution to this path");
  solve_sa->add_flag("--show-lambda", show_lambda, "Print the optimal solution");
  solve_sa->add_flag("--dantzig", dantzig, "Dantzig pricing with Bland fallback");

  auto* extract = app.add_subcommand("extract", "Optimal assignment by SA self-reduction");
  extract->add_option("instance", file, "Instance file")->required();
  extract->add_option("--k", k, "Marginal level k")->required();
  extract->add_option("--l", l, "Scope level l")->required();
  extract->add_flag("--dantzig", dantzig, "Dantzig pricing with Bland fallback");

  auto* minimality = app.add_subcommand("minimality", "(k,l)-minimality propagation on a crisp instance");
  minimality->add_option("instance", file, "Instance file")->required();
  minimality->add_option("--k", k, "Marginal level k")->required();
  minimality->add_option("--l", l, "Scope level l")->required();
  minimality->add_flag("--dump", dump, "Print every surviving partial assignment");

  auto* test_fpol = app.add_subcommand("test-fpol", "Is an operation in the support of the language?");
  test_fpol->add_option("language", file, "Instance file whose relations form the language")->required();
  test_fpol->add_option("ops", file2, "Operation file")->required();
  test_fpol->add_option("--op", op_name, "Operation name in the file")->required();
  test_fpol->add_option("--candidates", candidates, "Operation file restricting the LP columns");
  test_fpol->add_option("--separating", out_path, "On No, write the separating instance here");

  auto* test_bwc = app.add_subcommand("test-bwc", "Bounded width test (core and constants added first)");
  test_bwc->add_option("language", file, "Instance file whose relations form the language")->required();

  auto* test_sym = app.add_subcommand("test-sym", "Symmetric support members for arities 2..max");
  test_sym->add_option("language", file, "Instance file whose relations form the language")->required();
  test_sym->add_option("--max", max_arity, "Largest arity to check")->check(CLI::Range(2, 8));

  auto* find_core = app.add_subcommand("find-core", "Core of the language");
  find_core->add_option("language", file, "Instance file whose relations form the language")->required();
  find_core->add_option("-o", out_path, "Write the core language here");

  auto* express_cmd = app.add_subcommand("express", "Relation expressed on designated variables");
  express_cmd->add_option("instance", file, "Instance file")->required();
  express_cmd->add_option("--vars", vars_text, "Comma-separated designated variables")->required();

  auto* gen_gap = app.add_subcommand("gen-gap", "Torus gap instance");
  gen_gap->add_option("--group", group, "Zp or ZpxZq");
  gen_gap->add_option("--n", n, "Torus size")->check(CLI::Range(1, 1000));
  gen_gap->add_option("--r", r, "With 3, expand every constraint into its equation gadget");
  gen_gap->add_option("-o", out_path, "Output path");

  auto* gap_cert = app.add_subcommand("gap-cert", "Feasible SA(k,k) solution of the torus instance");
  gap_cert->add_option("--group", group, "Zp or ZpxZq");
  gap_cert->add_option("--n", n, "Torus size")->check(CLI::Range(1, 1000));
  gap_cert->add_option("--k", k, "Level")->required();
  gap_cert->add_option("-o", out_path, "Output path");

  auto* verify = app.add_subcommand("verify", "Exact feasibility check of an SA solution");
  verify->add_option("instance", file, "Instance file")->required();
  verify->add_option("lambda", file2, "Solution file")->required();
  verify->add_option("--k", k, "Marginal level k")->required();
  verify->add_option("--l", l, "Scope level l")->required();
  verify->add_option("--sample", sample, "Audit this many random containment pairs only");

  auto* gadget_opt = app.add_subcommand("gadget-opt", "Replace opt(phi) constraints by scaled phi");
  gadget_opt->add_option("instance", file, "Instance file")->required();
  gadget_opt->add_option("--rel", rel_name, "Name of phi in the instance")->required();
  gadget_opt->add_option("-o", out_path, "Write the new instance here");

  auto* gadget_feas = app.add_subcommand("gadget-feas", "Replace feas(phi) constraints by phi");
  gadget_feas->add_option("instance", file, "Instance file")->required();
  gadget_feas->add_option("--rel", rel_name, "Name of phi in the instance")->required();
  gadget_feas->add_option("-o", out_path, "Write the new instance here");

  auto* contract = app.add_subcommand("contract-eq", "Merge variables joined by equality constraints");
  contract->add_option("instance", file, "Instance file")->required();
  contract->add_option("--rel", rel_name, "Name of the equality relation")->required();
  contract->add_option("-o", out_path, "Write the quotient instance here");

  auto* solve_lp_cmd = app.add_subcommand("solve-lp", "Exact LP solve");
  solve_lp_cmd->add_option("lp", file, "LP file")->required();
  solve_lp_cmd->add_flag("--dantzig", dantzig, "Dantzig pricing with Bland fallback");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  auto* cmd = app.get_subcommands().front();
  const std::string verb = cmd->get_name();
  try {
    const std::uint64_t budget = g.budget_or_default();

    if (cmd == solve_exact) {
      const Instance inst = load_instance(file);
      const OptResult res = brute_force_opt(inst, budget);
      std::cout << "value " << res.value << '\n';
      if (!res.witness) return kInfeasible;
      std::cout << "assignment " << assignment_text(*res.witness) << '\n';
      return kOk;
    }

    if (cmd == solve_sa) {
      const Instance inst = load_instance(file);
      if (!emit_lp.empty()) io::write_file(emit_lp, io::format_lp(sa::build_sa(inst, k, l).lp));
      const sa::SaResult res = sa::solve_sa(inst, k, l, sa_options(dantzig));
      std::cout << "value " << res.value << '\n' << "pivots " << res.pivots << '\n';
      if (!res.feasible) {
        std::cout << "status infeasible\n";
        return kInfeasible;
      }
      if (!lambda_out.empty()) io::write_file(lambda_out, io::format_solution(res.solution));
      if (show_lambda) io::write_solution(std::cout, res.solution);
      return kOk;
    }

    if (cmd == extract) {
      const Instance inst = load_instance(file);
      const sa::ExtractResult res = sa::extract_assignment(inst, k, l, sa_options(dantzig));
      std::cout << "sa-value " << res.sa_value << '\n' << "lp-solves " << res.lp_solves << '\n';
      switch (res.status) {
        case sa::ExtractStatus::Extracted:
          std::cout << "status extracted\nassignment " << assignment_text(res.assignment) << '\n';
          return kOk;
        case sa::ExtractStatus::Infeasible:
          std::cout << "status infeasible\n";
          return kInfeasible;
        case sa::ExtractStatus::NotExtractable:
          std::cout << "status not-extractable\ndetail " << res.detail << '\n';
          return kNotExtractable;
      }
    }

    if (cmd == minimality) {
      const Instance inst = load_instance(file);
      const MinimalityState st = kl_minimality(inst, k, l);
      std::cout << (st.empty ? "empty" : "non-empty") << '\n' << "revisions " << st.revisions << '\n';
      if (dump) {
        const int d = inst.domain_size();
        for (std::size_t i = 0; i < st.index.size(); ++i) {
          const auto& scope = st.index.scope(i);
          std::cout << "scope";
          for (int v : scope) std::cout << ' ' << v;
          std::cout << " :";
          for (std::size_t s = 0; s < st.allowed[i].size(); ++s)
            if (st.allowed[i][s]) std::cout << " (" << io::format_tuple(tuple_at(s, int(scope.size()), d)) << ')';
          std::cout << '\n';
        }
      }
      return st.empty ? kEmpty : kOk;
    }

    if (cmd == test_fpol) {
      const Language lang = language_of(load_instance(file));
      const auto ops = io::parse_operations(io::read_file(file2), file2);
      const Operation* f = nullptr;
      for (const auto& o : ops)
        if (o.name == op_name) f = &o.op;
      if (!f) throw InputError("no operation named '" + op_name + "' in " + file2);
      std::optional<std::vector<Operation>> cand;
      if (!candidates.empty()) {
        cand.emplace();
        for (auto& o : io::parse_operations(io::read_file(candidates), candidates)) cand->push_back(o.op);
      }
      const SupportResult res = in_support(*f, lang, cand, budget);
      std::cout << "answer " << to_string(res.answer) << '\n';
      if (res.columns) std::cout << "columns " << res.columns << '\n';
      if (res.witness) {
        int idx = 0;
        for (const auto& [op, w] : res.witness->weights()) {
          std::cout << "weight w" << idx << ' ' << w << '\n';
          std::cout << io::format_operation("w" + std::to_string(idx++), op);
        }
      }
      if (res.violation) {
        std::cout << "violated-relation " << lang.names[res.violation->relation] << '\n';
        for (const auto& t : res.violation->block) std::cout << "tuple " << io::format_tuple(t) << '\n';
        std::cout << "image " << io::format_tuple(res.violation->image) << '\n';
      }
      if (res.certificate) {
        for (const auto& e : res.certificate->entries) {
          std::cout << "z " << e.z << ' ' << lang.names[e.relation];
          for (const auto& t : e.block) std::cout << " | " << io::format_tuple(t);
          std::cout << '\n';
        }
        if (!out_path.empty()) io::write_file(out_path, io::format_instance(separating_instance(*res.certificate, *f, lang)));
      }
      return res.answer == SupportAnswer::Yes ? kOk : kViolated;
    }

    if (cmd == test_bwc) {
      const Language lang = language_of(load_instance(file));
      const CoreResult core = vcsp::find_core(lang, budget);
      std::cout << "core-domain";
      for (int a : core.domain) std::cout << ' ' << a;
      std::cout << '\n';
      const BwcResult res = vcsp::test_bwc(with_constants(core.core), budget);
      std::cout << "ternary-checked " << res.ternary_checked << '\n'
                << "quaternary-checked " << res.quaternary_checked << '\n';
      if (!res.satisfied) {
        std::cout << "Violated\n";
        return kViolated;
      }
      std::cout << "Satisfied\n" << io::format_operation("f", *res.f) << io::format_operation("g", *res.g);
      return kOk;
    }

    if (cmd == test_sym) {
      const Language lang = language_of(load_instance(file));
      bool all = true;
      for (const auto& rep : vcsp::test_sym(lang, max_arity, budget)) {
        std::cout << "arity " << rep.arity << " candidates " << rep.candidates << ' ';
        if (rep.found) {
          std::cout << "found\n" << io::format_operation("s" + std::to_string(rep.arity), *rep.found);
        } else {
          std::cout << "none\n";
          all = false;
        }
      }
      return all ? kOk : kViolated;
    }

    if (cmd == find_core) {
      const Language lang = language_of(load_instance(file));
      const CoreResult core = vcsp::find_core(lang, budget);
      std::cout << "core-domain";
      for (int a : core.domain) std::cout << ' ' << a;
      std::cout << '\n' << "retractions " << core.retractions.size() << '\n';
      if (!out_path.empty()) io::write_file(out_path, language_text(core.core));
      return kOk;
    }

    if (cmd == express_cmd) {
      const Instance inst = load_instance(file);
      std::vector<int> designated;
      std::stringstream ss(vars_text);
      std::string tok;
      while (std::getline(ss, tok, ',')) {
        try {
          designated.push_back(std::stoi(tok));
        } catch (const std::exception&) {
          throw InputError("bad variable '" + tok + "' in --vars");
        }
      }
      std::cout << relation_block("expressed", express(inst, designated, budget));
      return kOk;
    }

    if (cmd == gen_gap) {
      const gap::AbelianGroup grp = gap::parse_group(group);
      const gap::Torus torus(grp, n, gap::TorusParameters::canonical(grp, n));
      if (r != 0 && r != 3) throw InputError("--r must be 3 when given");
      emit(out_path, io::format_instance(r == 3 ? torus.gadget_instance() : torus.instance()));
      return kOk;
    }

    if (cmd == gap_cert) {
      const gap::AbelianGroup grp = gap::parse_group(group);
      const gap::Torus torus(grp, n, gap::TorusParameters::canonical(grp, n));
      const sa::SaSolution lambda = gap::build_gap_solution(torus, k, g.threads);
      if (out_path.empty() || out_path == "-") {
        io::write_solution(std::cout, lambda);
      } else {
        std::ofstream os(out_path, std::ios::binary);
        if (!os) throw InputError("cannot write '" + out_path + "'");
        io::write_solution(os, lambda);
      }
      std::cerr << "scopes " << lambda.size() << '\n';
      return kOk;
    }

    if (cmd == verify) {
      const Instance inst = load_instance(file);
      const sa::SaSolution lambda = io::parse_solution(io::read_file(file2), file2);
      sa::VerifyOptions opt;
      opt.threads = g.threads;
      opt.seed = g.seed;
      if (sample) opt.sample_pairs = sample;
      const sa::VerifyReport rep = sa::verify_sa_feasible(inst, lambda, k, l, opt);
      std::cout << "scopes-checked " << rep.scopes_checked << '\n' << "pairs-checked " << rep.pairs_checked << '\n';
      if (!rep.feasible) {
        std::cout << "violated " << rep.violation << '\n';
        return kVerifyViolation;
      }
      std::cout << "feasible\nobjective " << rep.objective << '\n';
      return kOk;
    }

    if (cmd == gadget_opt || cmd == gadget_feas) {
      const Instance inst = load_instance(file);
      const WeightedRelation& phi = inst.relation(require_relation(inst, rel_name));
      const GadgetResult res = cmd == gadget_opt ? opt_gadget(inst, phi) : feas_gadget(inst, phi);
      std::cout << "copies " << res.copies.get_str() << '\n'
                << "bound " << res.bound << '\n'
                << "delta " << res.delta << '\n'
                << "shift " << res.shift << '\n'
                << "replaced " << res.replaced << '\n';
      if (cmd == gadget_opt) std::cout << "infeasible-above " << opt_gadget_threshold(inst, phi, res) << '\n';
      if (!out_path.empty()) io::write_file(out_path, io::format_instance(res.instance));
      return kOk;
    }

    if (cmd == contract) {
      const Instance inst = load_instance(file);
      const ContractionResult res = contract_equalities(inst, require_relation(inst, rel_name));
      std::cout << "classes " << res.instance.num_vars() << '\n' << "map";
      for (int c : res.class_of) std::cout << ' ' << c;
      std::cout << '\n';
      if (!out_path.empty()) io::write_file(out_path, io::format_instance(res.instance));
      return kOk;
    }

    if (cmd == solve_lp_cmd) {
      const lp::LinearProgram prog = io::parse_lp(io::read_file(file), file);
      lp::Options o;
      if (dantzig) o.rule = lp::PivotRule::DantzigWithBlandFallback;
      const lp::Result res = lp::solve(prog, o);
      std::cout << "status " << lp::to_string(res.status) << '\n';
      if (res.status == lp::Status::Optimal) {
        std::cout << "value " << res.value << "\npoint";
        for (const auto& x : res.point) std::cout << ' ' << x;
        std::cout << '\n';
        return kOk;
      }
      return res.status == lp::Status::Infeasible ? kInfeasible : kViolated;
    }
  } catch (const InputError& e) {
    std::cerr << verb << ": input error: " << e.what() << '\n';
    return kInputError;
  } catch (const ResourceError& e) {
    std::cerr << verb << ": resource limit: " << e.what() << '\n';
    return kResource;
  }
  return kOk;
}
