#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vcsp/lp.hpp"

namespace testing_support {

struct LpCase {
  std::string name;
  vcsp::lp::LinearProgram lp;
  vcsp::lp::Status status;
  std::optional<vcsp::Rational> value;
};

// Beale's degenerate LP, which cycles under the textbook largest-coefficient rule. Optimum -1/20.
inline vcsp::lp::LinearProgram beale_cycling() {
  using vcsp::Rational;
  using vcsp::lp::Sense;
  vcsp::lp::LinearProgram p{4};
  p.set_objective(0, Rational(-3, 4));
  p.set_objective(1, Rational(150));
  p.set_objective(2, Rational(-1, 50));
  p.set_objective(3, Rational(6));
  p.add_row({{0, Rational(1, 4)}, {1, -60}, {2, Rational(-1, 25)}, {3, 9}}, Sense::LessEqual, 0);
  p.add_row({{0, Rational(1, 2)}, {1, -90}, {2, Rational(-1, 50)}, {3, 3}}, Sense::LessEqual, 0);
  p.add_row({{2, 1}}, Sense::LessEqual, 1);
  return p;
}

// Small LPs whose optima are checkable by hand at the listed vertex.
inline std::vector<LpCase> regression_suite() {
  using vcsp::Rational;
  using vcsp::lp::LinearProgram;
  using vcsp::lp::Sense;
  using vcsp::lp::Status;
  std::vector<LpCase> cases;
  {
    LinearProgram p{2};  // vertex (8/5, 6/5)
    p.set_objective(0, -1);
    p.set_objective(1, -1);
    p.add_row({{0, 1}, {1, 2}}, Sense::LessEqual, 4);
    p.add_row({{0, 3}, {1, 1}}, Sense::LessEqual, 6);
    cases.push_back({"two-constraint-vertex", p, Status::Optimal, Rational(-14, 5)});
  }
  {
    LinearProgram p{2};  // vertex (2, 6)
    p.set_objective(0, -3);
    p.set_objective(1, -5);
    p.add_row({{0, 1}}, Sense::LessEqual, 4);
    p.add_row({{1, 2}}, Sense::LessEqual, 12);
    p.add_row({{0, 3}, {1, 2}}, Sense::LessEqual, 18);
    cases.push_back({"three-row-production", p, Status::Optimal, Rational(-36)});
  }
  {
    LinearProgram p{2};
    p.add_row({{0, 1}, {1, 1}}, Sense::LessEqual, 1);
    p.add_row({{0, 1}, {1, 1}}, Sense::GreaterEqual, 3);
    cases.push_back({"contradictory-rows", p, Status::Infeasible, std::nullopt});
  }
  {
    LinearProgram p{2};
    p.set_objective(0, -1);
    p.add_row({{0, 1}, {1, -1}}, Sense::LessEqual, 1);
    cases.push_back({"unbounded-ray", p, Status::Unbounded, std::nullopt});
  }
  {
    LinearProgram p{3};  // y = 1
    for (int j = 0; j < 3; ++j) p.set_objective(j, 1);
    p.add_row({{0, 1}, {1, 1}}, Sense::Equal, 1);
    p.add_row({{1, 1}, {2, 1}}, Sense::Equal, 1);
    cases.push_back({"equality-chain", p, Status::Optimal, Rational(1)});
  }
  {
    LinearProgram p{1};  // free variable pushed to -5/3
    p.set_objective(0, 1);
    p.set_lower(0, std::nullopt);
    p.add_row({{0, 3}}, Sense::GreaterEqual, -5);
    cases.push_back({"free-variable", p, Status::Optimal, Rational(-5, 3)});
  }
  {
    LinearProgram p{1};
    p.set_objective(0, -1);
    p.set_upper(0, Rational(7, 2));
    cases.push_back({"upper-bound-only", p, Status::Optimal, Rational(-7, 2)});
  }
  {
    LinearProgram p{2};  // degenerate at the origin
    p.set_objective(0, -1);
    p.add_row({{0, 1}}, Sense::LessEqual, 0);
    p.add_row({{0, 1}, {1, 1}}, Sense::LessEqual, 0);
    cases.push_back({"degenerate-origin", p, Status::Optimal, Rational(0)});
  }
  {
    LinearProgram p{2};  // vertex (3, 1)
    p.set_objective(0, 2);
    p.set_objective(1, 3);
    p.add_row({{0, 1}, {1, 1}}, Sense::GreaterEqual, 4);
    p.add_row({{0, 1}, {1, 3}}, Sense::GreaterEqual, 6);
    cases.push_back({"covering", p, Status::Optimal, Rational(9)});
  }
  {
    LinearProgram p{3};  // x1 = 1/7, x2 = 2/7, x3 = 4/7 forced by the equalities
    p.set_objective(0, 7);
    p.set_objective(1, 14);
    p.set_objective(2, -7);
    p.add_row({{0, 2}, {1, -1}}, Sense::Equal, 0);
    p.add_row({{1, 2}, {2, -1}}, Sense::Equal, 0);
    p.add_row({{0, 1}, {1, 1}, {2, 1}}, Sense::Equal, 1);
    cases.push_back({"sevenths", p, Status::Optimal, Rational(1)});
  }
  return cases;
}

}  // namespace testing_support
