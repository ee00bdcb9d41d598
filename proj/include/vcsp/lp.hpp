#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vcsp/rational.hpp"

namespace vcsp::lp {

enum class Sense { LessEqual, Equal, GreaterEqual };

/// A sparse row: Σ coeff_j x_j (sense) rhs. Terms are kept sorted by variable, no zeros.
struct Row {
  std::vector<std::pair<int, Rational>> terms;
  Sense sense = Sense::Equal;
  Rational rhs;
};

/// Minimize c·x subject to rows and bounds. Lower bounds default to 0
/// (nullopt means free); upper bounds default to none.
class LinearProgram {
 public:
  LinearProgram() = default;
  explicit LinearProgram(int num_vars);

  int num_vars() const { return num_vars_; }
  const std::vector<Rational>& objective() const { return objective_; }
  const std::vector<Row>& rows() const { return rows_; }
  const std::vector<std::optional<Rational>>& lower() const { return lower_; }
  const std::vector<std::optional<Rational>>& upper() const { return upper_; }

  void set_objective(int var, Rational coeff);
  /// Adds a row from (var, coeff) terms; repeated vars are summed. Returns the row index.
  int add_row(std::vector<std::pair<int, Rational>> terms, Sense sense, Rational rhs);
  void set_lower(int var, std::optional<Rational> bound);
  void set_upper(int var, std::optional<Rational> bound);

  /// Objective value c·x at `point`.
  Rational objective_at(const std::vector<Rational>& point) const;

 private:
  int num_vars_ = 0;
  std::vector<Rational> objective_;
  std::vector<Row> rows_;
  std::vector<std::optional<Rational>> lower_;
  std::vector<std::optional<Rational>> upper_;
};

enum class Status { Optimal, Infeasible, Unbounded };

std::string to_string(Status s);

struct Result {
  Status status = Status::Infeasible;
  /// Optimal objective; ∞ when infeasible; meaningless (0) when unbounded.
  ExtRat value;
  /// Basic feasible optimal point, present iff Optimal.
  std::vector<Rational> point;
  std::int64_t pivots = 0;
};

enum class PivotRule {
  /// Smallest-index entering and leaving variable. Always terminates.
  Bland,
  /// Most negative reduced cost, switching to Bland after a run of degenerate pivots.
  DantzigWithBlandFallback,
};

struct Options {
  PivotRule rule = PivotRule::Bland;
  /// Refuse tableaux with more than this many cells.
  std::uint64_t max_cells = std::uint64_t(1) << 25;
};

/// Exact two-phase primal simplex over the rationals.
Result solve(const LinearProgram& lp, const Options& options = {});

struct CheckReport {
  bool ok = true;
  std::vector<int> violated_rows;
  std::vector<int> violated_lower;  ///< variables below their lower bound
  std::vector<int> violated_upper;  ///< variables above their upper bound
  Rational objective;
};

/// Exact verification of every row and bound at `point`.
CheckReport check_point(const LinearProgram& lp, const std::vector<Rational>& point);

}  // namespace vcsp::lp
