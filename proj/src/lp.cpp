#include "vcsp/lp.hpp"

#include <algorithm>
#include <stdexcept>

#include "vcsp/error.hpp"

namespace vcsp::lp {

LinearProgram::LinearProgram(int num_vars)
    : num_vars_(num_vars), objective_(num_vars), lower_(num_vars, Rational(0)), upper_(num_vars) {
  if (num_vars < 0) throw InputError("negative LP variable count");
}

void LinearProgram::set_objective(int var, Rational coeff) { objective_.at(var) = std::move(coeff); }

int LinearProgram::add_row(std::vector<std::pair<int, Rational>> terms, Sense sense, Rational rhs) {
  std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  Row row;
  row.sense = sense;
  row.rhs = std::move(rhs);
  for (auto& [var, coeff] : terms) {
    if (var < 0 || var >= num_vars_) throw InputError("LP row references an unknown variable");
    if (!row.terms.empty() && row.terms.back().first == var)
      row.terms.back().second += coeff;
    else
      row.terms.emplace_back(var, std::move(coeff));
  }
  std::erase_if(row.terms, [](const auto& t) { return t.second.is_zero(); });
  rows_.push_back(std::move(row));
  return int(rows_.size()) - 1;
}

void LinearProgram::set_lower(int var, std::optional<Rational> bound) { lower_.at(var) = std::move(bound); }
void LinearProgram::set_upper(int var, std::optional<Rational> bound) { upper_.at(var) = std::move(bound); }

Rational LinearProgram::objective_at(const std::vector<Rational>& point) const {
  if (int(point.size()) != num_vars_) throw InputError("point length does not match the LP");
  Rational v;
  for (int j = 0; j < num_vars_; ++j)
    if (!objective_[j].is_zero()) v += objective_[j] * point[j];
  return v;
}

std::string to_string(Status s) {
  switch (s) {
    case Status::Optimal: return "optimal";
    case Status::Infeasible: return "infeasible";
    case Status::Unbounded: return "unbounded";
  }
  return "?";
}

CheckReport check_point(const LinearProgram& lp, const std::vector<Rational>& point) {
  if (int(point.size()) != lp.num_vars()) throw InputError("point length does not match the LP");
  CheckReport rep;
  for (std::size_t r = 0; r < lp.rows().size(); ++r) {
    const Row& row = lp.rows()[r];
    Rational lhs;
    for (const auto& [var, coeff] : row.terms) lhs += coeff * point[var];
    bool ok = row.sense == Sense::LessEqual ? lhs <= row.rhs
              : row.sense == Sense::Equal   ? lhs == row.rhs
                                            : lhs >= row.rhs;
    if (!ok) rep.violated_rows.push_back(int(r));
  }
  for (int j = 0; j < lp.num_vars(); ++j) {
    if (lp.lower()[j] && point[j] < *lp.lower()[j]) rep.violated_lower.push_back(j);
    if (lp.upper()[j] && point[j] > *lp.upper()[j]) rep.violated_upper.push_back(j);
  }
  rep.ok = rep.violated_rows.empty() && rep.violated_lower.empty() && rep.violated_upper.empty();
  rep.objective = lp.objective_at(point);
  return rep;
}

namespace {

// Original variable = offset + Σ coeff * column.
struct VarMap {
  Rational offset;
  std::vector<std::pair<int, int>> cols;  // (column, ±1)
};

class Simplex {
 public:
  Simplex(const LinearProgram& lp, const Options& opt) : lp_(lp), opt_(opt) {}

  Result run();

 private:
  bool build();  // false if trivially infeasible
  void pivot(int r, int q);
  int choose_entering(bool bland) const;
  int choose_leaving(int q) const;
  // Runs simplex iterations on the current objective row. Returns false on unboundedness.
  bool iterate();

  const LinearProgram& lp_;
  Options opt_;
  std::vector<VarMap> var_map_;
  int num_struct_ = 0;
  int num_cols_ = 0;
  std::vector<std::vector<Rational>> tab_;  // rows x (num_cols_ + 1), last entry is rhs
  std::vector<int> basis_;                  // column index, or num_cols_ + row for artificials
  std::vector<Rational> obj_;               // reduced costs; obj_[num_cols_] = -objective
  std::vector<int> nz_;
  std::int64_t pivots_ = 0;
};

bool Simplex::build() {
  const int n = lp_.num_vars();
  var_map_.assign(n, {});
  std::vector<Row> extra;
  for (int j = 0; j < n; ++j) {
    const auto& lo = lp_.lower()[j];
    const auto& hi = lp_.upper()[j];
    VarMap& vm = var_map_[j];
    if (lo && hi) {
      if (*lo > *hi) return false;
      vm.offset = *lo;
      if (*lo == *hi) continue;
      vm.cols.emplace_back(num_struct_++, 1);
      extra.push_back({{{vm.cols[0].first, Rational(1)}}, Sense::LessEqual, *hi - *lo});
    } else if (lo) {
      vm.offset = *lo;
      vm.cols.emplace_back(num_struct_++, 1);
    } else if (hi) {
      vm.offset = *hi;
      vm.cols.emplace_back(num_struct_++, -1);
    } else {
      vm.cols.emplace_back(num_struct_++, 1);
      vm.cols.emplace_back(num_struct_++, -1);
    }
  }

  // Rows over structural columns.
  std::vector<Row> rows;
  rows.reserve(lp_.rows().size() + extra.size());
  for (const Row& src : lp_.rows()) {
    Row row;
    row.sense = src.sense;
    row.rhs = src.rhs;
    for (const auto& [var, coeff] : src.terms) {
      const VarMap& vm = var_map_[var];
      if (!vm.offset.is_zero()) row.rhs -= coeff * vm.offset;
      for (auto [col, sgn] : vm.cols) row.terms.emplace_back(col, sgn > 0 ? coeff : -coeff);
    }
    if (row.terms.empty()) {
      bool ok = row.sense == Sense::LessEqual ? row.rhs.sign() >= 0
                : row.sense == Sense::Equal   ? row.rhs.is_zero()
                                              : row.rhs.sign() <= 0;
      if (!ok) return false;
      continue;
    }
    rows.push_back(std::move(row));
  }
  for (auto& r : extra) rows.push_back(std::move(r));

  int num_slacks = 0;
  for (const Row& r : rows)
    if (r.sense != Sense::Equal) ++num_slacks;
  num_cols_ = num_struct_ + num_slacks;
  const std::uint64_t cells = std::uint64_t(rows.size()) * std::uint64_t(num_cols_ + 1);
  if (cells > opt_.max_cells)
    throw ResourceError("LP tableau needs " + std::to_string(cells) + " cells, budget is " +
                        std::to_string(opt_.max_cells));

  tab_.assign(rows.size(), std::vector<Rational>(num_cols_ + 1));
  basis_.assign(rows.size(), -1);
  int slack = num_struct_;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    auto& t = tab_[r];
    for (auto& [col, coeff] : rows[r].terms) t[col] += coeff;
    int slack_col = -1;
    if (rows[r].sense == Sense::LessEqual) {
      slack_col = slack++;
      t[slack_col] = 1;
    } else if (rows[r].sense == Sense::GreaterEqual) {
      slack_col = slack++;
      t[slack_col] = -1;
    }
    t[num_cols_] = rows[r].rhs;
    if (t[num_cols_].sign() < 0)
      for (auto& v : t)
        if (!v.is_zero()) v = -v;
    if (slack_col >= 0 && t[slack_col].sign() > 0)
      basis_[r] = slack_col;
    else
      basis_[r] = num_cols_ + int(r);
  }
  return true;
}

void Simplex::pivot(int r, int q) {
  auto& pr = tab_[r];
  const Rational inv = Rational(1) / pr[q];
  nz_.clear();
  for (int j = 0; j <= num_cols_; ++j) {
    if (pr[j].is_zero()) continue;
    if (j == q)
      pr[j] = 1;
    else
      pr[j] *= inv;
    nz_.push_back(j);
  }
  auto eliminate = [&](std::vector<Rational>& row) {
    if (row[q].is_zero()) return;
    const Rational f = row[q];
    for (int j : nz_) row[j].sub_mul(f, pr[j]);
  };
  for (std::size_t i = 0; i < tab_.size(); ++i)
    if (int(i) != r) eliminate(tab_[i]);
  eliminate(obj_);
  basis_[r] = q;
  ++pivots_;
}

int Simplex::choose_entering(bool bland) const {
  int best = -1;
  for (int j = 0; j < num_cols_; ++j) {
    if (obj_[j].sign() >= 0) continue;
    if (bland) return j;
    if (best < 0 || obj_[j] < obj_[best]) best = j;
  }
  return best;
}

int Simplex::choose_leaving(int q) const {
  int best = -1;
  Rational best_ratio;
  for (std::size_t r = 0; r < tab_.size(); ++r) {
    const Rational& a = tab_[r][q];
    if (a.sign() <= 0) continue;
    Rational ratio = tab_[r][num_cols_] / a;
    if (best < 0 || ratio < best_ratio || (ratio == best_ratio && basis_[r] < basis_[best])) {
      best = int(r);
      best_ratio = std::move(ratio);
    }
  }
  return best;
}

bool Simplex::iterate() {
  bool bland = opt_.rule == PivotRule::Bland;
  int degenerate_run = 0;
  while (true) {
    int q = choose_entering(bland);
    if (q < 0) return true;
    int r = choose_leaving(q);
    if (r < 0) return false;
    const bool degenerate = tab_[r][num_cols_].is_zero();
    pivot(r, q);
    if (!bland) {
      degenerate_run = degenerate ? degenerate_run + 1 : 0;
      if (degenerate_run > 50) bland = true;
    }
  }
}

Result Simplex::run() {
  Result res;
  if (!build()) {
    res.status = Status::Infeasible;
    res.value = ExtRat::infinity();
    return res;
  }

  // Phase 1: minimize the sum of artificials.
  obj_.assign(num_cols_ + 1, Rational(0));
  bool any_artificial = false;
  for (std::size_t r = 0; r < tab_.size(); ++r) {
    if (basis_[r] < num_cols_) continue;
    any_artificial = true;
    for (int j = 0; j <= num_cols_; ++j)
      if (!tab_[r][j].is_zero()) obj_[j] -= tab_[r][j];
  }
  if (any_artificial) {
    iterate();
    if (!obj_[num_cols_].is_zero()) {
      res.status = Status::Infeasible;
      res.value = ExtRat::infinity();
      res.pivots = pivots_;
      return res;
    }
    // Drive remaining (zero-valued) artificials out of the basis; drop redundant rows.
    std::vector<char> drop(tab_.size(), 0);
    for (std::size_t r = 0; r < tab_.size(); ++r) {
      if (basis_[r] < num_cols_) continue;
      int q = -1;
      for (int j = 0; j < num_cols_ && q < 0; ++j)
        if (!tab_[r][j].is_zero()) q = j;
      if (q >= 0)
        pivot(int(r), q);
      else
        drop[r] = 1;
    }
    std::vector<std::vector<Rational>> kept;
    std::vector<int> kept_basis;
    for (std::size_t r = 0; r < tab_.size(); ++r) {
      if (drop[r]) continue;
      kept.push_back(std::move(tab_[r]));
      kept_basis.push_back(basis_[r]);
    }
    tab_ = std::move(kept);
    basis_ = std::move(kept_basis);
  }

  // Phase 2.
  std::vector<Rational> cost(num_cols_);
  Rational constant;
  for (int j = 0; j < lp_.num_vars(); ++j) {
    const Rational& c = lp_.objective()[j];
    if (c.is_zero()) continue;
    constant += c * var_map_[j].offset;
    for (auto [col, sgn] : var_map_[j].cols) cost[col] += sgn > 0 ? c : -c;
  }
  obj_.assign(num_cols_ + 1, Rational(0));
  for (int j = 0; j < num_cols_; ++j) obj_[j] = cost[j];
  for (std::size_t r = 0; r < tab_.size(); ++r) {
    const Rational cb = cost[basis_[r]];
    if (cb.is_zero()) continue;
    for (int j = 0; j <= num_cols_; ++j)
      if (!tab_[r][j].is_zero()) obj_[j].sub_mul(cb, tab_[r][j]);
  }
  if (!iterate()) {
    res.status = Status::Unbounded;
    res.pivots = pivots_;
    return res;
  }

  std::vector<Rational> col_value(num_cols_);
  for (std::size_t r = 0; r < tab_.size(); ++r) col_value[basis_[r]] = tab_[r][num_cols_];
  res.point.assign(lp_.num_vars(), Rational(0));
  for (int j = 0; j < lp_.num_vars(); ++j) {
    Rational v = var_map_[j].offset;
    for (auto [col, sgn] : var_map_[j].cols) {
      if (sgn > 0)
        v += col_value[col];
      else
        v -= col_value[col];
    }
    res.point[j] = std::move(v);
  }
  res.status = Status::Optimal;
  res.value = lp_.objective_at(res.point);
  res.pivots = pivots_;
  if (res.value != ExtRat(constant - obj_[num_cols_]))
    throw std::logic_error("simplex objective bookkeeping disagrees with the recomputed value");
  return res;
}

}  // namespace

Result solve(const LinearProgram& lp, const Options& options) {
  for (const Row& r : lp.rows())
    for (const auto& t : r.terms)
      if (t.first < 0 || t.first >= lp.num_vars()) throw InputError("malformed LP row");
  Simplex s(lp, options);
  Result res = s.run();
  if (res.status == Status::Optimal && !check_point(lp, res.point).ok)
    throw std::logic_error("simplex returned a point violating the LP");
  return res;
}

}  // namespace vcsp::lp
