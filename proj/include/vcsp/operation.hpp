#pragma once

#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vcsp/core.hpp"

namespace vcsp {

/// A total operation D^m -> D, tabulated in lexicographic argument order.
class Operation {
 public:
  Operation() = default;
  Operation(int arity, int domain_size, std::vector<int> table);

  static Operation projection(int arity, int domain_size, int index);
  static Operation from_function(int arity, int domain_size, const std::function<int(std::span<const int>)>& f);

  int arity() const { return arity_; }
  int domain_size() const { return domain_size_; }
  const std::vector<int>& table() const { return table_; }

  int operator()(std::span<const int> args) const { return table_[tuple_index(args, domain_size_)]; }
  int operator()(std::initializer_list<int> args) const {
    return (*this)(std::span<const int>(args.begin(), args.size()));
  }

  /// Applies the operation coordinatewise to m tuples of equal length.
  Tuple apply(const std::vector<const Tuple*>& tuples) const;

  bool is_idempotent() const;
  bool is_projection() const;

  friend bool operator==(const Operation&, const Operation&) = default;
  friend auto operator<=>(const Operation&, const Operation&) = default;

 private:
  int arity_ = 0;
  int domain_size_ = 2;
  std::vector<int> table_;
};

/// A probability distribution over m-ary operations with exact rational weights.
class FractionalOperation {
 public:
  FractionalOperation() = default;
  /// Weights must be positive and sum to exactly 1; operations must share arity and domain.
  explicit FractionalOperation(std::vector<std::pair<Operation, Rational>> weights);

  int arity() const { return weights_.front().first.arity(); }
  const std::vector<std::pair<Operation, Rational>>& weights() const { return weights_; }
  /// ω(f), zero when f is outside the support.
  Rational weight(const Operation& f) const;

 private:
  std::vector<std::pair<Operation, Rational>> weights_;
};

}  // namespace vcsp
