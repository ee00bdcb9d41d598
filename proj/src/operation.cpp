#include "vcsp/operation.hpp"

#include "vcsp/error.hpp"

namespace vcsp {

Operation::Operation(int arity, int domain_size, std::vector<int> table)
    : arity_(arity), domain_size_(domain_size), table_(std::move(table)) {
  if (arity < 1) throw InputError("operation arity must be positive");
  if (domain_size < 1) throw InputError("operation domain size must be positive");
  if (table_.size() != power(domain_size, arity)) throw InputError("operation table has the wrong size");
  for (int v : table_)
    if (v < 0 || v >= domain_size) throw InputError("operation value outside the domain");
}

Operation Operation::projection(int arity, int domain_size, int index) {
  if (index < 0 || index >= arity) throw InputError("projection index out of range");
  std::vector<int> t(power(domain_size, arity));
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = tuple_at(i, arity, domain_size)[index];
  return Operation(arity, domain_size, std::move(t));
}

Operation Operation::from_function(int arity, int domain_size, const std::function<int(std::span<const int>)>& f) {
  std::vector<int> t(power(domain_size, arity));
  for (std::size_t i = 0; i < t.size(); ++i) {
    Tuple args = tuple_at(i, arity, domain_size);
    t[i] = f(args);
  }
  return Operation(arity, domain_size, std::move(t));
}

Tuple Operation::apply(const std::vector<const Tuple*>& tuples) const {
  if (int(tuples.size()) != arity_) throw InputError("apply: wrong number of tuples");
  const std::size_t len = tuples.front()->size();
  Tuple out(len);
  std::vector<int> args(arity_);
  for (std::size_t c = 0; c < len; ++c) {
    for (int j = 0; j < arity_; ++j) args[j] = (*tuples[j])[c];
    out[c] = (*this)(args);
  }
  return out;
}

bool Operation::is_idempotent() const {
  std::vector<int> args(arity_);
  for (int a = 0; a < domain_size_; ++a) {
    std::fill(args.begin(), args.end(), a);
    if ((*this)(args) != a) return false;
  }
  return true;
}

bool Operation::is_projection() const {
  for (int i = 0; i < arity_; ++i)
    if (*this == projection(arity_, domain_size_, i)) return true;
  return false;
}

FractionalOperation::FractionalOperation(std::vector<std::pair<Operation, Rational>> weights)
    : weights_(std::move(weights)) {
  if (weights_.empty()) throw InputError("fractional operation needs a non-empty support");
  Rational total;
  const auto& first = weights_.front().first;
  for (const auto& [f, w] : weights_) {
    if (w.sign() <= 0) throw InputError("fractional operation weights must be positive");
    if (f.arity() != first.arity() || f.domain_size() != first.domain_size())
      throw InputError("fractional operation mixes arities or domains");
    total += w;
  }
  if (total != Rational(1)) throw InputError("fractional operation weights must sum to 1");
}

Rational FractionalOperation::weight(const Operation& f) const {
  Rational w;
  for (const auto& [g, x] : weights_)
    if (g == f) w += x;
  return w;
}

}  // namespace vcsp
