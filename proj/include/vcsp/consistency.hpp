#pragma once

#include <string>
#include <vector>

#include "vcsp/core.hpp"
#include "vcsp/sherali_adams.hpp"

namespace vcsp {

enum class PropagationOrder {
  Fifo,
  /// Initial pairs queued in reverse, processed last-in first-out.
  ReverseLifo,
};

/// Surviving partial assignments P_X for every scope of the index, as bitmaps over D^X.
struct MinimalityState {
  sa::ScopeIndex index;
  std::vector<std::vector<bool>> allowed;
  bool empty = false;
  std::uint64_t revisions = 0;
};

/// (k,ℓ)-minimality propagation on a crisp instance.
MinimalityState kl_minimality(const Instance& instance, int k, int l, PropagationOrder order = PropagationOrder::Fifo);

/// Independent check of the fixpoint equalities P_{X_j} = π_{X_j}(P_{X_i}); returns a violation or empty.
std::string check_minimal(const MinimalityState& state, int k);

}  // namespace vcsp
