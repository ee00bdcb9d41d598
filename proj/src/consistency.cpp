#include "vcsp/consistency.hpp"

#include <algorithm>
#include <deque>

#include "vcsp/error.hpp"

namespace vcsp {

namespace {

// For each σ over X_i, the index of its projection onto X_j.
std::vector<std::uint32_t> projection_map(const sa::Scope& xi, const sa::Scope& xj, int d) {
  const std::vector<int> pos = sa::positions_in(xj, xi);
  const std::uint64_t count = power(d, int(xi.size()));
  std::vector<std::uint32_t> out(count);
  Tuple t(xi.size(), 0);
  for (std::uint64_t s = 0; s < count; ++s) {
    std::uint64_t idx = 0;
    for (int p : pos) idx = idx * d + t[p];
    out[s] = std::uint32_t(idx);
    int c = int(xi.size()) - 1;
    while (c >= 0 && ++t[c] == d) t[c--] = 0;
  }
  return out;
}

struct Pair {
  std::size_t sub, sup;
  std::vector<std::uint32_t> proj;
};

}  // namespace

MinimalityState kl_minimality(const Instance& instance, int k, int l, PropagationOrder order) {
  if (k < 1 || k > l) throw InputError("minimality levels need 1 <= k <= l");
  if (l > instance.num_vars()) throw InputError("minimality level l exceeds the number of variables");
  for (const auto& c : instance.constraints())
    if (!instance.relation_of(c).is_crisp()) throw InputError("minimality needs a crisp instance");
  const int d = instance.domain_size();

  MinimalityState st{sa::ScopeIndex(instance, l), {}, false, 0};
  const auto& index = st.index;
  st.allowed.resize(index.size());
  for (std::size_t i = 0; i < index.size(); ++i) {
    const std::uint64_t count = power(d, int(index.scope(i).size()));
    auto& p = st.allowed[i];
    p.assign(count, true);
    if (!index.constraints_at(i).empty())
      for (std::uint64_t s = 0; s < count; ++s) p[s] = sa::scope_assignment_feasible(instance, index, i, s);
  }

  std::vector<Pair> pairs;
  index.for_each_pair(k, [&](std::size_t j, std::size_t i) {
    pairs.push_back({j, i, projection_map(index.scope(i), index.scope(j), d)});
  });
  std::vector<std::vector<std::size_t>> touching(index.size());
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    touching[pairs[p].sub].push_back(p);
    touching[pairs[p].sup].push_back(p);
  }

  std::deque<std::size_t> queue;
  std::vector<bool> queued(pairs.size(), true);
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    if (order == PropagationOrder::Fifo)
      queue.push_back(p);
    else
      queue.push_front(p);
  }
  auto changed = [&](std::size_t scope) {
    for (std::size_t q : touching[scope])
      if (!queued[q]) {
        queued[q] = true;
        if (order == PropagationOrder::Fifo)
          queue.push_back(q);
        else
          queue.push_front(q);
      }
  };

  while (!queue.empty()) {
    const std::size_t p = queue.front();
    queue.pop_front();
    queued[p] = false;
    const Pair& pr = pairs[p];
    auto& sup = st.allowed[pr.sup];
    auto& sub = st.allowed[pr.sub];
    bool sup_changed = false;
    std::vector<bool> seen(sub.size(), false);
    for (std::size_t s = 0; s < sup.size(); ++s) {
      if (!sup[s]) continue;
      if (!sub[pr.proj[s]]) {
        sup[s] = false;
        sup_changed = true;
      } else {
        seen[pr.proj[s]] = true;
      }
    }
    bool sub_changed = false;
    for (std::size_t t = 0; t < sub.size(); ++t)
      if (sub[t] && !seen[t]) {
        sub[t] = false;
        sub_changed = true;
      }
    ++st.revisions;
    if (sup_changed) changed(pr.sup);
    if (sub_changed) changed(pr.sub);
  }

  for (const auto& p : st.allowed)
    if (std::find(p.begin(), p.end(), true) == p.end()) {
      st.empty = true;
      break;
    }
  return st;
}

std::string check_minimal(const MinimalityState& state, int k) {
  const int d = state.index.domain_size();
  std::string violation;
  state.index.for_each_pair(k, [&](std::size_t j, std::size_t i) {
    if (!violation.empty()) return;
    auto proj = projection_map(state.index.scope(i), state.index.scope(j), d);
    std::vector<bool> image(state.allowed[j].size(), false);
    for (std::size_t s = 0; s < proj.size(); ++s)
      if (state.allowed[i][s]) image[proj[s]] = true;
    if (image != state.allowed[j]) violation = "pair (" + std::to_string(j) + ", " + std::to_string(i) + ") not minimal";
  });
  return violation;
}

}  // namespace vcsp
