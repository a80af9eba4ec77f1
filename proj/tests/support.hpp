#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "vhetcs/optimize.hpp"
#include "vhetcs/power.hpp"
#include "vhetcs/rng.hpp"

namespace vhetcs::testing {

inline constexpr int kCases = 10000;

// Random loads view with n small cells; loads up to `fill` of capacity and a
// random permutation of the other BSs as each cell's preference.
inline LoadsView random_view(Rng& rng, int n, double fill = 1.0, LoadMode mode = LoadMode::kOracle) {
  LoadsView v;
  v.mode = mode;
  for (int j = 0; j <= n; ++j) {
    const double cap = j == n ? 175.0 : 250.0;
    v.capacity_rb.push_back(cap);
    v.load_rb.push_back(rng.uniform() < 0.1 ? 0.0 : rng.uniform(0.0, fill * cap));
  }
  for (int k = 0; k < n; ++k) {
    std::vector<int> others;
    for (int j = 0; j <= n; ++j)
      if (j != k) others.push_back(j);
    for (std::size_t i = others.size(); i > 1; --i) {
      const auto r = static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(i) - 1));
      std::swap(others[i - 1], others[r]);
    }
    v.preference.push_back(others);
  }
  return v;
}

inline CostModel default_costs(int n) {
  CostModel m;
  m.sbs.assign(static_cast<std::size_t>(n), PowerParams::small_cell());
  m.haps = PowerParams::haps();
  m.penalty = 1e9;
  return m;
}

// Naive exhaustive search written independently of the library: each policy
// is a bitmask with bit (n-1-k) for cell k, loads are moved cell by cell into
// active recipients and the closed-form power is summed HAPS first.
struct NaiveChoice {
  unsigned mask = 0;
  double cost = 0.0;
  bool feasible = false;
};

inline NaiveChoice naive_es(const LoadsView& v, const CostModel& m) {
  const int n = static_cast<int>(v.load_rb.size()) - 1;
  NaiveChoice best;
  bool have = false;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    auto active = [&](int j) { return j == n || ((mask >> (n - 1 - j)) & 1u); };
    std::vector<double> carried(v.load_rb.size(), 0.0);
    for (int j = 0; j <= n; ++j)
      if (active(j)) carried[static_cast<std::size_t>(j)] = v.load_rb[static_cast<std::size_t>(j)];
    double lost = 0.0;
    for (int k = 0; k < n; ++k) {
      if (active(k)) continue;
      double left = v.load_rb[static_cast<std::size_t>(k)];
      for (int j : v.preference[static_cast<std::size_t>(k)]) {
        if (!active(j)) continue;
        const double room = v.capacity_rb[static_cast<std::size_t>(j)] - carried[static_cast<std::size_t>(j)];
        const double moved = room > 0 ? (room < left ? room : left) : 0.0;
        carried[static_cast<std::size_t>(j)] += moved;
        left -= moved;
      }
      lost += left;
    }
    bool ok = lost <= 1e-9;
    double p = 0.0;
    const double haps_rho = carried[static_cast<std::size_t>(n)] / v.capacity_rb[static_cast<std::size_t>(n)];
    ok = ok && haps_rho <= 1.0 + 1e-12;
    p += m.haps.p_const_w + m.haps.slope * haps_rho * m.haps.p_max_tx_w;
    for (int k = 0; k < n; ++k) {
      const auto& q = m.sbs[static_cast<std::size_t>(k)];
      if (active(k)) {
        const double rho = carried[static_cast<std::size_t>(k)] / v.capacity_rb[static_cast<std::size_t>(k)];
        ok = ok && rho <= 1.0 + 1e-12;
        p += q.p_const_w + q.slope * rho * q.p_max_tx_w;
      } else {
        p += q.p_sleep_w;
      }
    }
    const double cost = ok ? p : m.penalty;
    if (!have || cost < best.cost) {
      best = {mask, cost, ok};
      have = true;
    }
  }
  return best;
}

}  // namespace vhetcs::testing
