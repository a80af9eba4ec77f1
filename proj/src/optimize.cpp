#include "vhetcs/optimize.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace vhetcs {
namespace {

constexpr double kUnservedTolerance = 1e-9;
constexpr double kLoadTolerance = 1e-12;

// Bit k of a policy index, SBS 0 being the most significant bit.
bool bit_on(std::uint64_t index, int n, int k) { return ((index >> (n - 1 - k)) & 1U) != 0; }

template <typename OnFn>
double reallocate_into(OnFn&& is_on, const LoadsView& view, std::vector<double>& served,
                       std::vector<double>& offered) {
  const int n = view.num_sbs();
  const std::size_t nb = view.load_rb.size();
  served.assign(nb, 0.0);
  for (std::size_t j = 0; j < nb; ++j)
    if (static_cast<int>(j) == n || is_on(static_cast<int>(j))) served[j] = view.load_rb[j];
  offered = served;

  double unserved = 0.0;
  for (int k = 0; k < n; ++k) {
    if (is_on(k)) continue;
    double remaining = view.load_rb[static_cast<std::size_t>(k)];
    int first_recipient = -1;
    for (int j : view.preference[static_cast<std::size_t>(k)]) {
      if (j != n && !is_on(j)) continue;
      if (first_recipient < 0) first_recipient = j;
      if (remaining <= 0.0) break;
      const auto ju = static_cast<std::size_t>(j);
      const double room = std::max(0.0, view.capacity_rb[ju] - served[ju]);
      const double take = std::min(room, remaining);
      served[ju] += take;
      offered[ju] += take;
      remaining -= take;
    }
    if (remaining > 0.0) {
      unserved += remaining;
      if (first_recipient >= 0) offered[static_cast<std::size_t>(first_recipient)] += remaining;
    }
  }
  return unserved;
}

struct Scratch {
  std::vector<double> served;
  std::vector<double> offered;
};

struct Candidate {
  double cost = std::numeric_limits<double>::infinity();
  int active = std::numeric_limits<int>::max();
  std::uint64_t index = std::numeric_limits<std::uint64_t>::max();
  bool feasible = false;
};

bool better(const Candidate& a, const Candidate& b) {
  if (a.cost != b.cost) return a.cost < b.cost;
  if (a.active != b.active) return a.active < b.active;
  return a.index < b.index;
}

Candidate evaluate_index(std::uint64_t index, const LoadsView& view, const CostModel& model,
                         Scratch& scratch) {
  const int n = view.num_sbs();
  auto on = [index, n](int k) { return bit_on(index, n, k); };
  const double unserved = reallocate_into(on, view, scratch.served, scratch.offered);

  Candidate c;
  c.index = index;
  c.active = 0;
  bool feasible = unserved <= kUnservedTolerance;
  double power = 0.0;
  const auto hu = static_cast<std::size_t>(n);
  const double haps_rho = scratch.served[hu] / view.capacity_rb[hu];
  if (haps_rho > 1.0 + kLoadTolerance) feasible = false;
  power += bs_power(model.haps, haps_rho, true);
  for (int k = 0; k < n; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    if (on(k)) {
      ++c.active;
      const double rho = scratch.served[ku] / view.capacity_rb[ku];
      if (rho > 1.0 + kLoadTolerance) feasible = false;
      power += bs_power(model.sbs[ku], rho, true);
    } else {
      power += model.sbs[ku].p_sleep_w;
    }
  }
  c.feasible = feasible;
  c.cost = feasible ? power : model.penalty;
  return c;
}

void check_es_inputs(const LoadsView& view, const CostModel& model, const EsOptions& options) {
  view.validate();
  if (view.num_sbs() > options.max_sbs || view.num_sbs() > 62)
    throw std::domain_error("too many small cells for exhaustive search");
  if (model.sbs.size() != static_cast<std::size_t>(view.num_sbs()))
    throw std::domain_error("cost model does not match the number of small cells");
}

EsDecision finish(const Candidate& best, const LoadsView& view, const CostModel& model) {
  const int n = view.num_sbs();
  EsDecision d;
  if (!best.feasible) {
    d.fallback = true;
    d.best = evaluate_policy(Policy::all_on(n), view, model);
  } else {
    d.best = evaluate_policy(Policy::from_index(n, best.index), view, model);
  }
  return d;
}

}  // namespace

void LoadsView::validate() const {
  if (load_rb.empty()) throw std::domain_error("loads view must include the HAPS");
  if (capacity_rb.size() != load_rb.size()) throw std::domain_error("capacity and load lengths differ");
  if (preference.size() != static_cast<std::size_t>(num_sbs()))
    throw std::domain_error("one preference list per small cell is required");
  for (double c : capacity_rb)
    if (!(c > 0)) throw std::domain_error("capacities must be positive");
  for (double l : load_rb)
    if (l < 0) throw std::domain_error("loads must be non-negative");
}

std::vector<Policy> enumerate_policies(int n, int cap) {
  if (n < 0) throw std::domain_error("number of small cells must be non-negative");
  if (n > cap) throw std::domain_error("policy enumeration exceeds the configured cap");
  std::vector<Policy> out;
  out.reserve(std::size_t{1} << n);
  for (std::uint64_t i = 0; i < (std::uint64_t{1} << n); ++i) out.push_back(Policy::from_index(n, i));
  return out;
}

Reallocation reallocate_loads(const Policy& policy, const LoadsView& view) {
  view.validate();
  if (policy.size() != view.num_sbs()) throw std::domain_error("policy length mismatch");
  Reallocation r;
  r.unserved_rb = reallocate_into([&](int k) { return policy.on(k); }, view, r.served_rb, r.offered_rb);
  return r;
}

PolicyEvaluation evaluate_policy(const Policy& policy, const LoadsView& view, const CostModel& model) {
  const Reallocation r = reallocate_loads(policy, view);
  const int n = view.num_sbs();
  if (model.sbs.size() != static_cast<std::size_t>(n))
    throw std::domain_error("cost model does not match the number of small cells");

  PolicyEvaluation ev;
  ev.policy = policy;
  ev.predicted_rho.resize(r.served_rb.size());
  ev.offered_rho.resize(r.served_rb.size());
  bool feasible = r.unserved_rb <= kUnservedTolerance;
  for (std::size_t j = 0; j < r.served_rb.size(); ++j) {
    ev.predicted_rho[j] = r.served_rb[j] / view.capacity_rb[j];
    ev.offered_rho[j] = r.offered_rb[j] / view.capacity_rb[j];
    if (ev.predicted_rho[j] > 1.0 + kLoadTolerance) feasible = false;
  }
  std::vector<double> sbs_rho(ev.predicted_rho.begin(), ev.predicted_rho.begin() + n);
  const double haps_rho = ev.predicted_rho[static_cast<std::size_t>(n)];
  ev.power_w = view.mode == LoadMode::kEstimated
                   ? erroneous_network_power(policy, sbs_rho, haps_rho, model.sbs, model.haps)
                   : network_power(policy, sbs_rho, haps_rho, model.sbs, model.haps);
  ev.feasible = feasible;
  ev.cost = feasible ? ev.power_w : model.penalty;
  return ev;
}

EsDecision es_select(const LoadsView& view, const CostModel& model, const EsOptions& options) {
  check_es_inputs(view, model, options);
  const auto total = static_cast<std::int64_t>(std::uint64_t{1} << view.num_sbs());
  Candidate best;
#pragma omp parallel
  {
    Scratch scratch;
    Candidate local;
#pragma omp for schedule(static) nowait
    for (std::int64_t idx = 0; idx < total; ++idx) {
      const Candidate c = evaluate_index(static_cast<std::uint64_t>(idx), view, model, scratch);
      if (better(c, local)) local = c;
    }
#pragma omp critical(vhetcs_es_reduce)
    {
      if (better(local, best)) best = local;
    }
  }
  return finish(best, view, model);
}

EsDecision es_select_serial(const LoadsView& view, const CostModel& model, const EsOptions& options) {
  check_es_inputs(view, model, options);
  const std::uint64_t total = std::uint64_t{1} << view.num_sbs();
  Scratch scratch;
  Candidate best;
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    const Candidate c = evaluate_index(idx, view, model, scratch);
    if (better(c, best)) best = c;
  }
  return finish(best, view, model);
}

Policy a3_policy(int n) { return Policy::all_on(n); }

double relative_difference(double greater, double lower) {
  if (!(greater > 0.0) || lower < 0.0 || greater < lower)
    throw std::domain_error("relative difference needs greater >= lower >= 0 and greater > 0");
  return 100.0 * (greater - lower) / greater;
}

std::vector<std::vector<int>> cell_preferences(std::span<const BaseStationSpec> stations,
                                               const LinkMatrix& links,
                                               std::span<const int> native_serving,
                                               const RadioParams& radio) {
  const int nb = static_cast<int>(stations.size());
  const int n = nb - 1;
  std::vector<std::vector<int>> prefs(static_cast<std::size_t>(std::max(n, 0)));
  for (int k = 0; k < n; ++k) {
    std::vector<int> members;
    for (std::size_t i = 0; i < native_serving.size(); ++i)
      if (native_serving[i] == k) members.push_back(static_cast<int>(i));

    std::vector<double> score(static_cast<std::size_t>(nb), -std::numeric_limits<double>::infinity());
    const auto& site = stations[static_cast<std::size_t>(k)].position;
    for (int j = 0; j < nb; ++j) {
      if (j == k) continue;
      const auto& bs = stations[static_cast<std::size_t>(j)];
      if (members.empty()) {
        const Vec2 p{site.x, site.y};
        const auto cond = classify_link(bs, p, radio);
        const double pl = path_loss(link_distance_m(bs, p), radio.carrier_hz, cond, radio.extras, 0.0,
                                    radio.nlos_offset_db);
        score[static_cast<std::size_t>(j)] = bs.tx_power_dbm + bs.antenna_gain_dbi + radio.ue_gain_dbi - pl;
        continue;
      }
      std::vector<double> rx;
      rx.reserve(members.size());
      for (int i : members) rx.push_back(links.at(i, j).rx_power_dbm);
      std::sort(rx.begin(), rx.end());
      const std::size_t m = rx.size();
      score[static_cast<std::size_t>(j)] = m % 2 == 1 ? rx[m / 2] : 0.5 * (rx[m / 2 - 1] + rx[m / 2]);
    }
    auto& order = prefs[static_cast<std::size_t>(k)];
    for (int j = 0; j < nb; ++j)
      if (j != k) order.push_back(j);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return score[static_cast<std::size_t>(a)] > score[static_cast<std::size_t>(b)];
    });
  }
  return prefs;
}

}  // namespace vhetcs
