#include "vhetcs/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace vhetcs {

void DemandProfile::validate() const {
  for (double p : psi)
    if (!(p > 0.0 && p <= 1.0)) throw std::domain_error("psi values must lie in (0, 1]");
  if (r_lower < 0 || r_upper < 0) throw std::domain_error("demand bounds must be non-negative");
  if (r_lower > r_upper) throw std::domain_error("demand lower bound exceeds upper bound");
}

void ErrorRegime::validate() const {
  if (lower < 0.0) throw std::domain_error("error regime lower bound must be non-negative");
  if (lower > upper) throw std::domain_error("error regime lower bound exceeds upper bound");
}

int draw_demand(const DemandProfile& profile, int slot, int uniform_draw) {
  if (slot < 0 || slot >= static_cast<int>(profile.psi.size()))
    throw std::domain_error("slot outside the demand profile");
  const double scaled = profile.psi[static_cast<std::size_t>(slot)] * uniform_draw;
  return static_cast<int>(std::floor(scaled + 0.5));
}

std::vector<LoadRecord> aggregate_load(std::span<const int> serving, std::span<const int> demands,
                                       std::span<const BaseStationSpec> stations) {
  if (serving.size() != demands.size()) throw std::domain_error("association and demand lengths differ");
  std::vector<LoadRecord> loads(stations.size());
  for (std::size_t j = 0; j < stations.size(); ++j) loads[j].bs_index = static_cast<int>(j);
  for (std::size_t i = 0; i < serving.size(); ++i) {
    const int j = serving[i];
    if (j < 0) continue;
    if (j >= static_cast<int>(stations.size())) throw std::domain_error("UE mapped to unknown BS");
    loads[static_cast<std::size_t>(j)].true_load_rb += demands[i];
  }
  for (std::size_t j = 0; j < stations.size(); ++j) {
    auto& rec = loads[j];
    rec.true_rho = stations[j].capacity_rb > 0
                       ? static_cast<double>(rec.true_load_rb) / stations[j].capacity_rb
                       : 0.0;
    rec.last_known_rho = rec.true_rho;
    rec.estimated_rho = rec.true_rho;
  }
  return loads;
}

double inject_error(double rho, const ErrorRegime& regime, double draw) {
  if (rho < 0.0) throw std::domain_error("load factor must be non-negative");
  if (draw < regime.lower || draw > regime.upper)
    throw std::domain_error("error draw outside the regime bounds");
  return rho * (1.0 + draw);
}

DemandProfile synth_profile(int num_slots, double peak, double trough) {
  if (num_slots < 1) throw std::domain_error("profile needs at least one slot");
  if (!(trough > 0.0 && trough <= peak && peak <= 1.0))
    throw std::domain_error("profile bounds must satisfy 0 < trough <= peak <= 1");

  DemandProfile profile;
  profile.psi.resize(static_cast<std::size_t>(num_slots));
  std::vector<double> raw(static_cast<std::size_t>(num_slots));
  auto sample = [&](auto wave) {
    for (int s = 0; s < num_slots; ++s)
      raw[static_cast<std::size_t>(s)] = wave(2.0 * std::numbers::pi * s / num_slots);
  };
  sample([](double a) { return std::sin(a); });
  auto [lo, hi] = std::minmax_element(raw.begin(), raw.end());
  if (*hi - *lo < 1e-12) {
    // Two samples of a sine land on its zero crossings; use the cosine phase.
    sample([](double a) { return std::cos(a); });
    std::tie(lo, hi) = std::minmax_element(raw.begin(), raw.end());
  }
  const double raw_lo = *lo;
  const double raw_hi = *hi;
  for (std::size_t s = 0; s < raw.size(); ++s) {
    if (raw_hi - raw_lo < 1e-12 || peak == trough) {
      profile.psi[s] = peak;
      continue;
    }
    const double t = (raw[s] - raw_lo) / (raw_hi - raw_lo);
    profile.psi[s] = std::clamp(trough + t * (peak - trough), trough, peak);
  }
  // Pin the extremes so the range is exact.
  if (raw_hi - raw_lo >= 1e-12 && peak != trough) {
    profile.psi[static_cast<std::size_t>(hi - raw.begin())] = peak;
    profile.psi[static_cast<std::size_t>(lo - raw.begin())] = trough;
  }
  return profile;
}

}  // namespace vhetcs
