#pragma once

#include <span>
#include <string>
#include <vector>

#include "vhetcs/network.hpp"

namespace vhetcs {

// Per-slot demand shaping: r_i = round(psi_t * U{r_lower, r_upper}).
struct DemandProfile {
  std::vector<double> psi;
  int r_lower = 1;
  int r_upper = 3;

  // Throws std::domain_error if any psi lies outside (0, 1] or the bounds are
  // inverted or negative.
  void validate() const;
};

// Multiplicative estimation-error range: epsilon = rho * eps_v with eps_v
// drawn uniformly from [lower, upper].
struct ErrorRegime {
  std::string name;
  double lower = 0.0;
  double upper = 0.0;

  void validate() const;
  // Maps a unit draw u in [0, 1) onto [lower, upper].
  double scale(double unit_draw) const { return lower + (upper - lower) * unit_draw; }

  static ErrorRegime eps1() { return {"eps1", 0.20, 0.40}; }
  static ErrorRegime eps2() { return {"eps2", 0.60, 0.80}; }
  static ErrorRegime eps3() { return {"eps3", 1.80, 2.00}; }
};

struct LoadRecord {
  int bs_index = 0;
  int true_load_rb = 0;
  double true_rho = 0.0;
  double last_known_rho = 0.0;
  double estimated_rho = 0.0;
};

// Round-half-up of psi_slot * uniform_draw. Throws std::domain_error when
// the slot is outside the profile.
int draw_demand(const DemandProfile& profile, int slot, int uniform_draw);

// serving[i] is the BS index of UE i or -1. Loads only count connected UEs.
// Throws std::domain_error when a UE maps to a BS that does not exist.
std::vector<LoadRecord> aggregate_load(std::span<const int> serving, std::span<const int> demands,
                                       std::span<const BaseStationSpec> stations);

// rho * (1 + draw). Throws std::domain_error for negative rho or a draw
// outside the regime bounds.
double inject_error(double rho, const ErrorRegime& regime, double draw);

// Diurnal sinusoid starting at mid-rise, rescaled so the sampled series spans
// exactly [trough, peak]. Throws std::domain_error unless
// 0 < trough <= peak <= 1 and num_slots >= 1.
DemandProfile synth_profile(int num_slots, double peak, double trough);

}  // namespace vhetcs
