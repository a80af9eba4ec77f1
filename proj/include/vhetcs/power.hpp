#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace vhetcs {

// EARTH-style linear power model of one base station.
struct PowerParams {
  double p_const_w = 0.0;   // constant power while ON
  double slope = 0.0;       // load-dependent slope
  double p_max_tx_w = 0.0;  // maximum transmit power
  double p_sleep_w = 0.0;   // sleep-mode power

  // Throws std::domain_error if any field is negative or p_sleep_w >= p_const_w.
  void validate() const;

  static PowerParams small_cell() { return {56.0, 2.6, 6.3, 39.0}; }
  static PowerParams haps() { return {130.0, 4.7, 20.0, 39.0}; }
};

// ON/OFF vector over the small cells. The HAPS is not part of a policy; it is
// always active. Bit k is SBS k; index() reads the vector as a binary number
// with SBS 0 as the most significant bit, so index order is the lexicographic
// order of the bit strings.
class Policy {
 public:
  Policy() = default;
  explicit Policy(std::vector<std::uint8_t> bits);

  static Policy all_on(int n) { return Policy(std::vector<std::uint8_t>(static_cast<std::size_t>(n), 1)); }
  static Policy all_off(int n) { return Policy(std::vector<std::uint8_t>(static_cast<std::size_t>(n), 0)); }
  static Policy from_index(int n, std::uint64_t index);
  // Parses "0101"; throws std::invalid_argument on other characters.
  static Policy from_string(const std::string& bits);

  int size() const { return static_cast<int>(bits_.size()); }
  bool on(int k) const { return bits_[static_cast<std::size_t>(k)] != 0; }
  void set(int k, bool on) { bits_[static_cast<std::size_t>(k)] = on ? 1 : 0; }
  int active_count() const;
  std::uint64_t index() const;
  std::string to_string() const;
  std::span<const std::uint8_t> bits() const { return bits_; }

  friend bool operator==(const Policy&, const Policy&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

// Power of one BS. Loads above 1 are used as given; feasibility is screened
// elsewhere. Throws std::domain_error for negative rho.
double bs_power(const PowerParams& params, double rho, bool is_on);

// P_N = P_H + sum_k [(P_C + xi rho_k P_max) beta_k + P_S (1 - beta_k)].
// Throws std::domain_error if the policy, load and parameter lengths disagree.
double network_power(const Policy& policy, std::span<const double> sbs_rhos, double haps_rho,
                     std::span<const PowerParams> sbs_params, const PowerParams& haps_params);

// Same closed form evaluated on estimated loads (rho + error) for the small
// cells. With zero error it is bit-identical to network_power.
double erroneous_network_power(const Policy& policy, std::span<const double> estimated_rhos,
                               double haps_rho, std::span<const PowerParams> sbs_params,
                               const PowerParams& haps_params);

double slot_energy(double power_w, double duration_s);

}  // namespace vhetcs
