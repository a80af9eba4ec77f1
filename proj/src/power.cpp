#include "vhetcs/power.hpp"

#include <stdexcept>

namespace vhetcs {

void PowerParams::validate() const {
  if (p_const_w < 0 || slope < 0 || p_max_tx_w < 0 || p_sleep_w < 0)
    throw std::domain_error("power parameters must be non-negative");
  if (!(p_sleep_w < p_const_w))
    throw std::domain_error("sleep power must be below constant power");
}

Policy::Policy(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  for (auto& b : bits_) b = b ? 1 : 0;
}

Policy Policy::from_index(int n, std::uint64_t index) {
  if (n < 0 || n > 63) throw std::domain_error("policy length out of range");
  if (n < 63 && index >= (std::uint64_t{1} << n)) throw std::domain_error("policy index out of range");
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) bits[static_cast<std::size_t>(k)] = (index >> (n - 1 - k)) & 1U;
  return Policy(std::move(bits));
}

Policy Policy::from_string(const std::string& s) {
  std::vector<std::uint8_t> bits;
  bits.reserve(s.size());
  for (char c : s) {
    if (c != '0' && c != '1') throw std::invalid_argument("policy string must contain only 0 and 1: " + s);
    bits.push_back(c == '1' ? 1 : 0);
  }
  return Policy(std::move(bits));
}

int Policy::active_count() const {
  int count = 0;
  for (auto b : bits_) count += b;
  return count;
}

std::uint64_t Policy::index() const {
  std::uint64_t idx = 0;
  for (auto b : bits_) idx = (idx << 1) | b;
  return idx;
}

std::string Policy::to_string() const {
  std::string s;
  s.reserve(bits_.size());
  for (auto b : bits_) s.push_back(b ? '1' : '0');
  return s;
}

double bs_power(const PowerParams& params, double rho, bool is_on) {
  if (rho < 0) throw std::domain_error("load factor must be non-negative");
  if (!is_on) return params.p_sleep_w;
  return params.p_const_w + params.slope * rho * params.p_max_tx_w;
}

double network_power(const Policy& policy, std::span<const double> sbs_rhos, double haps_rho,
                     std::span<const PowerParams> sbs_params, const PowerParams& haps_params) {
  const auto n = static_cast<std::size_t>(policy.size());
  if (sbs_rhos.size() != n || sbs_params.size() != n)
    throw std::domain_error("policy, load and parameter lengths disagree");
  double total = bs_power(haps_params, haps_rho, true);
  for (std::size_t k = 0; k < n; ++k) total += bs_power(sbs_params[k], sbs_rhos[k], policy.on(static_cast<int>(k)));
  return total;
}

double erroneous_network_power(const Policy& policy, std::span<const double> estimated_rhos,
                               double haps_rho, std::span<const PowerParams> sbs_params,
                               const PowerParams& haps_params) {
  return network_power(policy, estimated_rhos, haps_rho, sbs_params, haps_params);
}

double slot_energy(double power_w, double duration_s) {
  if (power_w < 0 || duration_s < 0) throw std::domain_error("power and duration must be non-negative");
  return power_w * duration_s;
}

}  // namespace vhetcs
