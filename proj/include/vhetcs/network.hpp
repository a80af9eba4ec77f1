#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "vhetcs/power.hpp"

namespace vhetcs {

class Rng;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

enum class BsKind { kSmallCell, kHaps };
enum class LinkCondition { kLoS, kNLoS };
enum class MobilityMode { kStationary, kPedestrian, kCyclist, kDriver };

// Additive loss terms on top of the basic path loss: atmospheric gases,
// scintillation and building entry.
struct ExtraLosses {
  double gas_db = 0.0;
  double scintillation_db = 0.0;
  double entry_db = 0.0;
  double total() const { return gas_db + scintillation_db + entry_db; }
};

struct RadioParams {
  double carrier_hz = 2.5e9;
  double bandwidth_hz = 50e6;
  double rb_bandwidth_hz = 200e3;
  double sbs_tx_dbm = 33.0;
  double haps_tx_dbm = 49.0;
  double max_tx_dbm = 49.0;
  double sbs_gain_dbi = 4.0;
  double haps_gain_dbi = 43.2;
  double ue_gain_dbi = 0.0;
  double sigma_los_db = 4.0;
  double sigma_nlos_db = 6.0;
  double nlos_offset_db = 20.0;
  double los_radius_m = 300.0;
  double thermal_density_dbm_hz = -174.0;
  double noise_figure_db = 7.0;
  double rx_sensitivity_dbm = -95.0;
  ExtraLosses extras;

  // Thermal noise over one RB plus the receiver noise figure.
  double noise_floor_dbm() const;
  int nominal_capacity_rb() const;
  double shadow_sigma_db(LinkCondition c) const {
    return c == LinkCondition::kLoS ? sigma_los_db : sigma_nlos_db;
  }
};

struct Deployment {
  double area_side_m = 1025.0;
  double haps_altitude_m = 20000.0;
  double sbs_height_m = 10.0;
  double haps_capacity_share = 0.7;
};

struct BaseStationSpec {
  int id = 0;  // 1-based; small cells first, the HAPS last
  BsKind kind = BsKind::kSmallCell;
  Vec3 position;
  double tx_power_dbm = 0.0;
  double antenna_gain_dbi = 0.0;
  int capacity_rb = 0;
  PowerParams power;
};

struct UserEquipment {
  int id = 0;  // 1-based
  Vec2 position;
  MobilityMode mobility = MobilityMode::kStationary;
  double rx_sensitivity_dbm = -95.0;
  int demand_rb = 0;
};

struct LinkBudget {
  double path_loss_db = 0.0;
  LinkCondition condition = LinkCondition::kLoS;
  double rx_power_dbm = 0.0;
  double sinr_db = 0.0;
};

double dbm_to_mw(double dbm);
double mw_to_dbm(double mw);

// n small cells on a centred square grid plus one HAPS over the centre. The
// returned vector holds the small cells in row-major grid order followed by
// the HAPS. Throws std::domain_error on negative n, non-positive side, or a
// transmit power above radio.max_tx_dbm.
std::vector<BaseStationSpec> place_network(int n, const Deployment& deployment,
                                           const RadioParams& radio,
                                           const PowerParams& sbs_power,
                                           const PowerParams& haps_power);
std::vector<BaseStationSpec> place_network(int n, double area_side_m, double haps_altitude_m);

// Uniform placement inside the square area; mobility modes drawn with equal
// probability.
std::vector<UserEquipment> place_users(int count, double area_side_m, double rx_sensitivity_dbm,
                                       Rng& rng);

double free_space_loss_db(double distance_m, double frequency_hz);

// L = L_b + L_g + L_s + L_e, where L_b is free-space loss plus the shadowing
// draw and, for NLoS, the clutter offset.
double path_loss(double distance_m, double frequency_hz, LinkCondition condition,
                 const ExtraLosses& extras, double shadow_db, double nlos_offset_db = 20.0);

LinkCondition classify_link(const BaseStationSpec& bs, const Vec2& ue, const RadioParams& radio);
double link_distance_m(const BaseStationSpec& bs, const Vec2& ue);

// Per-UE link quantities against every BS. Rows are UEs, columns are BSs in
// place_network order. SINR is only defined for active BSs (-inf otherwise).
class LinkMatrix {
 public:
  LinkMatrix() = default;
  LinkMatrix(int num_ues, int num_bs);

  int num_ues() const { return num_ues_; }
  int num_bs() const { return num_bs_; }
  LinkBudget& at(int ue, int bs) { return cells_[idx(ue, bs)]; }
  const LinkBudget& at(int ue, int bs) const { return cells_[idx(ue, bs)]; }
  std::span<const LinkBudget> row(int ue) const {
    return {cells_.data() + idx(ue, 0), static_cast<std::size_t>(num_bs_)};
  }
  std::vector<std::uint8_t> active;

 private:
  std::size_t idx(int ue, int bs) const {
    return static_cast<std::size_t>(ue) * static_cast<std::size_t>(num_bs_) + static_cast<std::size_t>(bs);
  }
  int num_ues_ = 0;
  int num_bs_ = 0;
  std::vector<LinkBudget> cells_;
};

// Shadowing draws are standard normal values (ue-major, ues x bs); each link
// scales its draw by the sigma of its LoS/NLoS condition.
LinkMatrix compute_link_matrix(std::span<const BaseStationSpec> stations,
                               std::span<const UserEquipment> ues,
                               std::span<const std::uint8_t> active, const RadioParams& radio,
                               std::span<const double> shadow_normals);
// Single-threaded reference for compute_link_matrix.
LinkMatrix compute_link_matrix_serial(std::span<const BaseStationSpec> stations,
                                      std::span<const UserEquipment> ues,
                                      std::span<const std::uint8_t> active,
                                      const RadioParams& radio,
                                      std::span<const double> shadow_normals);

// Link budget of one BS-UE pair with co-channel interference from every other
// active BS. shadow_db holds one shadowing value in dB per station. Throws
// std::domain_error when no station is active or bs_index is not active.
LinkBudget link_budget(int bs_index, const UserEquipment& ue,
                       std::span<const BaseStationSpec> stations,
                       std::span<const std::uint8_t> active, const RadioParams& radio,
                       std::span<const double> shadow_db, double noise_floor_dbm);

}  // namespace vhetcs
