#include "vhetcs/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "vhetcs/rng.hpp"

namespace vhetcs {

double RadioParams::noise_floor_dbm() const {
  return thermal_density_dbm_hz + 10.0 * std::log10(rb_bandwidth_hz) + noise_figure_db;
}

int RadioParams::nominal_capacity_rb() const {
  return static_cast<int>(std::floor(bandwidth_hz / rb_bandwidth_hz + 1e-9));
}

double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }
double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }

namespace {

int grid_side(int n) {
  int g = 0;
  while (g * g < n) ++g;
  return g;
}

struct GridCell {
  int row;
  int col;
};

// Cells are taken centre-outward, each together with its reflection through
// the centre, so the layout is point-symmetric whenever the count allows it.
std::vector<GridCell> select_cells(int n) {
  if (n == 0) return {};
  const int g = grid_side(n);

  std::vector<GridCell> order;
  for (int r = 0; r < g; ++r)
    for (int c = 0; c < g; ++c) order.push_back({r, c});
  const double mid = (g - 1) / 2.0;
  auto dist2 = [mid](const GridCell& a) {
    return (a.row - mid) * (a.row - mid) + (a.col - mid) * (a.col - mid);
  };
  std::stable_sort(order.begin(), order.end(),
                   [&](const GridCell& a, const GridCell& b) { return dist2(a) < dist2(b); });

  std::vector<std::uint8_t> taken(static_cast<std::size_t>(g * g), 0);
  std::vector<GridCell> chosen;
  int remaining = n;
  for (const auto& cell : order) {
    if (remaining == 0) break;
    const int id = cell.row * g + cell.col;
    if (taken[static_cast<std::size_t>(id)]) continue;
    const GridCell mirror{g - 1 - cell.row, g - 1 - cell.col};
    const int mirror_id = mirror.row * g + mirror.col;
    if (mirror_id == id) {
      if (remaining % 2 == 1) {
        taken[static_cast<std::size_t>(id)] = 1;
        chosen.push_back(cell);
        --remaining;
      }
      continue;
    }
    taken[static_cast<std::size_t>(id)] = 1;
    chosen.push_back(cell);
    --remaining;
    if (remaining > 0) {
      taken[static_cast<std::size_t>(mirror_id)] = 1;
      chosen.push_back(mirror);
      --remaining;
    }
  }
  std::sort(chosen.begin(), chosen.end(), [g](const GridCell& a, const GridCell& b) {
    return a.row * g + a.col < b.row * g + b.col;
  });
  return chosen;
}

}  // namespace

std::vector<BaseStationSpec> place_network(int n, const Deployment& deployment,
                                           const RadioParams& radio,
                                           const PowerParams& sbs_power,
                                           const PowerParams& haps_power) {
  if (n < 0) throw std::domain_error("number of small cells must be non-negative");
  if (!(deployment.area_side_m > 0)) throw std::domain_error("area side must be positive");
  if (radio.sbs_tx_dbm > radio.max_tx_dbm || radio.haps_tx_dbm > radio.max_tx_dbm)
    throw std::domain_error("transmit power exceeds the maximum transmit power");
  if (!(deployment.haps_capacity_share > 0 && deployment.haps_capacity_share <= 1))
    throw std::domain_error("HAPS capacity share must lie in (0, 1]");

  const int g = grid_side(n);
  const double cell = g > 0 ? deployment.area_side_m / g : 0.0;
  const int nominal = radio.nominal_capacity_rb();

  std::vector<BaseStationSpec> out;
  out.reserve(static_cast<std::size_t>(n) + 1);
  for (const auto& c : select_cells(n)) {
    BaseStationSpec bs;
    bs.id = static_cast<int>(out.size()) + 1;
    bs.kind = BsKind::kSmallCell;
    bs.position = {(c.col + 0.5) * cell, (c.row + 0.5) * cell, deployment.sbs_height_m};
    bs.tx_power_dbm = radio.sbs_tx_dbm;
    bs.antenna_gain_dbi = radio.sbs_gain_dbi;
    bs.capacity_rb = nominal;
    bs.power = sbs_power;
    out.push_back(bs);
  }
  BaseStationSpec haps;
  haps.id = n + 1;
  haps.kind = BsKind::kHaps;
  haps.position = {deployment.area_side_m / 2.0, deployment.area_side_m / 2.0,
                   deployment.haps_altitude_m};
  haps.tx_power_dbm = radio.haps_tx_dbm;
  haps.antenna_gain_dbi = radio.haps_gain_dbi;
  haps.capacity_rb = static_cast<int>(std::floor(nominal * deployment.haps_capacity_share + 1e-9));
  haps.power = haps_power;
  out.push_back(haps);
  return out;
}

std::vector<BaseStationSpec> place_network(int n, double area_side_m, double haps_altitude_m) {
  Deployment d;
  d.area_side_m = area_side_m;
  d.haps_altitude_m = haps_altitude_m;
  return place_network(n, d, RadioParams{}, PowerParams::small_cell(), PowerParams::haps());
}

std::vector<UserEquipment> place_users(int count, double area_side_m, double rx_sensitivity_dbm,
                                       Rng& rng) {
  std::vector<UserEquipment> ues(static_cast<std::size_t>(std::max(count, 0)));
  for (int i = 0; i < count; ++i) {
    auto& ue = ues[static_cast<std::size_t>(i)];
    ue.id = i + 1;
    ue.position = {rng.uniform(0.0, area_side_m), rng.uniform(0.0, area_side_m)};
    ue.mobility = static_cast<MobilityMode>(rng.uniform_int(0, 3));
    ue.rx_sensitivity_dbm = rx_sensitivity_dbm;
  }
  return ues;
}

double free_space_loss_db(double distance_m, double frequency_hz) {
  if (!(distance_m > 0)) throw std::domain_error("distance must be positive");
  if (!(frequency_hz > 0)) throw std::domain_error("frequency must be positive");
  return 20.0 * std::log10(distance_m / 1000.0) + 20.0 * std::log10(frequency_hz / 1e6) + 32.44;
}

double path_loss(double distance_m, double frequency_hz, LinkCondition condition,
                 const ExtraLosses& extras, double shadow_db, double nlos_offset_db) {
  double basic = free_space_loss_db(distance_m, frequency_hz) + shadow_db;
  if (condition == LinkCondition::kNLoS) basic += nlos_offset_db;
  return basic + extras.gas_db + extras.scintillation_db + extras.entry_db;
}

double link_distance_m(const BaseStationSpec& bs, const Vec2& ue) {
  const double dx = bs.position.x - ue.x;
  const double dy = bs.position.y - ue.y;
  return std::sqrt(dx * dx + dy * dy + bs.position.z * bs.position.z);
}

LinkCondition classify_link(const BaseStationSpec& bs, const Vec2& ue, const RadioParams& radio) {
  if (bs.kind == BsKind::kHaps) return LinkCondition::kLoS;
  const double d2 = std::hypot(bs.position.x - ue.x, bs.position.y - ue.y);
  return d2 <= radio.los_radius_m ? LinkCondition::kLoS : LinkCondition::kNLoS;
}

LinkMatrix::LinkMatrix(int num_ues, int num_bs)
    : num_ues_(num_ues),
      num_bs_(num_bs),
      cells_(static_cast<std::size_t>(num_ues) * static_cast<std::size_t>(num_bs)) {}

namespace {

void fill_row(LinkMatrix& m, int i, std::span<const BaseStationSpec> stations,
              const UserEquipment& ue, std::span<const std::uint8_t> active,
              const RadioParams& radio, std::span<const double> shadow_normals,
              double noise_mw) {
  const int nb = static_cast<int>(stations.size());
  for (int j = 0; j < nb; ++j) {
    const auto& bs = stations[static_cast<std::size_t>(j)];
    auto& cell = m.at(i, j);
    cell.condition = classify_link(bs, ue.position, radio);
    const double shadow =
        radio.shadow_sigma_db(cell.condition) *
        shadow_normals[static_cast<std::size_t>(i) * stations.size() + static_cast<std::size_t>(j)];
    cell.path_loss_db = path_loss(link_distance_m(bs, ue.position), radio.carrier_hz,
                                  cell.condition, radio.extras, shadow, radio.nlos_offset_db);
    cell.rx_power_dbm = bs.tx_power_dbm + bs.antenna_gain_dbi + radio.ue_gain_dbi - cell.path_loss_db;
  }
  for (int j = 0; j < nb; ++j) {
    auto& cell = m.at(i, j);
    if (!active[static_cast<std::size_t>(j)]) {
      cell.sinr_db = -std::numeric_limits<double>::infinity();
      continue;
    }
    double interference = 0.0;
    for (int h = 0; h < nb; ++h)
      if (h != j && active[static_cast<std::size_t>(h)]) interference += dbm_to_mw(m.at(i, h).rx_power_dbm);
    cell.sinr_db = cell.rx_power_dbm - mw_to_dbm(interference + noise_mw);
  }
}

void check_matrix_inputs(std::span<const BaseStationSpec> stations,
                         std::span<const UserEquipment> ues, std::span<const std::uint8_t> active,
                         std::span<const double> shadow_normals) {
  if (active.size() != stations.size()) throw std::domain_error("active mask length mismatch");
  if (shadow_normals.size() != stations.size() * ues.size())
    throw std::domain_error("shadowing draw count mismatch");
}

}  // namespace

LinkMatrix compute_link_matrix(std::span<const BaseStationSpec> stations,
                               std::span<const UserEquipment> ues,
                               std::span<const std::uint8_t> active, const RadioParams& radio,
                               std::span<const double> shadow_normals) {
  check_matrix_inputs(stations, ues, active, shadow_normals);
  LinkMatrix m(static_cast<int>(ues.size()), static_cast<int>(stations.size()));
  m.active.assign(active.begin(), active.end());
  const double noise_mw = dbm_to_mw(radio.noise_floor_dbm());
  const int e = static_cast<int>(ues.size());
#pragma omp parallel for schedule(static)
  for (int i = 0; i < e; ++i)
    fill_row(m, i, stations, ues[static_cast<std::size_t>(i)], active, radio, shadow_normals, noise_mw);
  return m;
}

LinkMatrix compute_link_matrix_serial(std::span<const BaseStationSpec> stations,
                                      std::span<const UserEquipment> ues,
                                      std::span<const std::uint8_t> active,
                                      const RadioParams& radio,
                                      std::span<const double> shadow_normals) {
  check_matrix_inputs(stations, ues, active, shadow_normals);
  LinkMatrix m(static_cast<int>(ues.size()), static_cast<int>(stations.size()));
  m.active.assign(active.begin(), active.end());
  const double noise_mw = dbm_to_mw(radio.noise_floor_dbm());
  for (int i = 0; i < static_cast<int>(ues.size()); ++i)
    fill_row(m, i, stations, ues[static_cast<std::size_t>(i)], active, radio, shadow_normals, noise_mw);
  return m;
}

LinkBudget link_budget(int bs_index, const UserEquipment& ue,
                       std::span<const BaseStationSpec> stations,
                       std::span<const std::uint8_t> active, const RadioParams& radio,
                       std::span<const double> shadow_db, double noise_floor_dbm) {
  if (active.size() != stations.size() || shadow_db.size() != stations.size())
    throw std::domain_error("per-station input length mismatch");
  if (std::none_of(active.begin(), active.end(), [](std::uint8_t a) { return a != 0; }))
    throw std::domain_error("active set is empty");
  if (bs_index < 0 || bs_index >= static_cast<int>(stations.size()) ||
      !active[static_cast<std::size_t>(bs_index)])
    throw std::domain_error("station is not in the active set");

  auto rx_of = [&](std::size_t j, LinkBudget* out) {
    const auto& bs = stations[j];
    const LinkCondition cond = classify_link(bs, ue.position, radio);
    const double pl = path_loss(link_distance_m(bs, ue.position), radio.carrier_hz, cond,
                                radio.extras, shadow_db[j], radio.nlos_offset_db);
    const double rx = bs.tx_power_dbm + bs.antenna_gain_dbi + radio.ue_gain_dbi - pl;
    if (out) *out = {pl, cond, rx, 0.0};
    return rx;
  };

  LinkBudget lb;
  rx_of(static_cast<std::size_t>(bs_index), &lb);
  double interference = 0.0;
  for (std::size_t h = 0; h < stations.size(); ++h)
    if (static_cast<int>(h) != bs_index && active[h]) interference += dbm_to_mw(rx_of(h, nullptr));
  lb.sinr_db = lb.rx_power_dbm - mw_to_dbm(interference + dbm_to_mw(noise_floor_dbm));
  return lb;
}

}  // namespace vhetcs
