#include <doctest.h>

#include <cmath>
#include <limits>
#include <set>
#include <utility>
#include <vector>

#include <stdexcept>

#include "vhetcs/network.hpp"
#include "vhetcs/rng.hpp"

using namespace vhetcs;

TEST_CASE("free-space loss at 20 km and 2.5 GHz") {
  CHECK(free_space_loss_db(20000.0, 2.5e9) == doctest::Approx(126.4194).epsilon(1e-6));
  const ExtraLosses extras{1.0, 2.2, 0.0};
  CHECK(path_loss(20000.0, 2.5e9, LinkCondition::kLoS, extras, 0.0) == doctest::Approx(129.6194).epsilon(1e-6));
  CHECK(path_loss(100.0, 2.5e9, LinkCondition::kNLoS, {}, 3.0) ==
        doctest::Approx(free_space_loss_db(100.0, 2.5e9) + 23.0));
  CHECK_THROWS_AS(free_space_loss_db(0.0, 2.5e9), std::domain_error);
}

TEST_CASE("noise floor and capacities") {
  const RadioParams r;
  CHECK(r.noise_floor_dbm() == doctest::Approx(-113.9897).epsilon(1e-6));
  CHECK(r.nominal_capacity_rb() == 250);
  const auto stations = place_network(4, 1025.0, 20000.0);
  REQUIRE(stations.size() == 5);
  CHECK(stations[0].capacity_rb == 250);
  CHECK(stations[4].capacity_rb == 175);
  CHECK(stations[4].kind == BsKind::kHaps);
  CHECK(stations[4].id == 5);
}

TEST_CASE("dBm conversions") {
  CHECK(dbm_to_mw(0.0) == 1.0);
  CHECK(dbm_to_mw(30.0) == doctest::Approx(1000.0));
  CHECK(mw_to_dbm(100.0) == doctest::Approx(20.0));
}

TEST_CASE("four small cells sit at the centres of a 2x2 grid") {
  const auto s = place_network(4, 1025.0, 20000.0);
  const double a = 1025.0 / 4, b = 3 * 1025.0 / 4;
  const std::vector<std::pair<double, double>> expect{{a, a}, {b, a}, {a, b}, {b, b}};
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(s[k].position.x == doctest::Approx(expect[k].first));
    CHECK(s[k].position.y == doctest::Approx(expect[k].second));
    CHECK(s[k].position.z == 10.0);
  }
  CHECK(s[4].position.x == 512.5);
  CHECK(s[4].position.z == 20000.0);
}

TEST_CASE("eight small cells use a 3x3 grid without its centre") {
  const auto s = place_network(8, 1025.0, 20000.0);
  REQUIRE(s.size() == 9);
  std::set<std::pair<int, int>> cells;
  for (int k = 0; k < 8; ++k) {
    const int col = static_cast<int>(s[static_cast<std::size_t>(k)].position.x / (1025.0 / 3));
    const int row = static_cast<int>(s[static_cast<std::size_t>(k)].position.y / (1025.0 / 3));
    cells.insert({row, col});
  }
  CHECK(cells.size() == 8);
  CHECK(cells.count({1, 1}) == 0);
}

TEST_CASE("placement is point-symmetric for even counts") {
  for (int n : {2, 4, 6, 8, 10, 16}) {
    const auto s = place_network(n, 1000.0, 20000.0);
    for (int k = 0; k < n; ++k) {
      const auto& p = s[static_cast<std::size_t>(k)].position;
      bool mirrored = false;
      for (int h = 0; h < n; ++h) {
        const auto& q = s[static_cast<std::size_t>(h)].position;
        if (std::abs(p.x + q.x - 1000.0) < 1e-9 && std::abs(p.y + q.y - 1000.0) < 1e-9) mirrored = true;
      }
      CHECK(mirrored);
    }
  }
}

TEST_CASE("transmit power above the maximum is rejected") {
  RadioParams r;
  r.sbs_tx_dbm = 50.0;
  CHECK_THROWS_AS(place_network(4, Deployment{}, r, PowerParams::small_cell(), PowerParams::haps()),
                  std::domain_error);
  CHECK_THROWS_AS(place_network(-1, 1025.0, 20000.0), std::domain_error);
}

TEST_CASE("link condition: HAPS always LoS, SBS LoS within 300 m") {
  const auto s = place_network(4, 1025.0, 20000.0);
  const RadioParams r;
  const Vec2 near{s[0].position.x + 299.0, s[0].position.y};
  const Vec2 far{s[0].position.x + 301.0, s[0].position.y};
  CHECK(classify_link(s[0], near, r) == LinkCondition::kLoS);
  CHECK(classify_link(s[0], far, r) == LinkCondition::kNLoS);
  CHECK(classify_link(s[4], {0.0, 0.0}, r) == LinkCondition::kLoS);
}

TEST_CASE("HAPS-only link budget directly below the platform") {
  const auto s = place_network(0, 1025.0, 20000.0);
  REQUIRE(s.size() == 1);
  const RadioParams r;
  UserEquipment ue;
  ue.position = {512.5, 512.5};
  const std::vector<std::uint8_t> active{1};
  const std::vector<double> shadow{0.0};
  const LinkBudget lb = link_budget(0, ue, s, active, r, shadow, r.noise_floor_dbm());
  CHECK(lb.rx_power_dbm == doctest::Approx(-34.2194).epsilon(1e-6));
  CHECK(lb.sinr_db == doctest::Approx(79.7703).epsilon(1e-6));
}

TEST_CASE("link budget sums co-channel interference in linear units") {
  const auto s = place_network(4, 1025.0, 20000.0);
  const RadioParams r;
  UserEquipment ue;
  ue.position = {300.0, 200.0};
  const std::vector<std::uint8_t> active{1, 0, 1, 0, 1};
  const std::vector<double> shadow(5, 0.0);
  auto rx = [&](int j) {
    const auto& bs = s[static_cast<std::size_t>(j)];
    const double dx = bs.position.x - ue.position.x, dy = bs.position.y - ue.position.y;
    const double d = std::sqrt(dx * dx + dy * dy + bs.position.z * bs.position.z);
    double loss = 20 * std::log10(d / 1000) + 20 * std::log10(2500.0) + 32.44;
    if (bs.kind == BsKind::kSmallCell && std::hypot(dx, dy) > 300.0) loss += 20.0;
    return bs.tx_power_dbm + bs.antenna_gain_dbi - loss;
  };
  const double noise = std::pow(10.0, (-174 + 10 * std::log10(200e3) + 7) / 10);
  const double interference = std::pow(10.0, rx(2) / 10) + std::pow(10.0, rx(4) / 10);
  const double expected = rx(0) - 10 * std::log10(interference + noise);
  const LinkBudget lb = link_budget(0, ue, s, active, r, shadow, r.noise_floor_dbm());
  CHECK(lb.rx_power_dbm == doctest::Approx(rx(0)).epsilon(1e-12));
  CHECK(lb.sinr_db == doctest::Approx(expected).epsilon(1e-12));
  CHECK_THROWS_AS(link_budget(1, ue, s, active, r, shadow, r.noise_floor_dbm()), std::domain_error);
  const std::vector<std::uint8_t> none(5, 0);
  CHECK_THROWS_AS(link_budget(0, ue, s, none, r, shadow, r.noise_floor_dbm()), std::domain_error);
}

TEST_CASE("link matrix matches per-pair link budgets and the serial reference") {
  const auto s = place_network(4, 1025.0, 20000.0);
  const RadioParams r;
  Rng rng(7);
  const auto ues = place_users(60, 1025.0, -95.0, rng);
  std::vector<double> normals(ues.size() * s.size());
  for (auto& x : normals) x = rng.standard_normal();
  const std::vector<std::uint8_t> active{1, 1, 0, 1, 1};
  const LinkMatrix m = compute_link_matrix(s, ues, active, r, normals);
  const LinkMatrix ref = compute_link_matrix_serial(s, ues, active, r, normals);
  for (int i = 0; i < 60; ++i) {
    std::vector<double> shadow_db(s.size());
    for (std::size_t j = 0; j < s.size(); ++j) {
      const auto cond = classify_link(s[j], ues[static_cast<std::size_t>(i)].position, r);
      shadow_db[j] = r.shadow_sigma_db(cond) * normals[static_cast<std::size_t>(i) * s.size() + j];
    }
    for (int j = 0; j < 5; ++j) {
      CHECK(m.at(i, j).rx_power_dbm == ref.at(i, j).rx_power_dbm);
      CHECK(m.at(i, j).sinr_db == ref.at(i, j).sinr_db);
      if (!active[static_cast<std::size_t>(j)]) {
        CHECK(m.at(i, j).sinr_db == -std::numeric_limits<double>::infinity());
        continue;
      }
      const LinkBudget lb = link_budget(j, ues[static_cast<std::size_t>(i)], s, active, r, shadow_db, r.noise_floor_dbm());
      CHECK(m.at(i, j).sinr_db == doctest::Approx(lb.sinr_db).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(compute_link_matrix(s, ues, active, r, std::vector<double>(3)), std::domain_error);
}

TEST_CASE("users are placed inside the area with 1-based ids") {
  Rng rng(3);
  const auto ues = place_users(500, 1025.0, -95.0, rng);
  int modes[4] = {0, 0, 0, 0};
  for (std::size_t i = 0; i < ues.size(); ++i) {
    CHECK(ues[i].id == static_cast<int>(i) + 1);
    CHECK(ues[i].position.x >= 0.0);
    CHECK(ues[i].position.x <= 1025.0);
    CHECK(ues[i].position.y >= 0.0);
    CHECK(ues[i].position.y <= 1025.0);
    ++modes[static_cast<int>(ues[i].mobility)];
  }
  for (int c : modes) CHECK(c > 80);
}
