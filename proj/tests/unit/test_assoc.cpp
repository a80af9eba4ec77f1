#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include <stdexcept>

#include "vhetcs/assoc.hpp"

using namespace vhetcs;

namespace {

// Hand-built matrix: rows are UEs, sinr and rx given directly.
LinkMatrix matrix(const std::vector<std::vector<double>>& sinr, const std::vector<std::vector<double>>& rx,
                  std::vector<std::uint8_t> active) {
  const int e = static_cast<int>(sinr.size());
  const int nb = static_cast<int>(sinr.front().size());
  LinkMatrix m(e, nb);
  m.active = std::move(active);
  for (int i = 0; i < e; ++i)
    for (int j = 0; j < nb; ++j) {
      m.at(i, j).sinr_db = m.active[static_cast<std::size_t>(j)] ? sinr[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]
                                                                 : -std::numeric_limits<double>::infinity();
      m.at(i, j).rx_power_dbm = rx[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  return m;
}

std::vector<UserEquipment> users(const std::vector<int>& demands) {
  std::vector<UserEquipment> u(demands.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    u[i].id = static_cast<int>(i) + 1;
    u[i].demand_rb = demands[i];
  }
  return u;
}

}  // namespace

TEST_CASE("ranking is by SINR with ties to the lower index") {
  const auto m = matrix({{5.0, 9.0, 5.0}}, {{-50, -50, -50}}, {1, 1, 1});
  CHECK(sinr_ranking(m, 0) == std::vector<int>{1, 0, 2});
  const auto off = matrix({{5.0, 9.0, 5.0}}, {{-50, -50, -50}}, {1, 0, 1});
  CHECK(sinr_ranking(off, 0) == std::vector<int>{0, 2});
}

TEST_CASE("literal rule leaves a UE unconnected when its best BS is full") {
  const auto m = matrix({{10, 1}, {10, 1}, {10, 1}}, {{-60, -60}, {-60, -60}, {-60, -60}}, {1, 1});
  const auto ues = users({2, 2, 2});
  const std::vector<int> caps{4, 10};
  const auto lit = associate(ues, m, caps, AssociationRule::kLiteral);
  CHECK(lit.serving == std::vector<int>{0, 0, -1});
  CHECK(lit.unconnected == std::vector<int>{2});
  CHECK(lit.residual_capacity == std::vector<int>{0, 10});
  CHECK(lit.u(0, 0));
  CHECK_FALSE(lit.u(2, 0));
  const auto fb = associate(ues, m, caps, AssociationRule::kFallback);
  CHECK(fb.serving == std::vector<int>{0, 0, 1});
  CHECK(fb.unconnected.empty());
  CHECK(fb.residual_capacity == std::vector<int>{0, 8});
  CHECK(connected_count(fb) == 3);
}

TEST_CASE("a BS below the UE's sensitivity cannot serve it") {
  const auto m = matrix({{10, 1}}, {{-100, -90}}, {1, 1});
  const auto ues = users({1});
  const std::vector<int> caps{10, 10};
  CHECK(associate(ues, m, caps, AssociationRule::kLiteral).serving == std::vector<int>{-1});
  CHECK(associate(ues, m, caps, AssociationRule::kFallback).serving == std::vector<int>{1});
}

TEST_CASE("UEs are admitted in index order against running capacity") {
  const auto m = matrix({{3, 1}, {3, 1}}, {{-60, -60}, {-60, -60}}, {1, 1});
  const auto ues = users({3, 1});
  const std::vector<int> caps{3, 0};
  const auto r = associate(ues, m, caps, AssociationRule::kFallback);
  CHECK(r.serving == std::vector<int>{0, -1});
  const auto zero = associate(users({0}), matrix({{3, 1}}, {{-60, -60}}, {1, 1}), std::vector<int>{0, 0});
  CHECK(zero.serving == std::vector<int>{0});
}

TEST_CASE("association input shapes are checked") {
  const auto m = matrix({{3, 1}}, {{-60, -60}}, {1, 1});
  CHECK_THROWS_AS(associate(users({1, 1}), m, std::vector<int>{1, 1}), std::domain_error);
  CHECK_THROWS_AS(associate(users({1}), m, std::vector<int>{1}), std::domain_error);
}
