#include <doctest.h>

#include <string>

#include <stdexcept>

#include "vhetcs/config.hpp"

using namespace vhetcs;
using nlohmann::json;

namespace {

std::string error_of(const json& j) {
  try {
    (void)parse_config(j);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("an empty object yields the defaults") {
  const ExperimentConfig c = parse_config(json::object());
  const ScenarioConfig& b = c.campaign.base;
  CHECK(b.num_sbs == 4);
  CHECK(b.num_slots == 50);
  CHECK(b.slot_duration_s == 1.0);
  CHECK(b.deployment.area_side_m == 1025.0);
  CHECK(b.deployment.haps_altitude_m == 20000.0);
  CHECK(b.radio.carrier_hz == 2.5e9);
  CHECK(b.radio.bandwidth_hz == 50e6);
  CHECK(b.radio.sbs_tx_dbm == 33.0);
  CHECK(b.radio.haps_tx_dbm == 49.0);
  CHECK(b.radio.haps_gain_dbi == 43.2);
  CHECK(b.radio.rx_sensitivity_dbm == -95.0);
  CHECK(b.sbs_power.p_const_w == 56.0);
  CHECK(b.haps_power.p_const_w == 130.0);
  CHECK(b.penalty == 1e9);
  CHECK(c.campaign.fsd.discount == 0.9);
  CHECK(c.campaign.lsd.discount == 0.3);
  CHECK(c.campaign.fsd.iterations == 20000);
  CHECK(c.campaign.n_values == std::vector<int>{4, 8});
  CHECK(c.campaign.ue_counts.at(8) == std::vector<int>{200, 400, 600});
  CHECK(c.campaign.regimes.size() == 3);
  CHECK(c.campaign.regimes[2].lower == 1.8);
  CHECK(c.campaign.series.size() == 5);
  CHECK(b.rule == AssociationRule::kFallback);
  CHECK_FALSE(b.clamp_estimates);
}

TEST_CASE("a single override leaves everything else") {
  const ExperimentConfig c = parse_config(json{{"n_sbs", 8}});
  CHECK(c.campaign.base.num_sbs == 8);
  json a = c.to_json(), b = parse_config(json::object()).to_json();
  a.erase("n_sbs");
  b.erase("n_sbs");
  CHECK(a == b);
}

TEST_CASE("inverted error range is rejected") {
  const std::string e = error_of(json{{"epsilon_regime", {0.5, 0.4}}});
  CHECK(e.find("epsilon_regime") != std::string::npos);
  CHECK(e.find("lower <= upper") != std::string::npos);
  const ExperimentConfig ok = parse_config(json{{"epsilon_regime", {0.4, 0.5}}});
  REQUIRE(ok.campaign.regimes.size() == 1);
  CHECK(ok.campaign.regimes[0].name == "custom");
}

TEST_CASE("unknown keys and bad values name the key and its domain") {
  CHECK(error_of(json{{"n_sbss", 4}}).find("'n_sbss'") != std::string::npos);
  const std::string e = error_of(json{{"penalty", -1}});
  CHECK(e.find("'penalty'") != std::string::npos);
  CHECK(e.find("(0, inf)") != std::string::npos);
  CHECK(error_of(json{{"mode", "sometimes"}}).find("both oracle estimated") != std::string::npos);
  CHECK(error_of(json{{"clamp_estimates", 1}}).find("true or false") != std::string::npos);
  CHECK(error_of(json{{"sbs_power", {{"p_sleep_w", 100.0}}}}).find("sbs_power") != std::string::npos);
  CHECK(error_of(json{{"n_values", {4, 5}}}).find("ue_counts") != std::string::npos);
  CHECK(error_of(json{{"regimes", {"eps9"}}}).find("eps9") != std::string::npos);
  CHECK(error_of(json{{"algorithms", {"SARSA"}}}).find("algorithms") != std::string::npos);
  CHECK(error_of(json::array()).find("object") != std::string::npos);
}

TEST_CASE("algorithm and mode selection builds the series") {
  auto labels = [](const std::vector<Series>& s) {
    std::vector<std::string> out;
    for (const auto& x : s) out.push_back(x.label());
    return out;
  };
  CHECK(labels(select_series({"ES", "FSD", "LSD", "A3"}, ModeSelection::kBoth)) ==
        std::vector<std::string>{"ES_eps0", "ES_epsgt0", "FSD_epsgt0", "LSD_epsgt0", "A3"});
  CHECK(labels(select_series({"ES", "LSD", "A3"}, ModeSelection::kOracle)) ==
        std::vector<std::string>{"ES_eps0", "LSD_eps0", "A3"});
  CHECK(labels(select_series({"A3"}, ModeSelection::kEstimated)) == std::vector<std::string>{"A3"});
  const ExperimentConfig c = parse_config(json{{"algorithms", {"A3"}}});
  CHECK(c.campaign.series.size() == 1);
}

TEST_CASE("the effective config echo parses back to itself") {
  const ExperimentConfig c =
      parse_config(json{{"n_values", {4}}, {"seeds", 3}, {"seed", 77}, {"regimes", {"eps2"}}, {"frozen", true}});
  const json echo = c.to_json();
  CHECK(parse_config(echo).to_json() == echo);
  CHECK(echo["seed"] == 77);
  CHECK(echo["regimes"] == json{"eps2"});
}
