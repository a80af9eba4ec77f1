#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "vhetcs/campaign.hpp"

namespace vhetcs {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ModeSelection { kBoth, kOracle, kEstimated };

struct ExperimentConfig {
  CampaignConfig campaign;  // campaign.base.num_sbs is the single-run n
  ModeSelection mode = ModeSelection::kBoth;
  std::vector<std::string> algorithms{"ES", "FSD", "LSD", "A3"};
  std::string out_dir = "results";
  std::string psi_csv;
  std::vector<int> bench_slot_counts{10, 20, 30, 40, 50};
  int bench_repeats = 10;
  int theorem1_max_instances = 10000;
  std::string theorem1_regime = "eps3";
  // Named ranges that regimes, theorem1_regime and the CLI may refer to.
  std::vector<ErrorRegime> regime_catalog{ErrorRegime::eps1(), ErrorRegime::eps2(), ErrorRegime::eps3()};
  int threads = 0;  // 0 keeps the OpenMP default

  // Rebuilds campaign.series from algorithms and mode.
  void apply_selection();
  const ErrorRegime& regime(const std::string& name) const;
  nlohmann::json to_json() const;
};

// Series for the algorithm names under a mode. With kBoth, ES runs in both
// modes, FSD and LSD in estimated mode only. A3 ignores the mode.
std::vector<Series> select_series(const std::vector<std::string>& algorithms, ModeSelection mode);
ModeSelection parse_mode(const std::string& s);
const char* to_string(ModeSelection m);

// Omitted keys keep their defaults. Throws ConfigError naming the key and its
// valid domain on unknown keys, wrong types or out-of-domain values.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config_file(const std::string& path);

}  // namespace vhetcs
