#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vhetcs/engine.hpp"

namespace vhetcs {

// One curve of the energy figures: an algorithm under a load mode.
struct Series {
  Algorithm algorithm = Algorithm::kEs;
  LoadMode mode = LoadMode::kOracle;

  // ES_eps0, ES_epsgt0, FSD_epsgt0, LSD_epsgt0 or A3.
  std::string label() const;
  static Series parse(const std::string& label);
  bool operator==(const Series&) const = default;
};

std::vector<Series> default_series();

// UE density in UEs per square metre.
double ue_density(int num_ues, double area_side_m);

struct CampaignConfig {
  ScenarioConfig base;
  std::vector<int> n_values{4, 8};
  std::map<int, std::vector<int>> ue_counts{{4, {100, 200, 300}}, {8, {200, 400, 600}}};
  std::vector<ErrorRegime> regimes{ErrorRegime::eps1(), ErrorRegime::eps2(), ErrorRegime::eps3()};
  std::vector<Series> series = default_series();
  int seeds = 5;
  std::uint64_t master_seed = 1;
  AgentConfig fsd = AgentConfig::defaults(StateDesign::kFsd);
  AgentConfig lsd = AgentConfig::defaults(StateDesign::kLsd);
  EsOptions es;
  bool keep_slots = false;

  void validate() const;
};

// Scenario seed shared by every series of one (n, e, seed) cell, so all
// algorithms face the same topology, UEs and demand.
std::uint64_t scenario_seed(std::uint64_t master, int n, int num_ues, int seed);

struct RunSummary {
  int n = 0;
  int num_ues = 0;
  double delta = 0.0;
  std::string regime;  // "none" for series without estimation error
  std::string series;
  Algorithm algorithm = Algorithm::kEs;
  LoadMode mode = LoadMode::kOracle;
  int seed = 0;
  double mean_power_w = 0.0;
  double total_energy_j = 0.0;
  double realized_energy_j = 0.0;
  int unconnected_total = 0;
  double decision_time_s = 0.0;
  int fallback_slots = 0;
  std::vector<std::string> violations;
  std::vector<SlotResult> slots;  // only with keep_slots
};

struct CampaignResult {
  std::vector<RunSummary> runs;
  std::vector<std::string> notices;
  std::size_t violation_count() const;
};

// Runs every (n, e, series, regime, seed) job. Jobs run in parallel and are
// merged by job index, so the result order is fixed.
CampaignResult run_campaign(const CampaignConfig& config);
RunSummary run_single(const ScenarioConfig& scenario, std::uint64_t scenario_seed, const Series& series,
                      const std::optional<ErrorRegime>& regime, const CampaignConfig& config, int seed);

// Seed-averaged energy comparison of one series against a baseline for each
// (n, e, regime). percent = 100 * (baseline - other) / baseline, so it turns
// negative when the other series uses more energy than the baseline.
struct RelativeDifferenceRow {
  int n = 0;
  int num_ues = 0;
  double delta = 0.0;
  std::string regime;
  std::string baseline;
  std::string other;
  double baseline_energy_j = 0.0;
  double other_energy_j = 0.0;
  double percent = 0.0;
};

std::vector<RelativeDifferenceRow> relative_differences(const CampaignResult& result,
                                                        const std::string& baseline = "A3");

// Mean total energy over seeds for one cell of the matrix; nullopt if absent.
std::optional<double> mean_energy(const CampaignResult& result, int n, int num_ues, const std::string& series,
                                  const std::string& regime);

struct BenchmarkRow {
  StateDesign design = StateDesign::kFsd;
  int n = 0;
  int slots = 0;
  int repeats = 0;
  double mean_s = 0.0;
  double stddev_s = 0.0;
  std::uint64_t mean_steps = 0;
};

struct BenchmarkConfig {
  ScenarioConfig base;
  std::vector<StateDesign> designs{StateDesign::kFsd, StateDesign::kLsd};
  std::vector<int> slot_counts{10, 20, 30, 40, 50};
  int repeats = 10;
  LoadMode mode = LoadMode::kEstimated;
  ErrorRegime regime = ErrorRegime::eps1();
  AgentConfig fsd = AgentConfig::defaults(StateDesign::kFsd);
  AgentConfig lsd = AgentConfig::defaults(StateDesign::kLsd);
  std::uint64_t master_seed = 1;
};

// Training plus decision wall-clock time summed over the first `slots`
// slots, averaged over repeats. Repeat r uses the same scenario for every
// design and slot count.
std::vector<BenchmarkRow> benchmark_elapsed(const BenchmarkConfig& config);

struct FlipWitness {
  int instance = 0;
  std::uint64_t scenario_seed = 0;
  int num_ues = 0;
  int slot = 0;
  Policy oracle_policy;
  Policy estimated_policy;
  std::vector<double> error_draws;     // eps_v per small cell
  std::vector<double> true_rho;        // small cells then HAPS
  std::vector<double> last_known_rho;
  std::vector<double> estimated_rho;
  double oracle_power_true_w = 0.0;        // oracle choice, true loads
  double estimated_power_true_w = 0.0;     // estimated choice, true loads
  double estimated_power_erroneous_w = 0.0;  // estimated choice, erroneous loads
  double oracle_power_erroneous_w = 0.0;     // oracle choice, erroneous loads
};

struct FlipSearchConfig {
  ScenarioConfig base;
  std::vector<int> ue_counts{100, 200, 300};
  ErrorRegime regime = ErrorRegime::eps3();
  int max_instances = 10000;
  std::uint64_t master_seed = 1;
};

struct FlipSearch {
  std::optional<FlipWitness> witness;
  int instances_tried = 0;
  int slots_checked = 0;
};

// Runs ES under the estimated mode on seeded instances and stops at the
// first slot whose estimated-view decision differs from the oracle-view one.
FlipSearch find_flip_witness(const FlipSearchConfig& config);

}  // namespace vhetcs
