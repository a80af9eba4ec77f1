#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vhetcs/assoc.hpp"
#include "vhetcs/network.hpp"
#include "vhetcs/optimize.hpp"
#include "vhetcs/power.hpp"
#include "vhetcs/qlearn.hpp"
#include "vhetcs/traffic.hpp"

namespace vhetcs {

class Rng;

enum class Algorithm { kEs, kA3, kFsd, kLsd };
// Which small cells get an estimation error in estimated mode.
enum class ErrorScope { kAllSmallCells, kSleepingOnly };

const char* to_string(Algorithm a);
const char* to_string(LoadMode m);
Algorithm parse_algorithm(const std::string& s);

struct ScenarioConfig {
  int num_sbs = 4;
  int num_ues = 100;
  Deployment deployment;
  RadioParams radio;
  PowerParams sbs_power = PowerParams::small_cell();
  PowerParams haps_power = PowerParams::haps();
  // Empty psi means synth_profile(num_slots, psi_peak, psi_trough).
  DemandProfile profile;
  double psi_peak = 1.0;
  double psi_trough = 0.2;
  int num_slots = 50;
  double slot_duration_s = 1.0;
  double penalty = 1e9;
  AssociationRule rule = AssociationRule::kFallback;
  ErrorScope error_scope = ErrorScope::kAllSmallCells;
  bool clamp_estimates = false;
  // Demand, shadowing and error draws stay at their slot-0 values and UEs do
  // not move, so every slot sees the same loads.
  bool frozen = false;
  std::size_t history_length = 64;

  void validate() const;
  CostModel cost_model() const;
  DemandProfile effective_profile() const;
};

// Per-slot motion step: 0, 1.4, 5 and 15 m for stationary, pedestrian,
// cyclist and driver, in a uniform random direction, reflected at the borders.
void move_user(UserEquipment& ue, double area_side_m, Rng& rng);
double step_length_m(MobilityMode mode);

// Ground truth of one slot. "native" is the association with every BS ON and
// defines each cell's own load; "realized" is the association under the
// policy actually in force.
struct SlotTruth {
  int slot = 0;
  std::vector<UserEquipment> ues;
  LinkMatrix native_links;
  AssociationResult native;
  std::vector<LoadRecord> native_loads;
  LinkMatrix realized_links;
  AssociationResult realized;
  std::vector<LoadRecord> realized_loads;
  std::vector<std::vector<int>> preferences;
};

class Scenario {
 public:
  Scenario(ScenarioConfig config, std::uint64_t seed);

  const ScenarioConfig& config() const { return config_; }
  const std::vector<BaseStationSpec>& stations() const { return stations_; }
  const std::vector<UserEquipment>& users() const { return ues_; }
  std::uint64_t seed() const { return seed_; }
  int num_sbs() const { return config_.num_sbs; }
  const DemandProfile& profile() const { return profile_; }

  // Slots must be realised in non-decreasing order; UE motion is sequential.
  SlotTruth realize(int slot, const Policy& applied);
  // Unit draw in [0, 1) behind the estimation error of small cell k at slot.
  double error_unit_draw(int k, int slot) const;
  std::vector<int> capacities() const;

 private:
  int effective_slot(int slot) const { return config_.frozen ? 0 : slot; }
  void advance_to(int slot);

  ScenarioConfig config_;
  std::uint64_t seed_;
  DemandProfile profile_;
  std::vector<BaseStationSpec> stations_;
  std::vector<UserEquipment> ues_;
  int current_slot_ = 0;
};

// History of observed loads kept by the central controller. Only BSs that
// are ON report; sleeping cells keep their last observation.
class CcuDatabase {
 public:
  CcuDatabase(int num_bs, std::size_t history_length);

  void observe(int bs, int slot, double rho);
  bool observed(int bs) const { return !history_[static_cast<std::size_t>(bs)].empty(); }
  double last_known(int bs) const { return last_known_[static_cast<std::size_t>(bs)]; }
  const std::deque<std::pair<int, double>>& history(int bs) const {
    return history_[static_cast<std::size_t>(bs)];
  }
  int num_bs() const { return static_cast<int>(last_known_.size()); }

 private:
  std::size_t capacity_;
  std::vector<std::deque<std::pair<int, double>>> history_;
  std::vector<double> last_known_;
};

// Everything a decider may look at when fixing the next slot's policy.
struct DecisionContext {
  const LoadsView& view;
  const Policy& current;
  const CostModel& costs;
  int slot = 0;
  std::uint64_t seed = 0;
};

class Decider {
 public:
  virtual ~Decider() = default;
  virtual Algorithm algorithm() const = 0;
  virtual Policy decide(const DecisionContext& ctx) = 0;
};

class A3Decider final : public Decider {
 public:
  Algorithm algorithm() const override { return Algorithm::kA3; }
  Policy decide(const DecisionContext& ctx) override { return a3_policy(ctx.current.size()); }
};

class EsDecider final : public Decider {
 public:
  explicit EsDecider(bool parallel = true, EsOptions options = {}) : parallel_(parallel), options_(options) {}
  Algorithm algorithm() const override { return Algorithm::kEs; }
  Policy decide(const DecisionContext& ctx) override;
  bool last_fallback() const { return last_fallback_; }

 private:
  bool parallel_;
  EsOptions options_;
  bool last_fallback_ = false;
};

// Q-learning controller. Without a pretrained table it trains a fresh agent
// every slot against the controller's current loads view and then acts
// greedily; with one it only acts greedily.
class QDecider final : public Decider {
 public:
  QDecider(StateDesign design, AgentConfig config);
  QDecider(StateDesign design, QTable pretrained);

  Algorithm algorithm() const override {
    return design_ == StateDesign::kFsd ? Algorithm::kFsd : Algorithm::kLsd;
  }
  Policy decide(const DecisionContext& ctx) override;
  const std::optional<TrainingResult>& last_training() const { return last_training_; }
  std::uint64_t total_steps() const { return total_steps_; }

 private:
  StateDesign design_;
  AgentConfig config_;
  std::optional<QTable> pretrained_;
  std::optional<TrainingResult> last_training_;
  std::uint64_t total_steps_ = 0;
};

struct SlotResult {
  int slot = 0;
  Algorithm algorithm = Algorithm::kEs;
  LoadMode mode = LoadMode::kOracle;
  std::string regime;  // empty when no error is applied
  Policy policy;       // policy in force during this slot
  double power_w = 0.0;           // reported power (inflated-load accounting in estimated mode)
  double realized_power_w = 0.0;  // closed form at the true realised loads
  double energy_j = 0.0;
  int connected = 0;
  int unconnected = 0;
  double decision_time_s = 0.0;
  Policy next_policy;
  double decision_cost = 0.0;
  double decision_power_w = 0.0;
  bool decision_feasible = false;
  bool fallback = false;
  std::vector<std::string> violations;
};

// Time-slotted loop. Slot t applies the policy decided at t-1 (all-ON at
// t = 0), realises traffic and association, updates the controller database,
// accounts power and then asks the decider for slot t+1.
class Simulation {
 public:
  Simulation(Scenario& scenario, LoadMode mode, std::optional<ErrorRegime> regime = std::nullopt);

  SlotResult run_slot(Decider& decider);
  std::vector<SlotResult> run(Decider& decider, int num_slots);

  int next_slot() const { return slot_; }
  const Policy& current_policy() const { return policy_; }
  const CcuDatabase& database() const { return db_; }
  const LoadsView& oracle_view() const { return oracle_view_; }
  const LoadsView& estimated_view() const { return estimated_view_; }
  const std::vector<LoadRecord>& load_records() const { return records_; }
  const std::vector<double>& error_draws() const { return error_draws_; }
  const SlotTruth& last_truth() const { return truth_; }
  const CostModel& cost_model() const { return costs_; }

 private:
  void build_views(const SlotTruth& truth);

  Scenario& scenario_;
  LoadMode mode_;
  std::optional<ErrorRegime> regime_;
  CostModel costs_;
  CcuDatabase db_;
  Policy policy_;
  int slot_ = 0;
  SlotTruth truth_;
  LoadsView oracle_view_;
  LoadsView estimated_view_;
  std::vector<LoadRecord> records_;
  std::vector<double> error_draws_;  // eps_v per small cell for the current slot
};

// Full-network training environment: each step realises one slot of a
// scenario under the chosen policy and scores it with the penalty cost, where
// any unconnected UE triggers the penalty. Every reset redraws the topology
// and UE set from a fresh episode seed and restarts the demand profile.
class NetworkEnvironment final : public Environment {
 public:
  NetworkEnvironment(ScenarioConfig config, std::uint64_t seed, LoadMode mode,
                     std::optional<ErrorRegime> regime = std::nullopt);

  int num_sbs() const override { return config_.num_sbs; }
  Observation reset() override;
  StepOutcome step(const Policy& action) override;

 private:
  std::vector<double> offered_rho(const SlotTruth& truth) const;

  ScenarioConfig config_;
  std::uint64_t seed_;
  LoadMode mode_;
  std::optional<ErrorRegime> regime_;
  CostModel costs_;
  std::unique_ptr<Scenario> scenario_;
  int episode_ = -1;
  int slot_ = 0;
};

}  // namespace vhetcs
