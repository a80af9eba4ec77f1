#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "vhetcs/optimize.hpp"
#include "vhetcs/power.hpp"

namespace vhetcs {

class Rng;

// kFsd: one state per ON/OFF configuration (2^n states).
// kLsd: state = number of BSs whose offered load exceeds capacity (n+2 states).
enum class StateDesign { kFsd, kLsd };

const char* to_string(StateDesign d);

// Cost-to-go table; lower is better.
class QTable {
 public:
  QTable() = default;
  QTable(std::size_t num_states, std::size_t num_actions);

  // Shape for the given design. Throws std::length_error when the table would
  // exceed max_cells; FSD grows as O(2^{2n}).
  static QTable for_design(StateDesign design, int num_sbs, std::size_t max_cells);
  static std::size_t cells_for(StateDesign design, int num_sbs);

  std::size_t num_states() const { return states_; }
  std::size_t num_actions() const { return actions_; }
  double value(std::size_t s, std::size_t a) const { return values_[s * actions_ + a]; }
  void set_value(std::size_t s, std::size_t a, double v) { values_[s * actions_ + a] = v; }
  std::uint64_t visits(std::size_t s, std::size_t a) const { return visits_[s * actions_ + a]; }
  void set_visits(std::size_t s, std::size_t a, std::uint64_t v) { visits_[s * actions_ + a] = v; }
  std::span<const double> row(std::size_t s) const { return {values_.data() + s * actions_, actions_}; }
  // Argmin over the row; ties go to the lowest action index.
  std::size_t greedy(std::size_t s) const;
  double row_min(std::size_t s) const;

 private:
  std::size_t states_ = 0;
  std::size_t actions_ = 0;
  std::vector<double> values_;
  std::vector<std::uint64_t> visits_;
};

struct AgentConfig {
  double learning_rate = 0.9;
  double discount = 0.9;
  double epsilon0 = 0.8;
  double decay = 0.9;
  int iterations = 20000;
  int slots_per_episode = 50;
  // Training stops early once `convergence_patience` consecutive episodes
  // change no table entry by more than this relative amount. 0 disables it.
  double convergence_tol = 1e-6;
  int convergence_patience = 5;
  std::size_t max_table_cells = 4096;
  bool record_trace = false;

  static AgentConfig defaults(StateDesign design);
  // Throws std::domain_error when a field is outside its domain.
  void validate() const;
};

std::size_t fsd_state(const Policy& previous_policy);
// Count of BSs with load strictly above capacity. loads are fractions.
std::size_t lsd_state(std::span<const double> loads);

// Explores with probability epsilon (explore_draw < epsilon), picking
// floor(action_draw * |A|); otherwise exploits the row argmin. Draws are
// uniform in [0, 1).
std::size_t select_action(const QTable& table, std::size_t state, double epsilon,
                          double explore_draw, double action_draw);

// Q(s,a) <- Q(s,a) + alpha [cost + chi min_a' Q(s',a') - Q(s,a)]; returns
// the new value and bumps the visit count of (s,a).
double q_update(QTable& table, std::size_t state, std::size_t action, double cost,
                std::size_t next_state, const AgentConfig& config);

struct StepOutcome {
  double cost = 0.0;
  std::vector<double> offered_rho;  // per BS, HAPS last
};

struct Observation {
  Policy policy;  // configuration in force before the first decision
  std::vector<double> offered_rho;
};

class Environment {
 public:
  virtual ~Environment() = default;
  virtual int num_sbs() const = 0;
  virtual Observation reset() = 0;
  virtual StepOutcome step(const Policy& action) = 0;
};

std::size_t observe_state(StateDesign design, const Policy& applied, std::span<const double> offered_rho);

// Environment whose loads never change: every action is scored by
// evaluate_policy against one LoadsView. Outcomes are memoised per action.
class LoadsViewEnvironment final : public Environment {
 public:
  LoadsViewEnvironment(LoadsView view, CostModel model, Policy initial);

  int num_sbs() const override { return view_.num_sbs(); }
  Observation reset() override;
  StepOutcome step(const Policy& action) override;
  const LoadsView& view() const { return view_; }

 private:
  const StepOutcome& outcome(const Policy& action);

  LoadsView view_;
  CostModel model_;
  Policy initial_;
  std::vector<std::optional<StepOutcome>> memo_;
};

struct TraceRow {
  int iteration = 0;
  int slot = 0;
  std::size_t state = 0;
  std::size_t action = 0;
  double cost = 0.0;
  double epsilon = 0.0;
};

struct TrainingResult {
  QTable table;
  std::vector<double> episode_cost;  // summed cost per episode
  std::vector<TraceRow> trace;       // per step, only with record_trace
  int episodes_run = 0;
  std::uint64_t steps = 0;
  bool converged = false;
  double final_epsilon = 0.0;
};

// Episodic epsilon-greedy training; epsilon <- epsilon * decay after every
// slot. Throws std::length_error if the table exceeds max_table_cells.
TrainingResult train(StateDesign design, Environment& env, const AgentConfig& config, Rng& rng);

}  // namespace vhetcs
