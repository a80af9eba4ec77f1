#include "vhetcs/qlearn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "vhetcs/rng.hpp"

namespace vhetcs {

const char* to_string(StateDesign d) { return d == StateDesign::kFsd ? "FSD" : "LSD"; }

QTable::QTable(std::size_t num_states, std::size_t num_actions)
    : states_(num_states),
      actions_(num_actions),
      values_(num_states * num_actions, 0.0),
      visits_(num_states * num_actions, 0) {}

std::size_t QTable::cells_for(StateDesign design, int num_sbs) {
  const std::size_t actions = std::size_t{1} << num_sbs;
  const std::size_t states = design == StateDesign::kFsd ? actions : static_cast<std::size_t>(num_sbs) + 2;
  return states * actions;
}

QTable QTable::for_design(StateDesign design, int num_sbs, std::size_t max_cells) {
  if (num_sbs < 0 || num_sbs > 30) throw std::domain_error("number of small cells out of range");
  const std::size_t cells = cells_for(design, num_sbs);
  if (cells > max_cells) {
    throw std::length_error(std::string(to_string(design)) + " Q-table for n=" + std::to_string(num_sbs) +
                            " needs " + std::to_string(cells) + " cells (" +
                            (design == StateDesign::kFsd ? "O(2^{2n})" : "O(n 2^n)") +
                            " growth), above the cap of " + std::to_string(max_cells));
  }
  const std::size_t actions = std::size_t{1} << num_sbs;
  const std::size_t states = design == StateDesign::kFsd ? actions : static_cast<std::size_t>(num_sbs) + 2;
  return QTable(states, actions);
}

std::size_t QTable::greedy(std::size_t s) const {
  const auto r = row(s);
  return static_cast<std::size_t>(std::min_element(r.begin(), r.end()) - r.begin());
}

double QTable::row_min(std::size_t s) const {
  const auto r = row(s);
  return *std::min_element(r.begin(), r.end());
}

AgentConfig AgentConfig::defaults(StateDesign design) {
  AgentConfig c;
  c.discount = design == StateDesign::kFsd ? 0.9 : 0.3;
  return c;
}

void AgentConfig::validate() const {
  if (!(learning_rate > 0.0 && learning_rate <= 1.0)) throw std::domain_error("learning rate must lie in (0, 1]");
  if (!(discount >= 0.0 && discount < 1.0)) throw std::domain_error("discount must lie in [0, 1)");
  if (!(epsilon0 >= 0.0 && epsilon0 <= 1.0)) throw std::domain_error("initial epsilon must lie in [0, 1]");
  if (!(decay > 0.0 && decay <= 1.0)) throw std::domain_error("epsilon decay must lie in (0, 1]");
  if (iterations < 0) throw std::domain_error("iterations must be non-negative");
  if (slots_per_episode < 1) throw std::domain_error("slots per episode must be positive");
  if (convergence_tol < 0.0) throw std::domain_error("convergence tolerance must be non-negative");
  if (convergence_patience < 1) throw std::domain_error("convergence patience must be positive");
}

std::size_t fsd_state(const Policy& previous_policy) {
  return static_cast<std::size_t>(previous_policy.index());
}

std::size_t lsd_state(std::span<const double> loads) {
  return static_cast<std::size_t>(std::count_if(loads.begin(), loads.end(), [](double rho) { return rho > 1.0; }));
}

std::size_t select_action(const QTable& table, std::size_t state, double epsilon, double explore_draw,
                          double action_draw) {
  if (state >= table.num_states()) throw std::out_of_range("state index out of range");
  if (explore_draw < epsilon) {
    const auto a = static_cast<std::size_t>(action_draw * static_cast<double>(table.num_actions()));
    return std::min(a, table.num_actions() - 1);
  }
  return table.greedy(state);
}

double q_update(QTable& table, std::size_t state, std::size_t action, double cost, std::size_t next_state,
                const AgentConfig& config) {
  if (state >= table.num_states() || next_state >= table.num_states() || action >= table.num_actions())
    throw std::out_of_range("Q-table index out of range");
  const double old = table.value(state, action);
  const double target = cost + config.discount * table.row_min(next_state);
  const double updated = old + config.learning_rate * (target - old);
  table.set_value(state, action, updated);
  table.set_visits(state, action, table.visits(state, action) + 1);
  return updated;
}

std::size_t observe_state(StateDesign design, const Policy& applied, std::span<const double> offered_rho) {
  return design == StateDesign::kFsd ? fsd_state(applied) : lsd_state(offered_rho);
}

LoadsViewEnvironment::LoadsViewEnvironment(LoadsView view, CostModel model, Policy initial)
    : view_(std::move(view)), model_(std::move(model)), initial_(std::move(initial)) {
  view_.validate();
  if (initial_.size() != view_.num_sbs()) throw std::domain_error("initial policy length mismatch");
  memo_.resize(std::size_t{1} << view_.num_sbs());
}

const StepOutcome& LoadsViewEnvironment::outcome(const Policy& action) {
  auto& slot = memo_[static_cast<std::size_t>(action.index())];
  if (!slot) {
    const PolicyEvaluation ev = evaluate_policy(action, view_, model_);
    slot = StepOutcome{ev.cost, ev.offered_rho};
  }
  return *slot;
}

Observation LoadsViewEnvironment::reset() { return {initial_, outcome(initial_).offered_rho}; }

StepOutcome LoadsViewEnvironment::step(const Policy& action) { return outcome(action); }

TrainingResult train(StateDesign design, Environment& env, const AgentConfig& config, Rng& rng) {
  config.validate();
  const int n = env.num_sbs();
  TrainingResult result;
  result.table = QTable::for_design(design, n, config.max_table_cells);
  auto& table = result.table;

  double epsilon = config.epsilon0;
  int quiet_episodes = 0;
  for (int ep = 0; ep < config.iterations; ++ep) {
    const Observation obs = env.reset();
    std::size_t state = observe_state(design, obs.policy, obs.offered_rho);
    double episode_cost = 0.0;
    double max_change = 0.0;
    for (int slot = 0; slot < config.slots_per_episode; ++slot) {
      const double explore = rng.uniform();
      const double pick = rng.uniform();
      const std::size_t action = select_action(table, state, epsilon, explore, pick);
      const Policy policy = Policy::from_index(n, action);
      const StepOutcome out = env.step(policy);
      const std::size_t next = observe_state(design, policy, out.offered_rho);

      const double before = table.value(state, action);
      const double after = q_update(table, state, action, out.cost, next, config);
      max_change = std::max(max_change, std::abs(after - before) / std::max(1.0, std::abs(after)));

      if (config.record_trace) result.trace.push_back({ep, slot, state, action, out.cost, epsilon});
      episode_cost += out.cost;
      epsilon *= config.decay;
      state = next;
      ++result.steps;
    }
    result.episode_cost.push_back(episode_cost);
    result.episodes_run = ep + 1;
    if (config.convergence_tol > 0.0) {
      quiet_episodes = max_change < config.convergence_tol ? quiet_episodes + 1 : 0;
      if (quiet_episodes >= config.convergence_patience) {
        result.converged = true;
        break;
      }
    }
  }
  result.final_epsilon = epsilon;
  return result;
}

}  // namespace vhetcs
