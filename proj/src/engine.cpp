#include "vhetcs/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "vhetcs/rng.hpp"

namespace vhetcs {

const char* to_string(Algorithm a) {
  switch (a) {
    case Algorithm::kEs: return "ES";
    case Algorithm::kA3: return "A3";
    case Algorithm::kFsd: return "FSD";
    case Algorithm::kLsd: return "LSD";
  }
  return "?";
}

const char* to_string(LoadMode m) { return m == LoadMode::kOracle ? "oracle" : "estimated"; }

Algorithm parse_algorithm(const std::string& s) {
  if (s == "ES") return Algorithm::kEs;
  if (s == "A3") return Algorithm::kA3;
  if (s == "FSD") return Algorithm::kFsd;
  if (s == "LSD") return Algorithm::kLsd;
  throw std::invalid_argument("unknown algorithm '" + s + "' (expected ES, A3, FSD or LSD)");
}

void ScenarioConfig::validate() const {
  if (num_sbs < 0) throw std::domain_error("num_sbs must be non-negative");
  if (num_ues < 0) throw std::domain_error("num_ues must be non-negative");
  if (num_slots < 1) throw std::domain_error("num_slots must be positive");
  if (!(slot_duration_s > 0)) throw std::domain_error("slot duration must be positive");
  if (!(penalty > 0)) throw std::domain_error("penalty must be positive");
  sbs_power.validate();
  haps_power.validate();
  const DemandProfile p = effective_profile();
  p.validate();
  if (static_cast<int>(p.psi.size()) < num_slots)
    throw std::domain_error("demand profile is shorter than the number of slots");
}

CostModel ScenarioConfig::cost_model() const {
  CostModel m;
  m.sbs.assign(static_cast<std::size_t>(num_sbs), sbs_power);
  m.haps = haps_power;
  m.penalty = penalty;
  return m;
}

DemandProfile ScenarioConfig::effective_profile() const {
  if (!profile.psi.empty()) return profile;
  DemandProfile p = synth_profile(num_slots, psi_peak, psi_trough);
  p.r_lower = profile.r_lower;
  p.r_upper = profile.r_upper;
  return p;
}

double step_length_m(MobilityMode mode) {
  switch (mode) {
    case MobilityMode::kStationary: return 0.0;
    case MobilityMode::kPedestrian: return 1.4;
    case MobilityMode::kCyclist: return 5.0;
    case MobilityMode::kDriver: return 15.0;
  }
  return 0.0;
}

namespace {

double reflect(double v, double side) {
  if (v < 0.0) v = -v;
  if (v > side) v = 2.0 * side - v;
  return std::clamp(v, 0.0, side);
}

}  // namespace

void move_user(UserEquipment& ue, double area_side_m, Rng& rng) {
  const double step = step_length_m(ue.mobility);
  if (step == 0.0) return;
  const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
  ue.position.x = reflect(ue.position.x + step * std::cos(angle), area_side_m);
  ue.position.y = reflect(ue.position.y + step * std::sin(angle), area_side_m);
}

Scenario::Scenario(ScenarioConfig config, std::uint64_t seed)
    : config_(std::move(config)), seed_(seed) {
  config_.validate();
  profile_ = config_.effective_profile();
  stations_ = place_network(config_.num_sbs, config_.deployment, config_.radio, config_.sbs_power,
                            config_.haps_power);
  Rng placement(seed_, StreamTag::kUePlacement, {});
  ues_ = place_users(config_.num_ues, config_.deployment.area_side_m, config_.radio.rx_sensitivity_dbm,
                     placement);
}

std::vector<int> Scenario::capacities() const {
  std::vector<int> caps;
  caps.reserve(stations_.size());
  for (const auto& bs : stations_) caps.push_back(bs.capacity_rb);
  return caps;
}

void Scenario::advance_to(int slot) {
  if (slot < current_slot_) throw std::logic_error("slots must be realised in non-decreasing order");
  if (!config_.frozen) {
    for (int t = current_slot_ + 1; t <= slot; ++t) {
      for (std::size_t i = 0; i < ues_.size(); ++i) {
        Rng rng(seed_, StreamTag::kMobility, {i, static_cast<std::uint64_t>(t)});
        move_user(ues_[i], config_.deployment.area_side_m, rng);
      }
    }
  }
  current_slot_ = slot;
}

double Scenario::error_unit_draw(int k, int slot) const {
  Rng rng(seed_, StreamTag::kEstimationError,
          {static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(effective_slot(slot))});
  return rng.uniform();
}

SlotTruth Scenario::realize(int slot, const Policy& applied) {
  if (applied.size() != config_.num_sbs) throw std::domain_error("policy length mismatch");
  advance_to(slot);
  const int t = effective_slot(slot);
  const std::size_t nb = stations_.size();

  SlotTruth truth;
  truth.slot = slot;
  truth.ues = ues_;
  std::vector<int> demands(truth.ues.size());
  std::vector<double> normals(truth.ues.size() * nb);
  for (std::size_t i = 0; i < truth.ues.size(); ++i) {
    Rng demand_rng(seed_, StreamTag::kDemand, {i, static_cast<std::uint64_t>(t)});
    const int draw = demand_rng.uniform_int(profile_.r_lower, profile_.r_upper);
    truth.ues[i].demand_rb = draw_demand(profile_, t, draw);
    demands[i] = truth.ues[i].demand_rb;
    Rng shadow_rng(seed_, StreamTag::kShadowing, {i, static_cast<std::uint64_t>(t)});
    for (std::size_t j = 0; j < nb; ++j) normals[i * nb + j] = shadow_rng.standard_normal();
  }

  const std::vector<int> caps = capacities();
  const std::vector<std::uint8_t> all_active(nb, 1);
  truth.native_links = compute_link_matrix(stations_, truth.ues, all_active, config_.radio, normals);
  truth.native = associate(truth.ues, truth.native_links, caps, config_.rule);
  truth.native_loads = aggregate_load(truth.native.serving, demands, stations_);
  truth.preferences = cell_preferences(stations_, truth.native_links, truth.native.serving, config_.radio);

  if (applied.active_count() == applied.size()) {
    truth.realized_links = truth.native_links;
    truth.realized = truth.native;
    truth.realized_loads = truth.native_loads;
  } else {
    std::vector<std::uint8_t> active(nb, 1);
    for (int k = 0; k < applied.size(); ++k) active[static_cast<std::size_t>(k)] = applied.on(k) ? 1 : 0;
    truth.realized_links = compute_link_matrix(stations_, truth.ues, active, config_.radio, normals);
    truth.realized = associate(truth.ues, truth.realized_links, caps, config_.rule);
    truth.realized_loads = aggregate_load(truth.realized.serving, demands, stations_);
  }
  return truth;
}

CcuDatabase::CcuDatabase(int num_bs, std::size_t history_length)
    : capacity_(std::max<std::size_t>(history_length, 1)),
      history_(static_cast<std::size_t>(num_bs)),
      last_known_(static_cast<std::size_t>(num_bs), 0.0) {}

void CcuDatabase::observe(int bs, int slot, double rho) {
  auto& h = history_[static_cast<std::size_t>(bs)];
  h.emplace_back(slot, rho);
  if (h.size() > capacity_) h.pop_front();
  last_known_[static_cast<std::size_t>(bs)] = rho;
}

Policy EsDecider::decide(const DecisionContext& ctx) {
  const EsDecision d = parallel_ ? es_select(ctx.view, ctx.costs, options_)
                                 : es_select_serial(ctx.view, ctx.costs, options_);
  last_fallback_ = d.fallback;
  return d.best.policy;
}

QDecider::QDecider(StateDesign design, AgentConfig config) : design_(design), config_(config) {
  config_.validate();
}

QDecider::QDecider(StateDesign design, QTable pretrained)
    : design_(design), config_(AgentConfig::defaults(design)), pretrained_(std::move(pretrained)) {}

Policy QDecider::decide(const DecisionContext& ctx) {
  const int n = ctx.view.num_sbs();
  const QTable* table = nullptr;
  if (pretrained_) {
    table = &*pretrained_;
  } else {
    LoadsViewEnvironment env(ctx.view, ctx.costs, ctx.current);
    Rng rng(ctx.seed, StreamTag::kExploration,
            {static_cast<std::uint64_t>(ctx.slot), static_cast<std::uint64_t>(design_)});
    last_training_ = train(design_, env, config_, rng);
    total_steps_ += last_training_->steps;
    table = &last_training_->table;
  }
  std::size_t state = 0;
  if (design_ == StateDesign::kFsd) {
    state = fsd_state(ctx.current);
  } else {
    state = lsd_state(evaluate_policy(ctx.current, ctx.view, ctx.costs).offered_rho);
  }
  if (state >= table->num_states()) throw std::out_of_range("state outside the Q-table");
  return Policy::from_index(n, table->greedy(state));
}

Simulation::Simulation(Scenario& scenario, LoadMode mode, std::optional<ErrorRegime> regime)
    : scenario_(scenario),
      mode_(mode),
      regime_(std::move(regime)),
      costs_(scenario.config().cost_model()),
      db_(scenario.num_sbs() + 1, scenario.config().history_length),
      policy_(Policy::all_on(scenario.num_sbs())) {
  if (mode_ == LoadMode::kEstimated && !regime_)
    throw std::domain_error("estimated mode needs an error regime");
  if (regime_) regime_->validate();
}

void Simulation::build_views(const SlotTruth& truth) {
  const int n = scenario_.num_sbs();
  const auto& stations = scenario_.stations();
  const std::size_t nb = stations.size();

  oracle_view_.load_rb.assign(nb, 0.0);
  oracle_view_.capacity_rb.assign(nb, 0.0);
  for (std::size_t j = 0; j < nb; ++j) {
    oracle_view_.load_rb[j] = truth.native_loads[j].true_load_rb;
    oracle_view_.capacity_rb[j] = stations[j].capacity_rb;
  }
  oracle_view_.preference = truth.preferences;
  oracle_view_.mode = LoadMode::kOracle;

  error_draws_.assign(static_cast<std::size_t>(n), 0.0);
  if (regime_)
    for (int k = 0; k < n; ++k)
      error_draws_[static_cast<std::size_t>(k)] = regime_->scale(scenario_.error_unit_draw(k, truth.slot));

  records_ = truth.native_loads;
  estimated_view_ = oracle_view_;
  estimated_view_.mode = LoadMode::kEstimated;
  const auto& cfg = scenario_.config();
  for (int j = 0; j < static_cast<int>(nb); ++j) {
    auto& rec = records_[static_cast<std::size_t>(j)];
    rec.last_known_rho = db_.observed(j) ? db_.last_known(j) : rec.true_rho;
    rec.estimated_rho = rec.last_known_rho;
    if (j < n && regime_) {
      const bool apply = cfg.error_scope == ErrorScope::kAllSmallCells || !policy_.on(j);
      if (apply) rec.estimated_rho = inject_error(rec.last_known_rho, *regime_, error_draws_[static_cast<std::size_t>(j)]);
      if (cfg.clamp_estimates) rec.estimated_rho = std::max(rec.last_known_rho, std::min(rec.estimated_rho, 1.0));
    }
    if (j < n) estimated_view_.load_rb[static_cast<std::size_t>(j)] = rec.estimated_rho * stations[static_cast<std::size_t>(j)].capacity_rb;
  }
}

SlotResult Simulation::run_slot(Decider& decider) {
  const int t = slot_;
  const int n = scenario_.num_sbs();
  const auto& cfg = scenario_.config();

  // (1)-(3) apply the pre-decided policy, draw demand, associate.
  truth_ = scenario_.realize(t, policy_);

  // (4) ON cells and the HAPS report their loads.
  for (int j = 0; j <= n; ++j)
    if (j == n || policy_.on(j)) db_.observe(j, t, truth_.native_loads[static_cast<std::size_t>(j)].true_rho);
  build_views(truth_);

  // (5) accounting
  SlotResult r;
  r.slot = t;
  r.algorithm = decider.algorithm();
  r.mode = mode_;
  r.regime = regime_ ? regime_->name : std::string{};
  r.policy = policy_;
  std::vector<double> sbs_rho(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) sbs_rho[static_cast<std::size_t>(k)] = truth_.realized_loads[static_cast<std::size_t>(k)].true_rho;
  const double haps_rho = truth_.realized_loads[static_cast<std::size_t>(n)].true_rho;
  r.realized_power_w = network_power(policy_, sbs_rho, haps_rho, costs_.sbs, costs_.haps);
  if (mode_ == LoadMode::kEstimated && decider.algorithm() != Algorithm::kA3) {
    std::vector<double> est(sbs_rho);
    for (int k = 0; k < n; ++k)
      if (policy_.on(k))
        est[static_cast<std::size_t>(k)] = inject_error(sbs_rho[static_cast<std::size_t>(k)], *regime_, error_draws_[static_cast<std::size_t>(k)]);
    r.power_w = erroneous_network_power(policy_, est, haps_rho, costs_.sbs, costs_.haps);
  } else {
    r.power_w = r.realized_power_w;
  }
  r.energy_j = slot_energy(r.power_w, cfg.slot_duration_s);
  r.connected = connected_count(truth_.realized);
  r.unconnected = static_cast<int>(truth_.realized.unconnected.size());

  // (6) decide the next slot from the controller's view only.
  const LoadsView& view = mode_ == LoadMode::kOracle ? oracle_view_ : estimated_view_;
  const DecisionContext ctx{view, policy_, costs_, t, scenario_.seed()};
  const auto start = std::chrono::steady_clock::now();
  Policy next = decider.decide(ctx);
  r.decision_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const PolicyEvaluation ev = evaluate_policy(next, view, costs_);
  r.decision_cost = ev.cost;
  r.decision_power_w = ev.power_w;
  r.decision_feasible = ev.feasible;
  if (const auto* es = dynamic_cast<const EsDecider*>(&decider)) r.fallback = es->last_fallback();
  r.next_policy = next;

  // Per-slot invariants.
  if (r.connected + r.unconnected != cfg.num_ues) r.violations.push_back("connected + unconnected != e");
  const auto& stations = scenario_.stations();
  for (std::size_t j = 0; j < stations.size(); ++j) {
    if (truth_.realized.residual_capacity[j] < 0) r.violations.push_back("negative residual capacity at BS " + std::to_string(j + 1));
    if (truth_.realized_loads[j].true_load_rb > stations[j].capacity_rb)
      r.violations.push_back("realised load above capacity at BS " + std::to_string(j + 1));
  }
  for (int k = 0; k < n; ++k)
    if (records_[static_cast<std::size_t>(k)].estimated_rho < records_[static_cast<std::size_t>(k)].last_known_rho)
      r.violations.push_back("estimate below last known load at BS " + std::to_string(k + 1));
  if (next.size() != n) r.violations.push_back("decider returned a policy of the wrong length");

  policy_ = std::move(next);
  ++slot_;
  return r;
}

std::vector<SlotResult> Simulation::run(Decider& decider, int num_slots) {
  std::vector<SlotResult> out;
  out.reserve(static_cast<std::size_t>(std::max(num_slots, 0)));
  for (int s = 0; s < num_slots; ++s) out.push_back(run_slot(decider));
  return out;
}

NetworkEnvironment::NetworkEnvironment(ScenarioConfig config, std::uint64_t seed, LoadMode mode,
                                       std::optional<ErrorRegime> regime)
    : config_(std::move(config)), seed_(seed), mode_(mode), regime_(std::move(regime)) {
  config_.validate();
  costs_ = config_.cost_model();
  if (mode_ == LoadMode::kEstimated && !regime_) throw std::domain_error("estimated mode needs an error regime");
}

std::vector<double> NetworkEnvironment::offered_rho(const SlotTruth& truth) const {
  const auto& stations = scenario_->stations();
  std::vector<double> offered(stations.size(), 0.0);
  for (int i = 0; i < truth.realized_links.num_ues(); ++i) {
    const auto ranking = sinr_ranking(truth.realized_links, i);
    if (ranking.empty()) continue;
    offered[static_cast<std::size_t>(ranking.front())] += truth.ues[static_cast<std::size_t>(i)].demand_rb;
  }
  for (std::size_t j = 0; j < stations.size(); ++j) offered[j] /= stations[j].capacity_rb;
  return offered;
}

Observation NetworkEnvironment::reset() {
  ++episode_;
  scenario_ = std::make_unique<Scenario>(
      config_, derive_seed(seed_, {static_cast<std::uint64_t>(StreamTag::kEpisode), static_cast<std::uint64_t>(episode_)}));
  slot_ = 0;
  const Policy initial = Policy::all_on(config_.num_sbs);
  const SlotTruth truth = scenario_->realize(0, initial);
  return {initial, offered_rho(truth)};
}

StepOutcome NetworkEnvironment::step(const Policy& action) {
  if (!scenario_) throw std::logic_error("reset() must be called before step()");
  if (slot_ >= static_cast<int>(scenario_->profile().psi.size()))
    throw std::domain_error("episode is longer than the demand profile");
  const SlotTruth truth = scenario_->realize(slot_, action);
  const int n = config_.num_sbs;

  std::vector<double> rho(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    rho[static_cast<std::size_t>(k)] = truth.realized_loads[static_cast<std::size_t>(k)].true_rho;
    if (mode_ == LoadMode::kEstimated && action.on(k))
      rho[static_cast<std::size_t>(k)] = inject_error(rho[static_cast<std::size_t>(k)], *regime_,
                                                      regime_->scale(scenario_->error_unit_draw(k, slot_)));
  }
  const double haps_rho = truth.realized_loads[static_cast<std::size_t>(n)].true_rho;
  const double power = network_power(action, rho, haps_rho, costs_.sbs, costs_.haps);
  const bool all_connected = connected_count(truth.realized) == config_.num_ues;
  ++slot_;
  return {all_connected ? power : costs_.penalty, offered_rho(truth)};
}

}  // namespace vhetcs
