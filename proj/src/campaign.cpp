#include "vhetcs/campaign.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <tuple>

#include "vhetcs/rng.hpp"

namespace vhetcs {

std::string Series::label() const {
  switch (algorithm) {
    case Algorithm::kA3: return "A3";
    case Algorithm::kEs: return mode == LoadMode::kOracle ? "ES_eps0" : "ES_epsgt0";
    case Algorithm::kFsd: return mode == LoadMode::kOracle ? "FSD_eps0" : "FSD_epsgt0";
    case Algorithm::kLsd: return mode == LoadMode::kOracle ? "LSD_eps0" : "LSD_epsgt0";
  }
  return "?";
}

Series Series::parse(const std::string& label) {
  for (Algorithm a : {Algorithm::kEs, Algorithm::kFsd, Algorithm::kLsd, Algorithm::kA3})
    for (LoadMode m : {LoadMode::kOracle, LoadMode::kEstimated}) {
      const Series s{a, a == Algorithm::kA3 ? LoadMode::kOracle : m};
      if (s.label() == label) return s;
    }
  throw std::invalid_argument("unknown series '" + label +
                              "' (expected ES_eps0, ES_epsgt0, FSD_eps0, FSD_epsgt0, LSD_eps0, LSD_epsgt0 or A3)");
}

std::vector<Series> default_series() {
  return {{Algorithm::kEs, LoadMode::kOracle},
          {Algorithm::kEs, LoadMode::kEstimated},
          {Algorithm::kFsd, LoadMode::kEstimated},
          {Algorithm::kLsd, LoadMode::kEstimated},
          {Algorithm::kA3, LoadMode::kOracle}};
}

double ue_density(int num_ues, double area_side_m) { return num_ues / (area_side_m * area_side_m); }

void CampaignConfig::validate() const {
  base.validate();
  if (n_values.empty()) throw std::domain_error("n_values must not be empty");
  for (int n : n_values) {
    if (n < 1) throw std::domain_error("n_values entries must be positive");
    const auto it = ue_counts.find(n);
    if (it == ue_counts.end() || it->second.empty())
      throw std::domain_error("ue_counts has no entry for n = " + std::to_string(n));
    for (int e : it->second)
      if (e < 0) throw std::domain_error("ue_counts entries must be non-negative");
  }
  for (const auto& r : regimes) r.validate();
  if (series.empty()) throw std::domain_error("series must not be empty");
  const bool needs_regime = std::any_of(series.begin(), series.end(),
                                        [](const Series& s) { return s.mode == LoadMode::kEstimated; });
  if (needs_regime && regimes.empty()) throw std::domain_error("estimated series need at least one regime");
  if (seeds < 1) throw std::domain_error("seeds must be positive");
  fsd.validate();
  lsd.validate();
}

std::uint64_t scenario_seed(std::uint64_t master, int n, int num_ues, int seed) {
  return derive_seed(master, {static_cast<std::uint64_t>(StreamTag::kInstance), static_cast<std::uint64_t>(n),
                              static_cast<std::uint64_t>(num_ues), static_cast<std::uint64_t>(seed)});
}

std::size_t CampaignResult::violation_count() const {
  std::size_t c = 0;
  for (const auto& r : runs) c += r.violations.size();
  return c;
}

namespace {

std::unique_ptr<Decider> make_decider(Algorithm a, const CampaignConfig& config) {
  switch (a) {
    case Algorithm::kA3: return std::make_unique<A3Decider>();
    case Algorithm::kEs: return std::make_unique<EsDecider>(true, config.es);
    case Algorithm::kFsd: return std::make_unique<QDecider>(StateDesign::kFsd, config.fsd);
    case Algorithm::kLsd: return std::make_unique<QDecider>(StateDesign::kLsd, config.lsd);
  }
  throw std::logic_error("unknown algorithm");
}

struct Job {
  int n;
  int num_ues;
  Series series;
  std::optional<ErrorRegime> regime;
  int seed;
};

}  // namespace

RunSummary run_single(const ScenarioConfig& scenario_config, std::uint64_t seed_value, const Series& series,
                      const std::optional<ErrorRegime>& regime, const CampaignConfig& config, int seed) {
  Scenario scenario(scenario_config, seed_value);
  // A3 never reads estimates; its energy is the closed form at true loads.
  const LoadMode mode = series.algorithm == Algorithm::kA3 ? LoadMode::kOracle : series.mode;
  Simulation sim(scenario, mode, mode == LoadMode::kEstimated ? regime : std::nullopt);
  auto decider = make_decider(series.algorithm, config);

  RunSummary s;
  s.n = scenario_config.num_sbs;
  s.num_ues = scenario_config.num_ues;
  s.delta = ue_density(s.num_ues, scenario_config.deployment.area_side_m);
  s.regime = regime ? regime->name : "none";
  s.series = series.label();
  s.algorithm = series.algorithm;
  s.mode = mode;
  s.seed = seed;
  double power_sum = 0.0;
  for (int t = 0; t < scenario_config.num_slots; ++t) {
    SlotResult r = sim.run_slot(*decider);
    power_sum += r.power_w;
    s.total_energy_j += r.energy_j;
    s.realized_energy_j += slot_energy(r.realized_power_w, scenario_config.slot_duration_s);
    s.unconnected_total += r.unconnected;
    s.decision_time_s += r.decision_time_s;
    if (r.fallback) ++s.fallback_slots;
    for (auto& v : r.violations) s.violations.push_back("slot " + std::to_string(t) + ": " + v);
    if (config.keep_slots) s.slots.push_back(std::move(r));
  }
  s.mean_power_w = power_sum / scenario_config.num_slots;
  return s;
}

CampaignResult run_campaign(const CampaignConfig& config) {
  config.validate();
  CampaignResult result;
  std::vector<Job> jobs;
  for (int n : config.n_values) {
    for (int e : config.ue_counts.at(n)) {
      for (const Series& series : config.series) {
        if (series.algorithm == Algorithm::kFsd &&
            QTable::cells_for(StateDesign::kFsd, n) > config.fsd.max_table_cells) {
          const std::string notice = "FSD skipped for n = " + std::to_string(n) + ": table of " +
                                     std::to_string(QTable::cells_for(StateDesign::kFsd, n)) +
                                     " cells exceeds the cap of " + std::to_string(config.fsd.max_table_cells);
          if (std::find(result.notices.begin(), result.notices.end(), notice) == result.notices.end())
            result.notices.push_back(notice);
          continue;
        }
        std::vector<std::optional<ErrorRegime>> regimes;
        if (series.algorithm == Algorithm::kA3 || series.mode == LoadMode::kOracle)
          regimes.emplace_back(std::nullopt);
        else
          for (const auto& r : config.regimes) regimes.emplace_back(r);
        for (const auto& r : regimes)
          for (int seed = 0; seed < config.seeds; ++seed) jobs.push_back({n, e, series, r, seed});
      }
    }
  }

  result.runs.resize(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  const long long count = static_cast<long long>(jobs.size());
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < count; ++i) {
    const Job& job = jobs[static_cast<std::size_t>(i)];
    try {
      ScenarioConfig sc = config.base;
      sc.num_sbs = job.n;
      sc.num_ues = job.num_ues;
      result.runs[static_cast<std::size_t>(i)] =
          run_single(sc, scenario_seed(config.master_seed, job.n, job.num_ues, job.seed), job.series, job.regime,
                     config, job.seed);
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return result;
}

std::optional<double> mean_energy(const CampaignResult& result, int n, int num_ues, const std::string& series,
                                  const std::string& regime) {
  double sum = 0.0;
  int count = 0;
  for (const auto& r : result.runs)
    if (r.n == n && r.num_ues == num_ues && r.series == series && r.regime == regime) {
      sum += r.total_energy_j;
      ++count;
    }
  if (count == 0) return std::nullopt;
  return sum / count;
}

std::vector<RelativeDifferenceRow> relative_differences(const CampaignResult& result, const std::string& baseline) {
  // Cells in first-appearance order; series without a regime are compared once
  // per regime present in the cell so every figure panel gets its rows.
  std::vector<std::tuple<int, int>> cells;
  std::vector<std::string> regimes;
  std::vector<std::string> labels;
  for (const auto& r : result.runs) {
    const auto cell = std::make_tuple(r.n, r.num_ues);
    if (std::find(cells.begin(), cells.end(), cell) == cells.end()) cells.push_back(cell);
    if (r.regime != "none" && std::find(regimes.begin(), regimes.end(), r.regime) == regimes.end())
      regimes.push_back(r.regime);
    if (r.series != baseline && std::find(labels.begin(), labels.end(), r.series) == labels.end())
      labels.push_back(r.series);
  }
  if (regimes.empty()) regimes.push_back("none");

  std::vector<RelativeDifferenceRow> rows;
  for (const auto& [n, e] : cells) {
    const auto base = mean_energy(result, n, e, baseline, "none");
    if (!base || *base <= 0.0) continue;
    for (const auto& regime : regimes) {
      for (const auto& label : labels) {
        auto other = mean_energy(result, n, e, label, regime);
        if (!other) other = mean_energy(result, n, e, label, "none");
        if (!other) continue;
        RelativeDifferenceRow row;
        row.n = n;
        row.num_ues = e;
        row.delta = ue_density(e, 1025.0);
        for (const auto& r : result.runs)
          if (r.n == n && r.num_ues == e) {
            row.delta = r.delta;
            break;
          }
        row.regime = regime;
        row.baseline = baseline;
        row.other = label;
        row.baseline_energy_j = *base;
        row.other_energy_j = *other;
        row.percent = 100.0 * (*base - *other) / *base;
        rows.push_back(row);
      }
    }
  }
  return rows;
}

std::vector<BenchmarkRow> benchmark_elapsed(const BenchmarkConfig& config) {
  config.base.validate();
  if (config.repeats < 1) throw std::domain_error("repeats must be positive");
  std::vector<BenchmarkRow> rows;
  for (StateDesign design : config.designs) {
    const AgentConfig& agent = design == StateDesign::kFsd ? config.fsd : config.lsd;
    for (int slots : config.slot_counts) {
      if (slots < 0 || slots > config.base.num_slots)
        throw std::domain_error("slot counts must lie in [0, num_slots]");
      std::vector<double> times;
      std::uint64_t steps = 0;
      for (int rep = 0; rep < config.repeats; ++rep) {
        Scenario scenario(config.base,
                          derive_seed(config.master_seed, {static_cast<std::uint64_t>(StreamTag::kInstance),
                                                           static_cast<std::uint64_t>(rep)}));
        Simulation sim(scenario, config.mode,
                       config.mode == LoadMode::kEstimated ? std::optional(config.regime) : std::nullopt);
        QDecider decider(design, agent);
        double elapsed = 0.0;
        for (int t = 0; t < slots; ++t) elapsed += sim.run_slot(decider).decision_time_s;
        times.push_back(elapsed);
        steps += decider.total_steps();
      }
      BenchmarkRow row;
      row.design = design;
      row.n = config.base.num_sbs;
      row.slots = slots;
      row.repeats = config.repeats;
      double sum = 0.0;
      for (double x : times) sum += x;
      row.mean_s = sum / times.size();
      double var = 0.0;
      for (double x : times) var += (x - row.mean_s) * (x - row.mean_s);
      row.stddev_s = times.size() > 1 ? std::sqrt(var / (times.size() - 1)) : 0.0;
      row.mean_steps = steps / static_cast<std::uint64_t>(config.repeats);
      rows.push_back(row);
    }
  }
  return rows;
}

FlipSearch find_flip_witness(const FlipSearchConfig& config) {
  config.base.validate();
  config.regime.validate();
  if (config.ue_counts.empty()) throw std::domain_error("ue_counts must not be empty");
  FlipSearch search;
  const CostModel costs = config.base.cost_model();
  for (int i = 0; i < config.max_instances; ++i) {
    ScenarioConfig sc = config.base;
    sc.num_ues = config.ue_counts[static_cast<std::size_t>(i) % config.ue_counts.size()];
    const std::uint64_t seed = derive_seed(
        config.master_seed, {static_cast<std::uint64_t>(StreamTag::kInstance), static_cast<std::uint64_t>(i)});
    Scenario scenario(sc, seed);
    Simulation sim(scenario, LoadMode::kEstimated, config.regime);
    EsDecider decider;
    ++search.instances_tried;
    for (int t = 0; t < sc.num_slots; ++t) {
      sim.run_slot(decider);
      ++search.slots_checked;
      const EsDecision oracle = es_select(sim.oracle_view(), costs);
      const EsDecision estimated = es_select(sim.estimated_view(), costs);
      if (oracle.best.policy == estimated.best.policy) continue;

      FlipWitness w;
      w.instance = i;
      w.scenario_seed = seed;
      w.num_ues = sc.num_ues;
      w.slot = t;
      w.oracle_policy = oracle.best.policy;
      w.estimated_policy = estimated.best.policy;
      w.error_draws = sim.error_draws();
      for (const auto& rec : sim.load_records()) {
        w.true_rho.push_back(rec.true_rho);
        w.last_known_rho.push_back(rec.last_known_rho);
        w.estimated_rho.push_back(rec.estimated_rho);
      }
      w.oracle_power_true_w = oracle.best.power_w;
      w.estimated_power_true_w = evaluate_policy(w.estimated_policy, sim.oracle_view(), costs).power_w;
      w.estimated_power_erroneous_w = estimated.best.power_w;
      w.oracle_power_erroneous_w = evaluate_policy(w.oracle_policy, sim.estimated_view(), costs).power_w;
      search.witness = std::move(w);
      return search;
    }
  }
  return search;
}

}  // namespace vhetcs
