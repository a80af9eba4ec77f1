// Command-line entry points: campaign runs, the FSD/LSD timing benchmark, the
// estimation-error witness search, single-scenario traces and agent training.

#include <CLI11.hpp>
#include <omp.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "vhetcs/campaign.hpp"
#include "vhetcs/config.hpp"
#include "vhetcs/csv_io.hpp"
#include "vhetcs/rng.hpp"

namespace fs = std::filesystem;
using namespace vhetcs;

namespace {

struct CommonOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string mode;
  std::string algorithms;
  std::string regimes;
  std::optional<int> threads;
};

void add_common(CLI::App* app, CommonOptions& o) {
  app->add_option("--config", o.config, "JSON experiment config")->envname("VHETCS_CONFIG");
  app->add_option("--seed", o.seed, "master seed")->envname("VHETCS_SEED");
  app->add_option("--out", o.out, "output directory")->envname("VHETCS_OUT");
  app->add_option("--mode", o.mode, "both, oracle or estimated")->envname("VHETCS_MODE");
  app->add_option("--algorithms", o.algorithms, "comma-separated list from ES,FSD,LSD,A3")
      ->envname("VHETCS_ALGORITHMS");
  app->add_option("--regimes", o.regimes, "comma-separated regime names")->envname("VHETCS_REGIMES");
  app->add_option("--threads", o.threads, "worker threads (0 = OpenMP default)")->envname("VHETCS_THREADS");
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

ExperimentConfig resolve(const CommonOptions& o) {
  ExperimentConfig c = o.config.empty() ? parse_config(nlohmann::json::object()) : load_config_file(o.config);
  if (o.seed) c.campaign.master_seed = *o.seed;
  if (!o.out.empty()) c.out_dir = o.out;
  bool reselect = false;
  if (!o.mode.empty()) {
    c.mode = parse_mode(o.mode);
    reselect = true;
  }
  if (!o.algorithms.empty()) {
    c.algorithms = split_list(o.algorithms);
    for (const auto& a : c.algorithms) (void)parse_algorithm(a);
    reselect = true;
  }
  if (reselect) c.apply_selection();
  if (!o.regimes.empty()) {
    c.campaign.regimes.clear();
    for (const auto& name : split_list(o.regimes)) c.campaign.regimes.push_back(c.regime(name));
  }
  if (o.threads) c.threads = *o.threads;
  if (c.threads > 0) omp_set_num_threads(c.threads);
  c.campaign.validate();
  return c;
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream f(p);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  return f;
}

void write_echo(const ExperimentConfig& c) {
  auto f = open_out(fs::path(c.out_dir) / "effective_config.json");
  f << c.to_json().dump(2) << '\n';
}

int cmd_run(const CommonOptions& o) {
  ExperimentConfig c = resolve(o);
  fs::create_directories(c.out_dir);
  write_echo(c);
  c.campaign.keep_slots = true;
  const CampaignResult result = run_campaign(c.campaign);
  for (const auto& n : result.notices) std::cerr << "notice: " << n << '\n';

  {
    auto f = open_out(fs::path(c.out_dir) / "results.csv");
    write_results(f, result);
  }
  {
    auto f = open_out(fs::path(c.out_dir) / "decisions.csv");
    write_decision_log(f, result);
  }
  const auto rows = relative_differences(result);
  {
    auto f = open_out(fs::path(c.out_dir) / "relative_difference.csv");
    write_relative_differences(f, rows);
  }
  std::vector<std::string> regimes;
  for (const auto& r : c.campaign.regimes) regimes.push_back(r.name);
  if (regimes.empty()) regimes.push_back("none");
  for (int n : c.campaign.n_values)
    for (const auto& regime : regimes) {
      auto f = open_out(fs::path(c.out_dir) / ("plot_n" + std::to_string(n) + "_" + regime + ".csv"));
      write_plot_data(f, result, n, regime);
    }

  for (const auto& r : rows)
    if (r.other == "ES_eps0" || r.other == "ES_epsgt0")
      std::cout << "n=" << r.n << " e=" << r.num_ues << " regime=" << r.regime << " A3 vs " << r.other << ": "
                << r.percent << "%\n";

  const std::size_t violations = result.violation_count();
  if (violations > 0) {
    std::size_t shown = 0;
    for (const auto& run : result.runs)
      for (const auto& v : run.violations)
        if (shown++ < 20) std::cerr << "violation: " << run.series << " n=" << run.n << " e=" << run.num_ues
                                    << " seed=" << run.seed << " " << v << '\n';
    std::cerr << violations << " invariant violation(s)\n";
    return 1;
  }
  std::cout << result.runs.size() << " runs written to " << c.out_dir << '\n';
  return 0;
}

int cmd_benchmark(const CommonOptions& o, int num_ues) {
  ExperimentConfig c = resolve(o);
  fs::create_directories(c.out_dir);
  write_echo(c);
  BenchmarkConfig b;
  b.base = c.campaign.base;
  if (num_ues > 0) {
    b.base.num_ues = num_ues;
  } else if (auto it = c.campaign.ue_counts.find(b.base.num_sbs); it != c.campaign.ue_counts.end()) {
    b.base.num_ues = it->second.front();
  }
  b.slot_counts = c.bench_slot_counts;
  b.repeats = c.bench_repeats;
  b.mode = c.mode == ModeSelection::kOracle ? LoadMode::kOracle : LoadMode::kEstimated;
  if (!c.campaign.regimes.empty()) b.regime = c.campaign.regimes.front();
  b.fsd = c.campaign.fsd;
  b.lsd = c.campaign.lsd;
  b.master_seed = c.campaign.master_seed;
  if (QTable::cells_for(StateDesign::kFsd, b.base.num_sbs) > b.fsd.max_table_cells) {
    std::cerr << "notice: FSD skipped for n = " << b.base.num_sbs << " (table exceeds the memory cap)\n";
    b.designs = {StateDesign::kLsd};
  }
  const auto rows = benchmark_elapsed(b);
  auto f = open_out(fs::path(c.out_dir) / "benchmark.csv");
  write_benchmark(f, rows);
  write_benchmark(std::cout, rows);
  return 0;
}

int cmd_theorem1(const CommonOptions& o) {
  ExperimentConfig c = resolve(o);
  fs::create_directories(c.out_dir);
  write_echo(c);
  FlipSearchConfig t;
  t.base = c.campaign.base;
  if (auto it = c.campaign.ue_counts.find(t.base.num_sbs); it != c.campaign.ue_counts.end())
    t.ue_counts = it->second;
  t.regime = c.regime(c.theorem1_regime);
  t.max_instances = c.theorem1_max_instances;
  t.master_seed = c.campaign.master_seed;
  const FlipSearch search = find_flip_witness(t);
  std::cout << "instances tried: " << search.instances_tried << ", slots checked: " << search.slots_checked << '\n';
  if (!search.witness) {
    std::cerr << "no witness found\n";
    return 2;
  }
  auto f = open_out(fs::path(c.out_dir) / "theorem1_witness.txt");
  write_flip_witness(f, *search.witness);
  write_flip_witness(std::cout, *search.witness);
  return 0;
}

int cmd_simulate(const CommonOptions& o, const std::string& algorithm, int num_ues, int seed_index) {
  ExperimentConfig c = resolve(o);
  fs::create_directories(c.out_dir);
  write_echo(c);
  ScenarioConfig sc = c.campaign.base;
  if (num_ues > 0) sc.num_ues = num_ues;
  const Series series = Series::parse(algorithm);
  std::optional<ErrorRegime> regime;
  if (series.mode == LoadMode::kEstimated && series.algorithm != Algorithm::kA3) {
    if (c.campaign.regimes.empty()) throw std::runtime_error("estimated series need a regime");
    regime = c.campaign.regimes.front();
  }
  const std::uint64_t seed = scenario_seed(c.campaign.master_seed, sc.num_sbs, sc.num_ues, seed_index);
  Scenario scenario(sc, seed);
  {
    auto f = open_out(fs::path(c.out_dir) / "topology.csv");
    write_topology(f, scenario.stations());
  }
  CampaignConfig cc = c.campaign;
  cc.keep_slots = true;
  Simulation sim(scenario, series.algorithm == Algorithm::kA3 ? LoadMode::kOracle : series.mode, regime);
  std::unique_ptr<Decider> decider;
  switch (series.algorithm) {
    case Algorithm::kA3: decider = std::make_unique<A3Decider>(); break;
    case Algorithm::kEs: decider = std::make_unique<EsDecider>(true, cc.es); break;
    case Algorithm::kFsd: decider = std::make_unique<QDecider>(StateDesign::kFsd, cc.fsd); break;
    case Algorithm::kLsd: decider = std::make_unique<QDecider>(StateDesign::kLsd, cc.lsd); break;
  }
  auto demands = open_out(fs::path(c.out_dir) / "demands.csv");
  auto assoc = open_out(fs::path(c.out_dir) / "associations.csv");
  auto slots = open_out(fs::path(c.out_dir) / "slots.csv");
  write_demand_header(demands);
  write_association_header(assoc);
  slots.precision(12);
  slots << "slot,algorithm,regime,policy,power_W,realized_power_W,energy_J,connected,unconnected,next_policy,"
           "decision_time_s\n";
  int violations = 0;
  for (int t = 0; t < sc.num_slots; ++t) {
    const SlotResult r = sim.run_slot(*decider);
    write_demand_rows(demands, sim.last_truth());
    write_association_rows(assoc, sim.last_truth());
    slots << r.slot << ',' << series.label() << ',' << (regime ? regime->name : "none") << ','
          << r.policy.to_string() << ',' << r.power_w << ',' << r.realized_power_w << ',' << r.energy_j << ','
          << r.connected << ',' << r.unconnected << ',' << r.next_policy.to_string() << ',' << r.decision_time_s
          << '\n';
    for (const auto& v : r.violations) {
      std::cerr << "violation: slot " << t << ": " << v << '\n';
      ++violations;
    }
  }
  std::cout << "simulated " << sc.num_slots << " slots of " << series.label() << " into " << c.out_dir << '\n';
  return violations > 0 ? 1 : 0;
}

int cmd_train(const CommonOptions& o, const std::string& design_name, int num_ues, bool trace) {
  ExperimentConfig c = resolve(o);
  fs::create_directories(c.out_dir);
  write_echo(c);
  const StateDesign design = design_name == "FSD" ? StateDesign::kFsd : StateDesign::kLsd;
  ScenarioConfig sc = c.campaign.base;
  if (num_ues > 0) sc.num_ues = num_ues;
  AgentConfig agent = design == StateDesign::kFsd ? c.campaign.fsd : c.campaign.lsd;
  agent.record_trace = trace;
  if (agent.slots_per_episode > sc.num_slots)
    throw ConfigError("agent.slots_per_episode (" + std::to_string(agent.slots_per_episode) +
                      ") exceeds scenario.num_slots (" + std::to_string(sc.num_slots) + ")");
  const bool estimated = c.mode != ModeSelection::kOracle && !c.campaign.regimes.empty();
  NetworkEnvironment env(sc, c.campaign.master_seed, estimated ? LoadMode::kEstimated : LoadMode::kOracle,
                         estimated ? std::optional(c.campaign.regimes.front()) : std::nullopt);
  Rng rng(c.campaign.master_seed, StreamTag::kExploration, {static_cast<std::uint64_t>(design)});
  const TrainingResult result = train(design, env, agent, rng);
  {
    auto f = open_out(fs::path(c.out_dir) / ("qtable_" + design_name + ".csv"));
    write_qtable(f, result.table);
  }
  if (trace) {
    auto f = open_out(fs::path(c.out_dir) / ("trace_" + design_name + ".csv"));
    write_training_trace(f, result.trace);
  }
  std::cout << design_name << ": " << result.episodes_run << " episodes, " << result.steps << " steps, "
            << (result.converged ? "converged" : "not converged") << ", final epsilon " << result.final_epsilon
            << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cell-switching simulator for terrestrial small cells under a HAPS overlay"};
  app.require_subcommand(1);

  CommonOptions run_o, bench_o, thm_o, sim_o, train_o;
  auto* run = app.add_subcommand("run", "run the campaign matrix and write results, plot data and relative differences");
  add_common(run, run_o);

  auto* bench = app.add_subcommand("benchmark", "time FSD against LSD over increasing slot counts");
  add_common(bench, bench_o);
  int bench_ues = 0;
  bench->add_option("--ues", bench_ues, "UE count (default: first ue_counts entry for n_sbs)");

  auto* thm = app.add_subcommand("theorem1", "search seeded instances for an estimated-vs-oracle ES disagreement");
  add_common(thm, thm_o);

  auto* sim = app.add_subcommand("simulate", "trace one scenario slot by slot");
  add_common(sim, sim_o);
  std::string sim_series = "ES_eps0";
  int sim_ues = 0, sim_seed_index = 0;
  sim->add_option("--series", sim_series, "series label, e.g. ES_eps0, ES_epsgt0, LSD_epsgt0, A3");
  sim->add_option("--ues", sim_ues, "UE count (default: num_ues)");
  sim->add_option("--seed-index", sim_seed_index, "seed index within the campaign");

  auto* trn = app.add_subcommand("train", "train one agent on the full network environment and save its Q-table");
  add_common(trn, train_o);
  std::string design = "LSD";
  int train_ues = 0;
  bool trace = false;
  trn->add_option("--design", design, "FSD or LSD")->check(CLI::IsMember({"FSD", "LSD"}));
  trn->add_option("--ues", train_ues, "UE count (default: num_ues)");
  trn->add_flag("--trace", trace, "write the per-step training trace");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return cmd_run(run_o);
    if (*bench) return cmd_benchmark(bench_o, bench_ues);
    if (*thm) return cmd_theorem1(thm_o);
    if (*sim) return cmd_simulate(sim_o, sim_series, sim_ues, sim_seed_index);
    if (*trn) return cmd_train(train_o, design, train_ues, trace);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
