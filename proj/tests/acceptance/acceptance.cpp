// Acceptance gate: one PASS/FAIL line per criterion.
// Usage: acceptance <path-to-property-test-binary>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "../support.hpp"
#include "vhetcs/campaign.hpp"
#include "vhetcs/csv_io.hpp"
#include "vhetcs/engine.hpp"
#include "vhetcs/qlearn.hpp"
#include "vhetcs/rng.hpp"

using namespace vhetcs;

namespace {

constexpr std::uint64_t kMasterSeed = 20240611;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v, int digits = 3) {
  std::ostringstream ss;
  ss.setf(std::ios::fixed);
  ss.precision(digits);
  ss << v;
  return ss.str();
}

double symmetric_rd(double a, double b) { return relative_difference(std::max(a, b), std::min(a, b)); }

// Frozen-load instance: one scenario whose every slot repeats slot 0.
ScenarioConfig frozen_config() {
  ScenarioConfig c;
  c.num_sbs = 4;
  c.num_ues = 100;
  c.frozen = true;
  return c;
}

double run_energy(const ScenarioConfig& cfg, std::uint64_t seed, Decider& decider) {
  Scenario sc(cfg, seed);
  Simulation sim(sc, LoadMode::kOracle);
  double energy = 0.0;
  for (const auto& r : sim.run(decider, cfg.num_slots)) energy += r.energy_j;
  return energy;
}

struct FrozenComparison {
  std::vector<double> es, fsd, lsd;
};

const FrozenComparison& frozen_comparison() {
  static const FrozenComparison result = [] {
    FrozenComparison out;
    const ScenarioConfig cfg = frozen_config();
    for (int s = 0; s < 5; ++s) {
      const std::uint64_t seed = scenario_seed(kMasterSeed, 4, 100, s);
      EsDecider es;
      out.es.push_back(run_energy(cfg, seed, es));

      Scenario probe(cfg, seed);
      Simulation sim(probe, LoadMode::kOracle);
      A3Decider a3;
      sim.run_slot(a3);
      for (StateDesign d : {StateDesign::kFsd, StateDesign::kLsd}) {
        LoadsViewEnvironment env(sim.oracle_view(), sim.cost_model(), Policy::all_on(4));
        Rng rng(kMasterSeed, StreamTag::kExploration, {static_cast<std::uint64_t>(s), static_cast<std::uint64_t>(d)});
        const TrainingResult trained = train(d, env, AgentConfig::defaults(d), rng);
        QDecider greedy(d, trained.table);
        (d == StateDesign::kFsd ? out.fsd : out.lsd).push_back(run_energy(cfg, seed, greedy));
      }
    }
    return out;
  }();
  return result;
}

Outcome criterion1() {
  const auto& c = frozen_comparison();
  double worst_fsd = 0.0, worst_lsd = 0.0;
  for (std::size_t s = 0; s < c.es.size(); ++s) {
    worst_fsd = std::max(worst_fsd, symmetric_rd(c.es[s], c.fsd[s]));
    worst_lsd = std::max(worst_lsd, symmetric_rd(c.es[s], c.lsd[s]));
  }
  return {worst_fsd <= 1.0 && worst_lsd <= 1.0,
          "max per-seed relative difference to ES over 5 seeds: FSD " + fmt(worst_fsd) + "%, LSD " +
              fmt(worst_lsd) + "% (limit 1.0%)"};
}

Outcome criterion2() {
  const auto& c = frozen_comparison();
  double worst = 0.0;
  for (std::size_t s = 0; s < c.es.size(); ++s) worst = std::max(worst, symmetric_rd(c.fsd[s], c.lsd[s]));
  return {worst <= 0.5, "max per-seed LSD vs FSD relative difference " + fmt(worst) + "% (limit 0.5%)"};
}

const CampaignResult& es_campaign() {
  static const CampaignResult result = [] {
    CampaignConfig c;
    c.series = {{Algorithm::kEs, LoadMode::kOracle}, {Algorithm::kEs, LoadMode::kEstimated},
                {Algorithm::kA3, LoadMode::kOracle}};
    c.seeds = 5;
    c.master_seed = kMasterSeed;
    return run_campaign(c);
  }();
  return result;
}

Outcome criterion3() {
  const auto rows = relative_differences(es_campaign());
  // (n, regime, series) -> percent by density
  std::map<std::tuple<int, std::string, std::string>, std::vector<std::pair<int, double>>> curves;
  for (const auto& r : rows) curves[{r.n, r.regime, r.other}].emplace_back(r.num_ues, r.percent);
  bool pass = !curves.empty();
  std::ostringstream detail;
  for (auto& [key, pts] : curves) {
    std::sort(pts.begin(), pts.end());
    bool decreasing = pts.size() == 3;
    for (std::size_t i = 1; i < pts.size(); ++i) decreasing = decreasing && pts[i].second < pts[i - 1].second;
    pass = pass && decreasing;
    detail << "\n    n=" << std::get<0>(key) << " " << std::get<2>(key) << " " << std::get<1>(key) << ":";
    for (const auto& [e, p] : pts) detail << " " << fmt(p, 2) << "%";
    detail << (decreasing ? "" : "  <-- not strictly decreasing");
  }
  // Reported against the published figures; magnitudes are not gated.
  auto at = [&](int n, const std::string& series, std::size_t idx) {
    return curves[{n, "eps1", series}].at(idx).second;
  };
  detail << "\n    reported (not gated): n=4 ES_eps0 " << fmt(at(4, "ES_eps0", 0), 2) << "% -> "
         << fmt(at(4, "ES_eps0", 2), 2) << "% (published 14.6% -> 10.15%); n=8 ES_eps0 "
         << fmt(at(8, "ES_eps0", 0), 2) << "% -> " << fmt(at(8, "ES_eps0", 2), 2)
         << "% (published 18.09% -> 8.8%)";
  return {pass, "A3 vs ES relative difference decreases with density for n=4 and n=8, every regime" + detail.str()};
}

Outcome criterion4() {
  FlipSearchConfig t;
  t.master_seed = kMasterSeed;
  const auto start = std::chrono::steady_clock::now();
  const FlipSearch s = find_flip_witness(t);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!s.witness) return {false, "no witness in " + std::to_string(s.instances_tried) + " instances"};
  std::ostringstream log;
  write_flip_witness(log, *s.witness);
  std::string indented;
  std::istringstream lines(log.str());
  for (std::string line; std::getline(lines, line);) indented += "\n    " + line;
  const bool pass = secs < 60.0 && !(s.witness->oracle_policy == s.witness->estimated_policy);
  return {pass, "witness after " + std::to_string(s.instances_tried) + " instance(s), " +
                    std::to_string(s.slots_checked) + " slot(s), " + fmt(secs, 2) + " s" + indented};
}

Outcome criterion5() {
  const CampaignResult& r = es_campaign();
  const char* order[] = {"none", "eps1", "eps2", "eps3"};
  std::map<std::tuple<int, int, int>, std::map<std::string, const RunSummary*>> runs;
  std::map<std::pair<int, int>, std::map<std::string, double>> mean;
  for (const auto& run : r.runs) {
    if (run.algorithm != Algorithm::kEs) continue;
    runs[{run.n, run.num_ues, run.seed}][run.regime] = &run;
    mean[{run.n, run.num_ues}][run.regime] += run.total_energy_j;
  }
  int checked = 0, bad = 0;
  std::ostringstream failures;
  for (const auto& [key, by_regime] : runs) {
    ++checked;
    bool ok = true;
    for (int i = 1; i < 4; ++i) ok = ok && by_regime.at(order[i - 1])->total_energy_j <= by_regime.at(order[i])->total_energy_j;
    if (ok) continue;
    ++bad;
    failures << "\n    n=" << std::get<0>(key) << " e=" << std::get<1>(key) << " seed=" << std::get<2>(key)
             << " energy J / unconnected UE-slots:";
    for (const char* name : order)
      failures << " " << name << "=" << fmt(by_regime.at(name)->total_energy_j, 1) << "/"
               << by_regime.at(name)->unconnected_total;
  }
  // Cell means are reported for context only.
  int mean_bad = 0;
  for (const auto& [cell, m] : mean)
    for (int i = 1; i < 4; ++i) mean_bad += m.at(order[i - 1]) > m.at(order[i]) ? 1 : 0;
  return {checked > 0 && bad == 0,
          std::to_string(checked) + " seed-matched runs, " + std::to_string(bad) + " out of order; seed-mean order " +
              (mean_bad == 0 ? "holds" : "broken") + " in every (n, e) cell" + failures.str()};
}

Outcome criterion6() {
  Rng rng(kMasterSeed, StreamTag::kInstance, {6});
  int mismatches = 0;
  for (int c = 0; c < 1000; ++c) {
    const int n = rng.uniform_int(1, 3);
    const LoadsView v = testing::random_view(rng, n, rng.uniform(0.0, 1.2),
                                             rng.uniform() < 0.5 ? LoadMode::kOracle : LoadMode::kEstimated);
    const CostModel m = testing::default_costs(n);
    const EsDecision d = es_select(v, m);
    const testing::NaiveChoice naive = testing::naive_es(v, m);
    const double chosen = d.fallback ? m.penalty : d.best.cost;
    if (chosen != naive.cost) ++mismatches;
  }
  return {mismatches == 0, "1000 random instances with n <= 3, " + std::to_string(mismatches) + " cost mismatches"};
}

Outcome criterion7() {
  std::vector<std::pair<std::string, bool>> checks;
  auto near = [](double a, double b) { return std::abs(a - b) <= 1e-9; };
  checks.emplace_back("bs_power(rho=0.5) = 64.19", near(bs_power(PowerParams::small_cell(), 0.5, true), 64.19));
  const std::vector<PowerParams> sbs(4, PowerParams::small_cell());
  const std::vector<double> zero(4, 0.0);
  checks.emplace_back("all-OFF network power = 304.8",
                      near(network_power(Policy::all_off(4), zero, 0.2, sbs, PowerParams::haps()), 304.8));
  QTable q(1, 1);
  checks.emplace_back("q_update = 90", near(q_update(q, 0, 0, 100.0, 0, AgentConfig::defaults(StateDesign::kFsd)), 90.0));
  // The schedule realised by training.
  Rng rng(1);
  LoadsViewEnvironment env(testing::random_view(rng, 2), testing::default_costs(2), Policy::all_on(2));
  AgentConfig cfg = AgentConfig::defaults(StateDesign::kLsd);
  cfg.iterations = 1;
  cfg.slots_per_episode = 20;
  cfg.convergence_tol = 0.0;
  cfg.record_trace = true;
  const auto tr = train(StateDesign::kLsd, env, cfg, rng);
  bool decay = tr.trace.size() == 20;
  for (std::size_t k = 0; decay && k < tr.trace.size(); ++k)
    decay = near(tr.trace[k].epsilon, 0.8 * std::pow(0.9, static_cast<double>(k)));
  checks.emplace_back("epsilon_k = 0.8 * 0.9^k", decay);
  bool pass = true;
  std::string detail;
  for (const auto& [name, ok] : checks) {
    pass = pass && ok;
    detail += (detail.empty() ? "" : "; ") + name + (ok ? " ok" : " WRONG");
  }
  return {pass, detail};
}

Outcome criterion8() {
  BenchmarkConfig b;
  b.master_seed = kMasterSeed;
  b.repeats = 10;
  const auto rows = benchmark_elapsed(b);
  std::map<int, double> fsd, lsd;
  for (const auto& r : rows) (r.design == StateDesign::kFsd ? fsd : lsd)[r.slots] = r.mean_s;
  bool pass = !fsd.empty();
  std::string detail = "mean seconds over 10 runs (FSD/LSD):";
  for (const auto& [slots, f] : fsd) {
    pass = pass && f >= lsd.at(slots);
    detail += " " + std::to_string(slots) + ":" + fmt(f * 1e3, 2) + "ms/" + fmt(lsd.at(slots) * 1e3, 2) + "ms";
  }
  return {pass, detail};
}

Outcome criterion9(const std::string& property_binary) {
  std::string detail;
  bool pass = true;
  if (property_binary.empty()) {
    pass = false;
    detail = "property test binary not given";
  } else {
    const std::string cmd = "\"" + property_binary + "\" --minimal";
    const int rc = std::system(cmd.c_str());
    pass = rc == 0;
    detail = "property suite (>= " + std::to_string(testing::kCases) + " cases each) exit " + std::to_string(rc);
  }
  // Engine-level invariants over the campaign: per-slot checks, A3 dominance
  // per seed and determinism.
  const CampaignResult& r = es_campaign();
  const std::size_t violations = r.violation_count();
  int dominance_failures = 0;
  for (const auto& a3 : r.runs) {
    if (a3.series != "A3") continue;
    for (const auto& es : r.runs)
      if (es.series == "ES_eps0" && es.n == a3.n && es.num_ues == a3.num_ues && es.seed == a3.seed &&
          es.total_energy_j > a3.total_energy_j)
        ++dominance_failures;
  }
  CampaignConfig small;
  small.n_values = {4};
  small.ue_counts = {{4, {100}}};
  small.seeds = 2;
  small.base.num_slots = 10;
  small.master_seed = kMasterSeed;
  const auto x = run_campaign(small), y = run_campaign(small);
  bool deterministic = x.runs.size() == y.runs.size();
  for (std::size_t i = 0; deterministic && i < x.runs.size(); ++i)
    deterministic = x.runs[i].total_energy_j == y.runs[i].total_energy_j &&
                    x.runs[i].unconnected_total == y.runs[i].unconnected_total;
  pass = pass && violations == 0 && dominance_failures == 0 && deterministic;
  detail += "; per-slot invariant violations " + std::to_string(violations) + "; A3 < ES_eps0 on " +
            std::to_string(dominance_failures) + " seed(s); repeat runs " +
            (deterministic ? "identical" : "DIFFER");
  return {pass, detail};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string property_binary = argc > 1 ? argv[1] : "";
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 Q-learning vs ES on frozen loads", criterion1},
      {"2 LSD vs FSD", criterion2},
      {"3 A3 vs ES density trend", criterion3},
      {"4 estimation-error witness", criterion4},
      {"5 error-regime energy ordering", criterion5},
      {"6 ES against naive brute force", criterion6},
      {"7 exact arithmetic", criterion7},
      {"8 FSD slower than LSD", criterion8},
      {"9 invariant suites", [&] { return criterion9(property_binary); }},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << name << " [" << fmt(secs, 1) << " s] - " << o.detail
              << std::endl;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criterion(s) failed") << std::endl;
  return failed == 0 ? 0 : 1;
}
