#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "vhetcs/network.hpp"
#include "vhetcs/power.hpp"

namespace vhetcs {

enum class LoadMode { kOracle, kEstimated };

struct CostModel {
  std::vector<PowerParams> sbs;
  PowerParams haps;
  double penalty = 1e9;
};

// What the controller believes each cell will carry if every small cell were
// ON. Loads are in RBs (possibly fractional once an error has been applied).
struct LoadsView {
  std::vector<double> load_rb;      // small cells, then the HAPS
  std::vector<double> capacity_rb;  // same layout
  // For each small cell, the BSs that would absorb its traffic, most
  // preferred first. Must contain every other BS.
  std::vector<std::vector<int>> preference;
  LoadMode mode = LoadMode::kOracle;

  int num_sbs() const { return static_cast<int>(load_rb.size()) - 1; }
  int haps_index() const { return num_sbs(); }
  void validate() const;
};

struct Reallocation {
  std::vector<double> served_rb;
  // Served load plus any overflow charged to the first active recipient of
  // the cell that could not place it.
  std::vector<double> offered_rb;
  double unserved_rb = 0.0;
};

struct PolicyEvaluation {
  Policy policy;
  std::vector<double> predicted_rho;  // served / capacity
  std::vector<double> offered_rho;    // offered / capacity
  bool feasible = false;
  double cost = 0.0;
  double power_w = 0.0;
};

// Lexicographic order, 00..0 first. Throws std::domain_error if n exceeds cap.
std::vector<Policy> enumerate_policies(int n, int cap = 20);

// Active BSs keep their own load. Each sleeping cell's load flows, in
// ascending cell order, into the residual capacity of its preferred active
// BSs; whatever does not fit is unserved.
Reallocation reallocate_loads(const Policy& policy, const LoadsView& view);

// Cost = P_N when the reallocated network is feasible (no unserved load and
// every predicted load <= 1), otherwise the penalty.
PolicyEvaluation evaluate_policy(const Policy& policy, const LoadsView& view, const CostModel& model);

struct EsOptions {
  int max_sbs = 20;
};

struct EsDecision {
  PolicyEvaluation best;
  bool fallback = false;  // every policy was infeasible; all-ON returned
};

// Argmin of evaluate_policy over all 2^n policies; ties go to fewer active
// small cells, then to the lower index. Parallelised over policies.
EsDecision es_select(const LoadsView& view, const CostModel& model, const EsOptions& options = {});
// Single-threaded reference with identical results.
EsDecision es_select_serial(const LoadsView& view, const CostModel& model,
                            const EsOptions& options = {});

Policy a3_policy(int n);

// 100 * (greater - lower) / greater. Throws std::domain_error unless
// greater >= lower >= 0 and greater > 0.
double relative_difference(double greater, double lower);

// Recipient order per small cell: other BSs by descending median received
// power over the UEs natively served by that cell. A cell without UEs uses
// the received power at its own site.
std::vector<std::vector<int>> cell_preferences(std::span<const BaseStationSpec> stations,
                                               const LinkMatrix& links,
                                               std::span<const int> native_serving,
                                               const RadioParams& radio);

}  // namespace vhetcs
