#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "vhetcs/campaign.hpp"
#include "vhetcs/engine.hpp"
#include "vhetcs/network.hpp"
#include "vhetcs/qlearn.hpp"

namespace vhetcs {

// All writers emit a header row; readers require it and throw
// std::runtime_error naming the line on malformed input.

// id,kind,x_m,y_m,z_m,tx_dbm,gain_dbi,capacity_rb
void write_topology(std::ostream& os, std::span<const BaseStationSpec> stations);
// Power parameters are not part of the file and come back zeroed.
std::vector<BaseStationSpec> read_topology(std::istream& is);

// slot_index,psi with slot indices 0..N-1 in any order.
std::vector<double> read_psi_csv(std::istream& is);
std::vector<double> read_psi_csv_file(const std::string& path);

// slot,ue_id,demand_rb
void write_demand_header(std::ostream& os);
void write_demand_rows(std::ostream& os, const SlotTruth& truth);
// slot,ue_id,bs_id (-1 when unconnected), from the realised association.
void write_association_header(std::ostream& os);
void write_association_rows(std::ostream& os, const SlotTruth& truth);

// n,num_ues,series,regime,seed,slot,algorithm,policy,next_policy,cost,power_W,feasible,fallback
void write_decision_log(std::ostream& os, const CampaignResult& result);

// state,action,value,visits
void write_qtable(std::ostream& os, const QTable& table);
QTable read_qtable(std::istream& is);
// iteration,slot,state,action,cost,epsilon
void write_training_trace(std::ostream& os, std::span<const TraceRow> trace);

// n,delta,regime,algorithm,seed,mean_power_w,total_energy_j,unconnected_total,decision_time_s
void write_results(std::ostream& os, const CampaignResult& result);
// Seed-averaged energy for one n and regime: delta then one column per
// series. Series without a regime repeat in every regime's file.
void write_plot_data(std::ostream& os, const CampaignResult& result, int n, const std::string& regime);
// n,num_ues,delta,regime,baseline,other,baseline_energy_j,other_energy_j,percent
void write_relative_differences(std::ostream& os, std::span<const RelativeDifferenceRow> rows);
// design,n,slots,repeats,mean_s,stddev_s,mean_steps
void write_benchmark(std::ostream& os, std::span<const BenchmarkRow> rows);
// key=value lines, one per witness field.
void write_flip_witness(std::ostream& os, const FlipWitness& witness);

}  // namespace vhetcs
