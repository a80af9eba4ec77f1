#include "vhetcs/csv_io.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace vhetcs {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

[[noreturn]] void bad_line(int line, const std::string& what) {
  throw std::runtime_error("line " + std::to_string(line) + ": " + what);
}

double to_double(const std::string& s, int line) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) bad_line(line, "trailing characters in '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    bad_line(line, "not a number: '" + s + "'");
  }
}

long long to_int(const std::string& s, int line) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(s, &pos);
    if (pos != s.size()) bad_line(line, "trailing characters in '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    bad_line(line, "not an integer: '" + s + "'");
  }
}

// Reads the header and yields the data rows with their line numbers.
std::vector<std::pair<int, std::vector<std::string>>> read_rows(std::istream& is, const std::string& header) {
  std::string line;
  int number = 0;
  while (std::getline(is, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) break;
  }
  if (line != header) bad_line(number, "expected header '" + header + "'");
  const std::size_t width = split(header).size();
  std::vector<std::pair<int, std::vector<std::string>>> rows;
  while (std::getline(is, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split(line);
    if (fields.size() != width)
      bad_line(number, "expected " + std::to_string(width) + " fields, got " + std::to_string(fields.size()));
    rows.emplace_back(number, std::move(fields));
  }
  return rows;
}

void precise(std::ostream& os) { os.precision(12); }

}  // namespace

void write_topology(std::ostream& os, std::span<const BaseStationSpec> stations) {
  precise(os);
  os << "id,kind,x_m,y_m,z_m,tx_dbm,gain_dbi,capacity_rb\n";
  for (const auto& bs : stations)
    os << bs.id << ',' << (bs.kind == BsKind::kHaps ? "haps" : "sbs") << ',' << bs.position.x << ','
       << bs.position.y << ',' << bs.position.z << ',' << bs.tx_power_dbm << ',' << bs.antenna_gain_dbi << ','
       << bs.capacity_rb << '\n';
}

std::vector<BaseStationSpec> read_topology(std::istream& is) {
  std::vector<BaseStationSpec> out;
  for (const auto& [line, f] : read_rows(is, "id,kind,x_m,y_m,z_m,tx_dbm,gain_dbi,capacity_rb")) {
    BaseStationSpec bs;
    bs.id = static_cast<int>(to_int(f[0], line));
    if (f[1] == "haps")
      bs.kind = BsKind::kHaps;
    else if (f[1] == "sbs")
      bs.kind = BsKind::kSmallCell;
    else
      bad_line(line, "kind must be sbs or haps");
    bs.position = {to_double(f[2], line), to_double(f[3], line), to_double(f[4], line)};
    bs.tx_power_dbm = to_double(f[5], line);
    bs.antenna_gain_dbi = to_double(f[6], line);
    bs.capacity_rb = static_cast<int>(to_int(f[7], line));
    if (bs.capacity_rb < 0) bad_line(line, "capacity must be non-negative");
    out.push_back(bs);
  }
  return out;
}

std::vector<double> read_psi_csv(std::istream& is) {
  std::map<long long, double> by_slot;
  for (const auto& [line, f] : read_rows(is, "slot_index,psi")) {
    const long long slot = to_int(f[0], line);
    if (slot < 0) bad_line(line, "slot_index must be non-negative");
    if (!by_slot.emplace(slot, to_double(f[1], line)).second) bad_line(line, "duplicate slot_index");
  }
  std::vector<double> psi;
  for (const auto& [slot, v] : by_slot) {
    if (slot != static_cast<long long>(psi.size()))
      throw std::runtime_error("slot_index values must be contiguous from 0");
    psi.push_back(v);
  }
  return psi;
}

std::vector<double> read_psi_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_psi_csv(in);
}

void write_demand_header(std::ostream& os) { os << "slot,ue_id,demand_rb\n"; }

void write_demand_rows(std::ostream& os, const SlotTruth& truth) {
  for (const auto& ue : truth.ues) os << truth.slot << ',' << ue.id << ',' << ue.demand_rb << '\n';
}

void write_association_header(std::ostream& os) { os << "slot,ue_id,bs_id\n"; }

void write_association_rows(std::ostream& os, const SlotTruth& truth) {
  for (std::size_t i = 0; i < truth.ues.size(); ++i) {
    const int j = truth.realized.serving[i];
    os << truth.slot << ',' << truth.ues[i].id << ',' << (j < 0 ? -1 : j + 1) << '\n';
  }
}

void write_decision_log(std::ostream& os, const CampaignResult& result) {
  precise(os);
  os << "n,num_ues,series,regime,seed,slot,algorithm,policy,next_policy,cost,power_W,feasible,fallback\n";
  for (const auto& run : result.runs)
    for (const auto& s : run.slots)
      os << run.n << ',' << run.num_ues << ',' << run.series << ',' << run.regime << ',' << run.seed << ','
         << s.slot << ',' << to_string(s.algorithm) << ',' << s.policy.to_string() << ','
         << s.next_policy.to_string() << ',' << s.decision_cost << ',' << s.decision_power_w << ','
         << (s.decision_feasible ? 1 : 0) << ',' << (s.fallback ? 1 : 0) << '\n';
}

void write_qtable(std::ostream& os, const QTable& table) {
  os.precision(17);
  os << "state,action,value,visits\n";
  for (std::size_t s = 0; s < table.num_states(); ++s)
    for (std::size_t a = 0; a < table.num_actions(); ++a)
      os << s << ',' << a << ',' << table.value(s, a) << ',' << table.visits(s, a) << '\n';
}

QTable read_qtable(std::istream& is) {
  struct Cell {
    std::size_t s, a;
    double v;
    std::uint64_t n;
  };
  std::vector<Cell> cells;
  std::size_t states = 0, actions = 0;
  for (const auto& [line, f] : read_rows(is, "state,action,value,visits")) {
    const long long s = to_int(f[0], line), a = to_int(f[1], line), n = to_int(f[3], line);
    if (s < 0 || a < 0 || n < 0) bad_line(line, "state, action and visits must be non-negative");
    cells.push_back({static_cast<std::size_t>(s), static_cast<std::size_t>(a), to_double(f[2], line),
                     static_cast<std::uint64_t>(n)});
    states = std::max(states, cells.back().s + 1);
    actions = std::max(actions, cells.back().a + 1);
  }
  if (cells.size() != states * actions) throw std::runtime_error("Q-table file does not cover a full table");
  QTable table(states, actions);
  std::vector<bool> seen(states * actions, false);
  for (const auto& c : cells) {
    if (seen[c.s * actions + c.a]) throw std::runtime_error("duplicate Q-table cell");
    seen[c.s * actions + c.a] = true;
    table.set_value(c.s, c.a, c.v);
    table.set_visits(c.s, c.a, c.n);
  }
  return table;
}

void write_training_trace(std::ostream& os, std::span<const TraceRow> trace) {
  precise(os);
  os << "iteration,slot,state,action,cost,epsilon\n";
  for (const auto& r : trace)
    os << r.iteration << ',' << r.slot << ',' << r.state << ',' << r.action << ',' << r.cost << ',' << r.epsilon
       << '\n';
}

void write_results(std::ostream& os, const CampaignResult& result) {
  precise(os);
  os << "n,delta,regime,algorithm,seed,mean_power_w,total_energy_j,unconnected_total,decision_time_s\n";
  for (const auto& r : result.runs)
    os << r.n << ',' << r.delta << ',' << r.regime << ',' << r.series << ',' << r.seed << ',' << r.mean_power_w
       << ',' << r.total_energy_j << ',' << r.unconnected_total << ',' << r.decision_time_s << '\n';
}

void write_plot_data(std::ostream& os, const CampaignResult& result, int n, const std::string& regime) {
  precise(os);
  std::vector<std::string> labels;
  std::vector<std::pair<int, double>> cells;
  for (const auto& r : result.runs) {
    if (r.n != n) continue;
    if (r.regime != regime && r.regime != "none") continue;
    if (std::find(labels.begin(), labels.end(), r.series) == labels.end()) labels.push_back(r.series);
    const auto cell = std::make_pair(r.num_ues, r.delta);
    if (std::find(cells.begin(), cells.end(), cell) == cells.end()) cells.push_back(cell);
  }
  os << "delta";
  for (const auto& l : labels) os << ',' << l;
  os << '\n';
  for (const auto& [e, delta] : cells) {
    os << delta;
    for (const auto& l : labels) {
      auto v = mean_energy(result, n, e, l, regime);
      if (!v) v = mean_energy(result, n, e, l, "none");
      os << ',';
      if (v) os << *v;
    }
    os << '\n';
  }
}

void write_relative_differences(std::ostream& os, std::span<const RelativeDifferenceRow> rows) {
  precise(os);
  os << "n,num_ues,delta,regime,baseline,other,baseline_energy_j,other_energy_j,percent\n";
  for (const auto& r : rows)
    os << r.n << ',' << r.num_ues << ',' << r.delta << ',' << r.regime << ',' << r.baseline << ',' << r.other << ','
       << r.baseline_energy_j << ',' << r.other_energy_j << ',' << r.percent << '\n';
}

void write_benchmark(std::ostream& os, std::span<const BenchmarkRow> rows) {
  precise(os);
  os << "design,n,slots,repeats,mean_s,stddev_s,mean_steps\n";
  for (const auto& r : rows)
    os << to_string(r.design) << ',' << r.n << ',' << r.slots << ',' << r.repeats << ',' << r.mean_s << ','
       << r.stddev_s << ',' << r.mean_steps << '\n';
}

namespace {

void list(std::ostream& os, const char* key, const std::vector<double>& v) {
  os << key << '=';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << v[i];
  os << '\n';
}

}  // namespace

void write_flip_witness(std::ostream& os, const FlipWitness& w) {
  precise(os);
  os << "instance=" << w.instance << '\n'
     << "scenario_seed=" << w.scenario_seed << '\n'
     << "num_ues=" << w.num_ues << '\n'
     << "slot=" << w.slot << '\n'
     << "oracle_policy=" << w.oracle_policy.to_string() << '\n'
     << "estimated_policy=" << w.estimated_policy.to_string() << '\n';
  list(os, "error_draws", w.error_draws);
  list(os, "true_rho", w.true_rho);
  list(os, "last_known_rho", w.last_known_rho);
  list(os, "estimated_rho", w.estimated_rho);
  os << "oracle_power_true_W=" << w.oracle_power_true_w << '\n'
     << "estimated_power_true_W=" << w.estimated_power_true_w << '\n'
     << "estimated_power_erroneous_W=" << w.estimated_power_erroneous_w << '\n'
     << "oracle_power_erroneous_W=" << w.oracle_power_erroneous_w << '\n';
}

}  // namespace vhetcs
