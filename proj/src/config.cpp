#include "vhetcs/config.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <cmath>

#include "vhetcs/csv_io.hpp"

namespace vhetcs {

using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

[[noreturn]] void fail(const std::string& key, const std::string& domain) {
  throw ConfigError("config key '" + key + "': expected " + domain);
}

std::string range_text(double lo, double hi, bool lo_open, bool hi_open) {
  auto num = [](double v) {
    if (v == kInf) return std::string("inf");
    if (v == -kInf) return std::string("-inf");
    std::ostringstream ss;
    ss << v;
    return ss.str();
  };
  return std::string(lo_open ? "(" : "[") + num(lo) + ", " + num(hi) + (hi_open ? ")" : "]");
}

double get_number(const json& v, const std::string& key, double lo, double hi, bool lo_open = false,
                  bool hi_open = false) {
  const std::string domain = "a number in " + range_text(lo, hi, lo_open, hi_open);
  if (!v.is_number()) fail(key, domain);
  const double x = v.get<double>();
  if (lo_open ? !(x > lo) : !(x >= lo)) fail(key, domain);
  if (hi_open ? !(x < hi) : !(x <= hi)) fail(key, domain);
  return x;
}

long long get_integer(const json& v, const std::string& key, long long lo, long long hi) {
  const std::string domain = "an integer in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]";
  if (!v.is_number_integer()) fail(key, domain);
  const long long x = v.get<long long>();
  if (x < lo || x > hi) fail(key, domain);
  return x;
}

bool get_bool(const json& v, const std::string& key) {
  if (!v.is_boolean()) fail(key, "true or false");
  return v.get<bool>();
}

std::string get_choice(const json& v, const std::string& key, std::initializer_list<const char*> choices) {
  std::string domain = "one of";
  for (const char* c : choices) domain += std::string(" ") + c;
  if (!v.is_string()) fail(key, domain);
  const std::string s = v.get<std::string>();
  for (const char* c : choices)
    if (s == c) return s;
  fail(key, domain);
}

std::vector<int> get_int_list(const json& v, const std::string& key, int lo, int hi) {
  const std::string domain = "a non-empty list of integers in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]";
  if (!v.is_array() || v.empty()) fail(key, domain);
  std::vector<int> out;
  for (const auto& x : v) {
    if (!x.is_number_integer() || x.get<long long>() < lo || x.get<long long>() > hi) fail(key, domain);
    out.push_back(x.get<int>());
  }
  return out;
}

std::vector<std::string> get_string_list(const json& v, const std::string& key, const std::string& domain) {
  if (!v.is_array() || v.empty()) fail(key, domain);
  std::vector<std::string> out;
  for (const auto& x : v) {
    if (!x.is_string()) fail(key, domain);
    out.push_back(x.get<std::string>());
  }
  return out;
}

ErrorRegime get_range(const json& v, const std::string& key, const std::string& name) {
  const std::string domain = "[lower, upper] with 0 <= lower <= upper";
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) fail(key, domain);
  ErrorRegime r{name, v[0].get<double>(), v[1].get<double>()};
  if (!(r.lower >= 0.0) || !(r.lower <= r.upper) || !std::isfinite(r.upper))
    fail(key, domain + " (got lower " + std::to_string(r.lower) + ", upper " + std::to_string(r.upper) + ")");
  return r;
}

PowerParams get_power(const json& v, const std::string& key, PowerParams p) {
  const std::string domain = "an object with p_const_w, slope, p_max_tx_w, p_sleep_w";
  if (!v.is_object()) fail(key, domain);
  for (const auto& [k, x] : v.items()) {
    const std::string full = key + "." + k;
    if (k == "p_const_w")
      p.p_const_w = get_number(x, full, 0.0, kInf, false, true);
    else if (k == "slope")
      p.slope = get_number(x, full, 0.0, kInf, false, true);
    else if (k == "p_max_tx_w")
      p.p_max_tx_w = get_number(x, full, 0.0, kInf, false, true);
    else if (k == "p_sleep_w")
      p.p_sleep_w = get_number(x, full, 0.0, kInf, false, true);
    else
      throw ConfigError("unknown config key '" + full + "'");
  }
  try {
    p.validate();
  } catch (const std::domain_error& e) {
    fail(key, std::string("valid power parameters: ") + e.what());
  }
  return p;
}

struct Pending {
  std::optional<std::vector<std::string>> regime_names;
  std::optional<ErrorRegime> custom;
  std::optional<std::vector<std::string>> series;
  std::optional<double> discount;
  std::optional<double> discount_fsd;
  std::optional<double> discount_lsd;
};

using Handler = std::function<void(const json&, const std::string&, ExperimentConfig&, Pending&)>;

void set_agent(ExperimentConfig& c, const std::function<void(AgentConfig&)>& f) {
  f(c.campaign.fsd);
  f(c.campaign.lsd);
}

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> table = [] {
    std::map<std::string, Handler> h;
    h["n_sbs"] = [](const json& v, const std::string& k, ExperimentConfig& c, Pending&) {
      c.campaign.base.num_sbs = static_cast<int>(get_integer(v, k, 1, 20));
    };
    h["num_ues"] = [](const json& v, const std::string& k, ExperimentConfig& c, Pending&) {
      c.campaign.base.num_ues = static_cast<int>(get_integer(v, k, 0, 1000000));
    };
    h["n_values"] = [](const json& v, const std::string& k, ExperimentConfig& c, Pending&) {
      c.campaign.n_values = get_int_list(v, k, 1, 20);
    };
    h["ue_counts"] = [](const json& v, const std::string& k, ExperimentConfig& c, Pending&) {
      const std::string domain = "an object mapping n (as a string) to a list of UE counts";
      if (!v.is_object() || v.empty()) fail(k, domain);
      std::map<int, std::vector<int>> m;
      for (const auto& [nk, list] : v.items()) {
        int n = 0;
        try {
          std::size_t pos = 0;
          n = std::stoi(nk, &pos);
          if (pos != nk.size() || n < 1) fail(k, domain);
        } catch (const std::logic_error&) {
          fail(k, domain);
        }
        m[n] = get_int_list(list, k + "." + nk, 0, 1000000);
      }
      c.campaign.ue_counts = m;
    };
    h["num_slots"] = [](const json& v, const std::string& k, ExperimentConfig& c, Pending&) {
      c.campaign.base.num_slots = static_cast<int>(get_integer(v, k, 1, 1000000));
    };
    h["slot_duration_s"] = [](const json& v, const std::string& k, ExperimentConfig& c, Pending&) {
      c.campaign.base.slot_duration_s = get_number(v, k, 0.0, kInf, true, true);
    };
    h["area_side_m"] = [](const json& v, const std::string& k, ExperimentConfig& c, Pending&) {
      c.campaign.base.deployment.area_side_m = get_number(v, k, 0.0, kInf, true, true);
    };
    h["haps_altitude_m"] = [](const json& v, const std::string& k, ExperimentConfig& c, Pending&) {
      c.campaign.base.deployment.haps_altitude_m = get_number(v, k, 0.0, kInf, true, true);
    };
    h["sbs_height_m"] = [](const json& v, const std::string& k, ExperimentConfig& c, Pending&) {
      c.campaign.base.deployment.sbs_height_m = get_number(v, k, 0.0, kInf, false, true);
    };
    h["haps_capacity_share"] = [](const json& v, const std::string& k, ExperimentConfig& c, Pending&) {
      c.campaign.base.deployment.haps_capacity_share = get_number(v, k, 0.0, 1.0, true, false);
    };
    struct RadioField {
      const char* key;
      double RadioParams::*field;
      double lo, hi;
      bool lo_open, hi_open;
    };
    static const RadioField radio_fields[] = {
        {"carrier_hz", &RadioParams::carrier_hz, 0.0, kInf, true, true},
        {"bandwidth_hz", &RadioParams::bandwidth_hz, 0.0, kInf, true, true},
        {"rb_bandwidth_hz", &RadioParams::rb_bandwidth_hz, 0.0, kInf, true, true},
        {"sbs_tx_dbm", &RadioParams::sbs_tx_dbm, -kInf, kInf, true, true},
        {"haps_tx_dbm", &RadioParams::haps_tx_dbm, -kInf, kInf, true, true},
        {"max_tx_dbm", &RadioParams::max_tx_dbm, -kInf, kInf, true, true},
        {"sbs_gain_dbi", &RadioParams::sbs_gain_dbi, -kInf, kInf, true, true},
        {"haps_gain_dbi", &RadioParams::haps_gain_dbi, -kInf, kInf, true, true},
        {"ue_gain_dbi", &RadioParams::ue_gain_dbi, -kInf, kInf, true, true},
        {"sigma_los_db", &RadioParams::sigma_los_db, 0.0, kInf, false, true},
        {"sigma_nlos_db", &RadioParams::sigma_nlos_db, 0.0, kInf, false, true},
        {"nlos_offset_db", &RadioParams::nlos_offset_db, 0.0, kInf, false, true},
        {"los_radius_m", &RadioParams::los_radius_m, 0.0, kInf, false, true},
        {"thermal_density_dbm_hz", &RadioParams::thermal_density_dbm_hz, -kInf, kInf, true, true},
        {"noise_figure_db", &RadioParams::noise_figure_db, 0.0, kInf, false, true},
        {"rx_sensitivity_dbm", &RadioParams::rx_sensitivity_dbm, -kInf, kInf, true, true},
    };
    for (const auto& f : radio_fields) {
      h[f.key] = [f](const json& v, const std::string& k, ExperimentConfig& c, Pending&) {
        c.campaign.base.radio.*(f.field) = get_number(v, k, f.lo, f.hi, f.lo_open, f.hi_open);
      };
    }
    struct ExtraField {
      const char* key;
      double ExtraLosses::*field;
    };
    static const ExtraField extra_fields[] = {{"gas_loss_db", &ExtraLosses::gas_db},
                                              {"scintillation_loss_db", &ExtraLosses::scintillation_db},
                                              {"entry_loss_db", &ExtraLosses::entry_db}};
    for (const auto& f : extra_fields) {
      h[f.key] = [f](const json& v, const std::string& k, ExperimentConfig& c, Pending&) {
        c.campaign.base.radio.extras.*(f.field) = get_number(v, k, 0.0, kInf, false, true);
      };
    }
    h["sbs_power"] = [](const json& v, const std::string& k, ExperimentConfig& c, Pending&) {
      c.campaign.base.sbs_power = get_power(v, k, c.campaign.base.sbs_power);
    };
    h["haps_power"] = [](const json& v, const std::string& k, ExperimentConfig& c, Pending&) {
      c.campaign.base.haps_power = get_power(v, k, c.campaign.base.haps_power);
    };
    h["penalty"] = [](const json& v, const std::string& k, ExperimentConfig& c, Pending&) {
      c.campaign.base.penalty = get_number(v, k, 0.0, kInf, true, true);
    };
    h["psi_peak"] = [](const json& v, const std::string& k, ExperimentConfig& c, Pending&) {
      c.campaign.base.psi_peak = get_number(v, k, 0.0, 1.0, true, false);
    };
    h["psi_trough"] = [](const json& v, const std::string& k, ExperimentConfig& c, Pending&) {
      c.campaign.base.psi_trough = get_number(v, k, 0.0, 1.0, true, false);
    };
    h["psi_csv"] = [](const json& v, const std::string& k, ExperimentConfig& c, Pending&) {
      if (!v.is_string()) fail(k, "a path to a slot_index,psi CSV file");
      c.psi_csv = v.get<std::string>();
    };
    h["demand_lower_rb"] = [](const json& v, const std::string& k, ExperimentConfig& c, Pending&) {
      c.campaign.base.profile.r_lower = static_cast<int>(get_integer(v, k, 0, 1000));
    };
    h["demand_upper_rb"] = [](const json& v, const std::string& k, ExperimentConfig& c, Pending&) {
      c.campaign.base.profile.r_upper = static_cast<int>(get_integer(v, k, 0, 1000));
    };
    h["learning_rate"] = [](const json& v, const std::string& k, ExperimentConfig& c, Pending&) {
      const double x = get_number(v, k, 0.0, 1.0, true, false);
      set_agent(c, [x](AgentConfig& a) { a.learning_rate = x; });
    };
    h["discount"] = [](const json& v, const std::string& k, ExperimentConfig&, Pending& p) {
      p.discount = get_number(v, k, 0.0, 1.0, false, true);
    };
    h["discount_fsd"] = [](const json& v, const std::string& k, ExperimentConfig&, Pending& p) {
      p.discount_fsd = get_number(v, k, 0.0, 1.0, false, true);
    };
    h["discount_lsd"] = [](const json& v, const std::string& k, ExperimentConfig&, Pending& p) {
      p.discount_lsd = get_number(v, k, 0.0, 1.0, false, true);
    };
    h["epsilon0"] = [](const json& v, const std::string& k, ExperimentConfig& c, Pending&) {
      const double x = get_number(v, k, 0.0, 1.0);
      set_agent(c, [x](AgentConfig& a) { a.epsilon0 = x; });
    };
    h["epsilon_decay"] = [](const json& v, const std::string& k, ExperimentConfig& c, Pending&) {
      const double x = get_number(v, k, 0.0, 1.0, true, false);
      set_agent(c, [x](AgentConfig& a) { a.decay = x; });
    };
    h["iterations"] = [](const json& v, const std::string& k, ExperimentConfig& c, Pending&) {
      const int x = static_cast<int>(get_integer(v, k, 1, 100000000));
      set_agent(c, [x](AgentConfig& a) { a.iterations = x; });
    };
    h["slots_per_episode"] = [](const json& v, const std::string& k, ExperimentConfig& c, Pending&) {
      const int x = static_cast<int>(get_integer(v, k, 1, 1000000));
      set_agent(c, [x](AgentConfig& a) { a.slots_per_episode = x; });
    };
    h["convergence_tol"] = [](const json& v, const std::string& k, ExperimentConfig& c, Pending&) {
      const double x = get_number(v, k, 0.0, kInf, false, true);
      set_agent(c, [x](AgentConfig& a) { a.convergence_tol = x; });
    };
    h["convergence_patience"] = [](const json& v, const std::string& k, ExperimentConfig& c, Pending&) {
      const int x = static_cast<int>(get_integer(v, k, 1, 1000000));
      set_agent(c, [x](AgentConfig& a) { a.convergence_patience = x; });
    };
    h["fsd_max_table_cells"] = [](const json& v, const std::string& k, ExperimentConfig& c, Pending&) {
      c.campaign.fsd.max_table_cells = static_cast<std::size_t>(get_integer(v, k, 1, 1LL << 40));
    };
    h["es_max_sbs"] = [](const json& v, const std::string& k, ExperimentConfig& c, Pending&) {
      c.campaign.es.max_sbs = static_cast<int>(get_integer(v, k, 1, 30));
    };
    h["epsilon_ranges"] = [](const json& v, const std::string& k, ExperimentConfig& c, Pending&) {
      if (!v.is_object() || v.empty()) fail(k, "an object mapping regime names to [lower, upper]");
      std::vector<ErrorRegime> catalog;
      for (const auto& [name, r] : v.items()) catalog.push_back(get_range(r, k + "." + name, name));
      c.regime_catalog = catalog;
    };
    h["epsilon_regime"] = [](const json& v, const std::string& k, ExperimentConfig&, Pending& p) {
      p.custom = get_range(v, k, "custom");
    };
    h["regimes"] = [](const json& v, const std::string& k, ExperimentConfig&, Pending& p) {
      p.regime_names = get_string_list(v, k, "a non-empty list of regime names");
    };
    h["algorithms"] = [](const json& v, const std::string& k, ExperimentConfig& c, Pending&) {
      const std::string domain = "a non-empty list drawn from ES, FSD, LSD, A3";
      c.algorithms = get_string_list(v, k, domain);
      for (const auto& a : c.algorithms)
        if (a != "ES" && a != "FSD" && a != "LSD" && a != "A3") fail(k, domain);
    };
    h["series"] = [](const json& v, const std::string& k, ExperimentConfig&, Pending& p) {
      p.series = get_string_list(v, k, "a non-empty list of series labels");
    };
    h["mode"] = [](const json& v, const std::string& k, ExperimentConfig& c, Pending&) {
      c.mode = parse_mode(get_choice(v, k, {"both", "oracle", "estimated"}));
    };
    h["association"] = [](const json& v, const std::string& k, ExperimentConfig& c, Pending&) {
      c.campaign.base.rule =
          get_choice(v, k, {"literal", "fallback"}) == "literal" ? AssociationRule::kLiteral : AssociationRule::kFallback;
    };
    h["error_scope"] = [](const json& v, const std::string& k, ExperimentConfig& c, Pending&) {
      c.campaign.base.error_scope = get_choice(v, k, {"all_small_cells", "sleeping_only"}) == "all_small_cells"
                                        ? ErrorScope::kAllSmallCells
                                        : ErrorScope::kSleepingOnly;
    };
    h["clamp_estimates"] = [](const json& v, const std::string& k, ExperimentConfig& c, Pending&) {
      c.campaign.base.clamp_estimates = get_bool(v, k);
    };
    h["frozen"] = [](const json& v, const std::string& k, ExperimentConfig& c, Pending&) {
      c.campaign.base.frozen = get_bool(v, k);
    };
    h["history_length"] = [](const json& v, const std::string& k, ExperimentConfig& c, Pending&) {
      c.campaign.base.history_length = static_cast<std::size_t>(get_integer(v, k, 1, 1000000));
    };
    h["seeds"] = [](const json& v, const std::string& k, ExperimentConfig& c, Pending&) {
      c.campaign.seeds = static_cast<int>(get_integer(v, k, 1, 1000000));
    };
    h["seed"] = [](const json& v, const std::string& k, ExperimentConfig& c, Pending&) {
      if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
        fail(k, "an unsigned 64-bit integer");
      c.campaign.master_seed = v.get<std::uint64_t>();
    };
    h["out_dir"] = [](const json& v, const std::string& k, ExperimentConfig& c, Pending&) {
      if (!v.is_string() || v.get<std::string>().empty()) fail(k, "a non-empty directory path");
      c.out_dir = v.get<std::string>();
    };
    h["bench_slot_counts"] = [](const json& v, const std::string& k, ExperimentConfig& c, Pending&) {
      c.bench_slot_counts = get_int_list(v, k, 0, 1000000);
    };
    h["bench_repeats"] = [](const json& v, const std::string& k, ExperimentConfig& c, Pending&) {
      c.bench_repeats = static_cast<int>(get_integer(v, k, 1, 1000000));
    };
    h["theorem1_max_instances"] = [](const json& v, const std::string& k, ExperimentConfig& c, Pending&) {
      c.theorem1_max_instances = static_cast<int>(get_integer(v, k, 1, 100000000));
    };
    h["theorem1_regime"] = [](const json& v, const std::string& k, ExperimentConfig& c, Pending&) {
      if (!v.is_string()) fail(k, "a regime name");
      c.theorem1_regime = v.get<std::string>();
    };
    h["threads"] = [](const json& v, const std::string& k, ExperimentConfig& c, Pending&) {
      c.threads = static_cast<int>(get_integer(v, k, 0, 4096));
    };
    return h;
  }();
  return table;
}

json power_json(const PowerParams& p) {
  return {{"p_const_w", p.p_const_w}, {"slope", p.slope}, {"p_max_tx_w", p.p_max_tx_w}, {"p_sleep_w", p.p_sleep_w}};
}

}  // namespace

ModeSelection parse_mode(const std::string& s) {
  if (s == "both") return ModeSelection::kBoth;
  if (s == "oracle") return ModeSelection::kOracle;
  if (s == "estimated") return ModeSelection::kEstimated;
  throw ConfigError("mode: expected one of both oracle estimated, got '" + s + "'");
}

const char* to_string(ModeSelection m) {
  switch (m) {
    case ModeSelection::kBoth: return "both";
    case ModeSelection::kOracle: return "oracle";
    case ModeSelection::kEstimated: return "estimated";
  }
  return "?";
}

std::vector<Series> select_series(const std::vector<std::string>& algorithms, ModeSelection mode) {
  std::vector<Series> out;
  auto add = [&out](Series s) {
    if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
  };
  for (const auto& name : algorithms) {
    const Algorithm a = parse_algorithm(name);
    if (a == Algorithm::kA3) {
      add({a, LoadMode::kOracle});
      continue;
    }
    if (mode == ModeSelection::kOracle || (mode == ModeSelection::kBoth && a == Algorithm::kEs))
      add({a, LoadMode::kOracle});
    if (mode != ModeSelection::kOracle) add({a, LoadMode::kEstimated});
  }
  return out;
}

void ExperimentConfig::apply_selection() { campaign.series = select_series(algorithms, mode); }

const ErrorRegime& ExperimentConfig::regime(const std::string& name) const {
  for (const auto& r : regime_catalog)
    if (r.name == name) return r;
  for (const auto& r : campaign.regimes)
    if (r.name == name) return r;
  std::string known;
  for (const auto& r : regime_catalog) known += " " + r.name;
  throw ConfigError("unknown regime '" + name + "' (known:" + known + ")");
}

ExperimentConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  ExperimentConfig c;
  Pending p;
  const auto& table = handlers();
  for (const auto& [key, value] : doc.items()) {
    const auto it = table.find(key);
    if (it == table.end()) throw ConfigError("unknown config key '" + key + "'");
    it->second(value, key, c, p);
  }

  if (p.discount) {
    c.campaign.fsd.discount = *p.discount;
    c.campaign.lsd.discount = *p.discount;
  }
  if (p.discount_fsd) c.campaign.fsd.discount = *p.discount_fsd;
  if (p.discount_lsd) c.campaign.lsd.discount = *p.discount_lsd;

  if (p.custom) {
    c.regime_catalog.push_back(*p.custom);
    c.campaign.regimes = {*p.custom};
  } else if (p.regime_names) {
    c.campaign.regimes.clear();
    for (const auto& name : *p.regime_names) c.campaign.regimes.push_back(c.regime(name));
  } else {
    c.campaign.regimes = c.regime_catalog;
  }
  (void)c.regime(c.theorem1_regime);

  if (p.series) {
    c.campaign.series.clear();
    for (const auto& s : *p.series) {
      try {
        c.campaign.series.push_back(Series::parse(s));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config key 'series': ") + e.what());
      }
    }
  } else {
    c.apply_selection();
  }

  if (!c.psi_csv.empty()) {
    try {
      c.campaign.base.profile.psi = read_psi_csv_file(c.psi_csv);
    } catch (const std::runtime_error& e) {
      throw ConfigError(std::string("config key 'psi_csv': ") + e.what());
    }
  }
  if (c.campaign.base.psi_trough > c.campaign.base.psi_peak)
    fail("psi_trough", "a value not above psi_peak");
  if (c.campaign.base.profile.r_lower > c.campaign.base.profile.r_upper)
    fail("demand_lower_rb", "a value not above demand_upper_rb");
  for (int n : c.campaign.n_values)
    if (!c.campaign.ue_counts.count(n)) fail("ue_counts", "an entry for every n in n_values (missing " + std::to_string(n) + ")");
  for (int s : c.bench_slot_counts)
    if (s > c.campaign.base.num_slots) fail("bench_slot_counts", "entries not above num_slots");
  try {
    c.campaign.validate();
  } catch (const std::domain_error& e) {
    throw ConfigError(std::string("invalid configuration: ") + e.what());
  }
  return c;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file " + path + " is not valid JSON: " + e.what());
  }
  return parse_config(doc);
}

json ExperimentConfig::to_json() const {
  const ScenarioConfig& b = campaign.base;
  const RadioParams& r = b.radio;
  json ue_counts = json::object();
  for (const auto& [n, list] : campaign.ue_counts) ue_counts[std::to_string(n)] = list;
  json ranges = json::object();
  for (const auto& reg : regime_catalog)
    if (reg.name != "custom") ranges[reg.name] = {reg.lower, reg.upper};
  json regimes = json::array();
  for (const auto& reg : campaign.regimes) regimes.push_back(reg.name);
  json series = json::array();
  for (const auto& s : campaign.series) series.push_back(s.label());
  json j = {
      {"n_sbs", b.num_sbs},
      {"num_ues", b.num_ues},
      {"n_values", campaign.n_values},
      {"ue_counts", ue_counts},
      {"num_slots", b.num_slots},
      {"slot_duration_s", b.slot_duration_s},
      {"area_side_m", b.deployment.area_side_m},
      {"haps_altitude_m", b.deployment.haps_altitude_m},
      {"sbs_height_m", b.deployment.sbs_height_m},
      {"haps_capacity_share", b.deployment.haps_capacity_share},
      {"carrier_hz", r.carrier_hz},
      {"bandwidth_hz", r.bandwidth_hz},
      {"rb_bandwidth_hz", r.rb_bandwidth_hz},
      {"sbs_tx_dbm", r.sbs_tx_dbm},
      {"haps_tx_dbm", r.haps_tx_dbm},
      {"max_tx_dbm", r.max_tx_dbm},
      {"sbs_gain_dbi", r.sbs_gain_dbi},
      {"haps_gain_dbi", r.haps_gain_dbi},
      {"ue_gain_dbi", r.ue_gain_dbi},
      {"sigma_los_db", r.sigma_los_db},
      {"sigma_nlos_db", r.sigma_nlos_db},
      {"nlos_offset_db", r.nlos_offset_db},
      {"los_radius_m", r.los_radius_m},
      {"thermal_density_dbm_hz", r.thermal_density_dbm_hz},
      {"noise_figure_db", r.noise_figure_db},
      {"rx_sensitivity_dbm", r.rx_sensitivity_dbm},
      {"gas_loss_db", r.extras.gas_db},
      {"scintillation_loss_db", r.extras.scintillation_db},
      {"entry_loss_db", r.extras.entry_db},
      {"sbs_power", power_json(b.sbs_power)},
      {"haps_power", power_json(b.haps_power)},
      {"penalty", b.penalty},
      {"psi_peak", b.psi_peak},
      {"psi_trough", b.psi_trough},
      {"demand_lower_rb", b.profile.r_lower},
      {"demand_upper_rb", b.profile.r_upper},
      {"learning_rate", campaign.fsd.learning_rate},
      {"discount_fsd", campaign.fsd.discount},
      {"discount_lsd", campaign.lsd.discount},
      {"epsilon0", campaign.fsd.epsilon0},
      {"epsilon_decay", campaign.fsd.decay},
      {"iterations", campaign.fsd.iterations},
      {"slots_per_episode", campaign.fsd.slots_per_episode},
      {"convergence_tol", campaign.fsd.convergence_tol},
      {"convergence_patience", campaign.fsd.convergence_patience},
      {"fsd_max_table_cells", campaign.fsd.max_table_cells},
      {"es_max_sbs", campaign.es.max_sbs},
      {"epsilon_ranges", ranges},
      {"regimes", regimes},
      {"series", series},
      {"mode", vhetcs::to_string(mode)},
      {"association", b.rule == AssociationRule::kLiteral ? "literal" : "fallback"},
      {"error_scope", b.error_scope == ErrorScope::kAllSmallCells ? "all_small_cells" : "sleeping_only"},
      {"clamp_estimates", b.clamp_estimates},
      {"frozen", b.frozen},
      {"history_length", b.history_length},
      {"seeds", campaign.seeds},
      {"seed", campaign.master_seed},
      {"out_dir", out_dir},
      {"bench_slot_counts", bench_slot_counts},
      {"bench_repeats", bench_repeats},
      {"theorem1_max_instances", theorem1_max_instances},
      {"theorem1_regime", theorem1_regime},
      {"threads", threads},
  };
  if (!psi_csv.empty()) j["psi_csv"] = psi_csv;
  json algos = algorithms;
  j["algorithms"] = algos;
  // A custom range is echoed as epsilon_regime so the echo re-parses to the
  // same selection.
  if (campaign.regimes.size() == 1 && campaign.regimes[0].name == "custom") {
    j.erase("regimes");
    j["epsilon_regime"] = {campaign.regimes[0].lower, campaign.regimes[0].upper};
  }
  return j;
}

}  // namespace vhetcs
