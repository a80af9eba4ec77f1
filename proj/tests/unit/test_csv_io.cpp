#include <doctest.h>

#include <sstream>
#include <stdexcept>

#include "vhetcs/csv_io.hpp"
#include "vhetcs/rng.hpp"

using namespace vhetcs;

TEST_CASE("topology round trip") {
  const auto s = place_network(4, 1025.0, 20000.0);
  std::stringstream ss;
  write_topology(ss, s);
  const auto back = read_topology(ss);
  REQUIRE(back.size() == s.size());
  for (std::size_t j = 0; j < s.size(); ++j) {
    CHECK(back[j].id == s[j].id);
    CHECK(back[j].kind == s[j].kind);
    CHECK(back[j].position.x == doctest::Approx(s[j].position.x));
    CHECK(back[j].capacity_rb == s[j].capacity_rb);
  }
}

TEST_CASE("psi import") {
  std::istringstream ok("slot_index,psi\n1,0.5\n0,0.25\n2,1\n");
  CHECK(read_psi_csv(ok) == std::vector<double>{0.25, 0.5, 1.0});
  std::istringstream gap("slot_index,psi\n0,0.5\n2,0.5\n");
  CHECK_THROWS_AS(read_psi_csv(gap), std::runtime_error);
  std::istringstream header("slot,psi\n0,0.5\n");
  CHECK_THROWS_AS(read_psi_csv(header), std::runtime_error);
  std::istringstream junk("slot_index,psi\n0,abc\n");
  CHECK_THROWS_AS(read_psi_csv(junk), std::runtime_error);
}

TEST_CASE("Q-table round trip is exact") {
  QTable t(3, 4);
  Rng rng(2);
  for (std::size_t s = 0; s < 3; ++s)
    for (std::size_t a = 0; a < 4; ++a) {
      t.set_value(s, a, rng.uniform(0.0, 1e4));
      t.set_visits(s, a, s * 10 + a);
    }
  std::stringstream ss;
  write_qtable(ss, t);
  const QTable back = read_qtable(ss);
  REQUIRE(back.num_states() == 3);
  REQUIRE(back.num_actions() == 4);
  for (std::size_t s = 0; s < 3; ++s)
    for (std::size_t a = 0; a < 4; ++a) {
      CHECK(back.value(s, a) == t.value(s, a));
      CHECK(back.visits(s, a) == t.visits(s, a));
    }
  std::istringstream partial("state,action,value,visits\n0,0,1,1\n0,1,1,1\n1,0,1,1\n");
  CHECK_THROWS_AS(read_qtable(partial), std::runtime_error);
}

TEST_CASE("results and trace layouts") {
  CampaignResult r;
  RunSummary s;
  s.n = 4;
  s.delta = 1e-4;
  s.regime = "eps1";
  s.series = "ES_epsgt0";
  s.seed = 2;
  s.mean_power_w = 300.5;
  s.total_energy_j = 15025.0;
  s.unconnected_total = 3;
  r.runs.push_back(s);
  std::ostringstream os;
  write_results(os, r);
  CHECK(os.str() ==
        "n,delta,regime,algorithm,seed,mean_power_w,total_energy_j,unconnected_total,decision_time_s\n"
        "4,0.0001,eps1,ES_epsgt0,2,300.5,15025,3,0\n");

  const std::vector<TraceRow> trace{{0, 0, 15, 3, 300.0, 0.8}, {0, 1, 3, 3, 290.0, 0.72}};
  std::ostringstream ts;
  write_training_trace(ts, trace);
  CHECK(ts.str() == "iteration,slot,state,action,cost,epsilon\n0,0,15,3,300,0.8\n0,1,3,3,290,0.72\n");
}
