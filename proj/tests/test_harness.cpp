#include <cmath>
#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "posim/config.hpp"
#include "posim/harness.hpp"
#include "posim/stochastic.hpp"

using namespace posim;

TEST_CASE("metric definitions by hand") {
  const std::vector<double> est = {1.0, 2.0, 3.0};
  CHECK(bias(est, 2.0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(bias(est, 1.5) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(emp_se(est) == doctest::Approx(1.0).epsilon(1e-14));  // B-1 denominator
  CHECK(rmse(est, 2.0) == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-12));
}

TEST_CASE("RMSE identity holds to floating tolerance") {
  StreamKey key{555, {}};
  auto s = derive_stream(key.child(StreamLabel::Oracle, 3));
  std::vector<double> est;
  const int B = 257;
  for (int i = 0; i < B; ++i) est.push_back(s.normal(0.3, 1.7));
  const double b = bias(est, 0.25);
  const double se = emp_se(est);
  const double r = rmse(est, 0.25);
  CHECK(std::fabs(r * r - (b * b + se * se * (B - 1.0) / B)) < 1e-10);
}

TEST_CASE("metric preconditions") {
  CHECK_THROWS_AS(bias({}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(emp_se({1.0}), std::invalid_argument);
}

TEST_CASE("generator seed ignores the violation arm but not the design") {
  ScenarioConfig a;
  a.study = Study::One;
  a.n = 1000;
  a.master_seed = 5;
  ScenarioConfig b = a;
  b.pi = 0.05;
  b.tau = 500.0;
  b.wt = TruncationStrategy::P1_99;
  CHECK(a.generator_seed() == b.generator_seed());

  ScenarioConfig c = a;
  c.n = 2000;
  CHECK(a.generator_seed() != c.generator_seed());
  ScenarioConfig d = a;
  d.study = Study::Two;
  CHECK(a.generator_seed() != d.generator_seed());
  ScenarioConfig e = a;
  e.master_seed = 6;
  CHECK(a.generator_seed() != e.generator_seed());
}

TEST_CASE("scenario labels are stable identifiers") {
  ScenarioConfig s;
  s.study = Study::One;
  s.n = 1000;
  s.pi = 1.0;
  s.tau = 500.0;
  s.wt = TruncationStrategy::NoWT;
  CHECK(s.label() == "study1_n1000_pi1_tau500_wtNoWT");
}

TEST_CASE("run_study output is independent of the worker count") {
  const auto truth = true_params_one(40);
  ScenarioConfig s;
  s.study = Study::One;
  s.n = 120;
  s.replications = 6;
  s.master_seed = 17;
  s.pi = 0.5;
  s.tau = 500.0;

  const auto r1 = run_study({s}, &truth, nullptr, 1);
  const auto r3 = run_study({s}, &truth, nullptr, 3);
  std::ostringstream m1, m3, c1, c3;
  write_metrics(m1, r1.metrics);
  write_metrics(m3, r3.metrics);
  write_curves(c1, r1.curves);
  write_curves(c3, r3.curves);
  CHECK(m1.str() == m3.str());
  CHECK(c1.str() == c3.str());
  CHECK(!r1.metrics.empty());
}

TEST_CASE("config parsing builds the cartesian grid") {
  const std::string text =
      "# comment line\n"
      "study = 1\n"
      "n = 500, 1000\n"
      "pi = 1, 0.05\n"
      "tau = 500\n"
      "wt = NoWT, 1-99\n"
      "b = 20\n"
      "seed = 9\n";
  const auto grid = parse_scenario_config(text);
  CHECK(grid.size() == 8);  // 2 n x 2 pi x 1 tau x 2 wt
  for (const auto& s : grid) {
    CHECK(s.study == Study::One);
    CHECK(s.replications == 20);
    CHECK(s.master_seed == 9);
  }
  CHECK(grid.front().generator_seed() != grid.back().generator_seed());  // n differs
}

TEST_CASE("config errors carry line numbers") {
  try {
    parse_scenario_config("study = 1\nbogus_key = 3\n");
    FAIL("expected a parse error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("2") != std::string::npos);
  }
  CHECK_THROWS(parse_scenario_config("study = 7\n"));
  CHECK_THROWS(parse_scenario_config("pi = 1.5\n"));
}
