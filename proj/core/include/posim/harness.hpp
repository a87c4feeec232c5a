#ifndef POSIM_HARNESS_HPP
#define POSIM_HARNESS_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "posim/genmodel_one.hpp"
#include "posim/genmodel_two.hpp"
#include "posim/truth.hpp"
#include "posim/weights.hpp"

namespace posim {

// Monte Carlo performance metrics. Non-finite estimates are excluded by the
// caller (run_study counts them); these operate on clean vectors.
double bias(const std::vector<double>& estimates, double truth);
double emp_se(const std::vector<double>& estimates);  // denominator B-1; needs B >= 2
double rmse(const std::vector<double>& estimates, double truth);

// Full parameterization of one scenario. The generator stream seed depends
// on (master_seed, study, n, structural params) but not on pi, tau, or the
// truncation strategy, so every arm of a grid replays the same underlying
// draws and the violation mechanism is the only difference.
struct ScenarioConfig {
  Study study = Study::One;
  std::int32_t n = 1000;
  double pi = 1.0;
  double tau = 0.0;
  TruncationStrategy wt = TruncationStrategy::NoWT;
  std::int32_t replications = 1000;  // B
  std::uint64_t master_seed = 0;
  StudyOneParams params_one;  // structural fields; n/policy filled from above
  StudyTwoParams params_two;

  std::uint64_t generator_seed() const;
  StudyOneParams resolved_one() const;
  StudyTwoParams resolved_two() const;
  std::string label() const;
};

struct MetricRow {
  ScenarioConfig scenario;
  std::string estimand;  // e.g. "gamma_A2", "C_A0"
  double time = 0.0;     // grid time for cumulative coefficients, else 0
  double truth = 0.0;
  double bias = 0.0;
  double emp_se = 0.0;
  double rmse = 0.0;
  double mc_se_bias = 0.0;  // empSE / sqrt(B_success)
  std::int32_t n_success = 0;
  std::int32_t n_excluded = 0;
};

struct CurveRow {
  ScenarioConfig scenario;
  std::string regime;  // "always" | "never"
  double time = 0.0;
  double mean_survival = 0.0;
  double true_survival = 0.0;
};

struct StudyResults {
  std::vector<MetricRow> metrics;
  std::vector<CurveRow> curves;
};

// Runs every scenario for B replications: generate, weight, truncate, fit,
// transform to survival; aggregates metrics and mean curves. Replications
// that fail (singular fit, non-convergence of the weight models) are
// excluded and counted, never abort the scenario. Output is independent of
// the worker count.
StudyResults run_study(const std::vector<ScenarioConfig>& grid,
                       const TruthSetOne* truth_one, const TruthSetTwo* truth_two,
                       int jobs = 1);

void write_metrics(std::ostream& out, const std::vector<MetricRow>& metrics);
void write_curves(std::ostream& out, const std::vector<CurveRow>& curves);

}  // namespace posim

#endif
