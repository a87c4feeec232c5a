#ifndef POSIM_TRUTH_HPP
#define POSIM_TRUTH_HPP

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "posim/estimators.hpp"
#include "posim/genmodel_two.hpp"

namespace posim {

// Study I truth is analytic: the marginal logit-MSM parameters equal the
// conditional ones, and the survival curves follow from the product formula.
struct TruthSetOne {
  std::array<double, 4> gamma_true = {-3.0, 0.05, -1.5, 0.1};
  std::int32_t max_visit = 40;
  std::vector<double> survival_always;  // index t = 0..K+1
  std::vector<double> survival_never;
};

TruthSetOne true_params_one(std::int32_t max_visit = 40);

// Study II truth is a simulation oracle: intervened generation under all
// 2^(K+1) deterministic regimes (equal allocation), an unweighted Aalen fit
// on the pooled sample, and survival cross-checked against the empirical
// survival fractions of the always/never subsamples.
struct TruthSetTwo {
  std::int32_t max_visit = 4;
  std::vector<double> grid;                    // evaluation times 1..K+1
  std::vector<std::vector<double>> c_true;     // [col][grid index], col 0 = C0, 1+j = CAj
  std::vector<double> survival_always;         // plug-in values at grid times
  std::vector<double> survival_never;
  std::int64_t n_oracle = 0;
  std::uint64_t oracle_seed = 0;
  std::array<double, 4> alpha = {0.7, -0.2, 0.05, 0.05};
};

// Throws with diagnostics when the plug-in and empirical survival routes
// disagree by more than 0.01 at any grid time.
TruthSetTwo compute_truth_two(std::int64_t n_oracle, std::uint64_t seed,
                              const StudyTwoParams& base = StudyTwoParams{});

// Benchmark II pooled-L percentile check behind the canonical tau grid.
struct TauGridTwo {
  std::vector<double> canonical = {1.0, 1.5, 2.0, 3.0, 7.0, 10.0};
  std::vector<double> probs = {0.80, 0.90, 0.95, 0.99, 1.00};
  std::vector<double> computed;  // pooled-L percentiles at probs
};

TauGridTwo derive_tau_grid_two(std::int64_t n, std::uint64_t seed);

// Tabular cache keyed by (n_oracle, seed, alpha); readers reject mismatches.
void write_truth_two_file(const std::string& path, const TruthSetTwo& truth);
TruthSetTwo read_truth_two_file(const std::string& path);

}  // namespace posim

#endif
