#ifndef POSIM_GENMODEL_TWO_HPP
#define POSIM_GENMODEL_TWO_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "posim/dataset.hpp"
#include "posim/posviol.hpp"

namespace posim {

// Continuous-time generator under a conditional additive hazard with a
// subject frailty and a biomarker confounder. All N(m, v) parameters are
// variances; the frailty variance is exposed because the source material is
// ambiguous between N(0, 0.1) and N(0, 1) -- default 0.1.
struct StudyTwoParams {
  std::int32_t n = 1000;
  std::int32_t n_visits = 4;  // K; administrative censoring at K+1
  std::array<double, 4> alpha = {0.7, -0.2, 0.05, 0.05};  // (a0, aA, aL, aU)
  double frailty_variance = 0.1;
  PositivityPolicy policy{1.0, 0.0, ViolationRegion::AboveTau};
  // Fixed regime a_0..a_K; when set, treatment is assigned deterministically,
  // the policy is ignored, and no treatment draws are consumed.
  std::optional<std::vector<int>> intervention;
};

// a0 + aA*a + aL*l + aU*u; may be negative, the generator handles that.
double conditional_hazard_two(const std::array<double, 4>& alpha, int a_k, double l_k, double u);

// logit^-1(-2 + 0.5*l + a_prev); a_prev is 0 at baseline.
double treatment_prob_two(std::int32_t k, double l, int a_prev);

// One replication. Draw order per subject: propensity, frailty, baseline
// biomarker noise, then per visit: (k >= 1) biomarker noise, treatment
// Bernoulli (consumed even when the forcing rule fires; skipped entirely
// under an intervention), event uniform. A non-positive interval hazard
// means no event in that interval and bumps nonpositive_hazard_count.
LongDataset simulate_dataset_two(const StudyTwoParams& params, std::uint64_t replication,
                                 std::uint64_t master_seed);

// Benchmark II: same mechanism with the forcing rule compiled out; equals
// simulate_dataset_two with pi=1 byte for byte.
LongDataset simulate_benchmark_two(StudyTwoParams params, std::uint64_t replication,
                                   std::uint64_t master_seed);

}  // namespace posim

#endif
