#ifndef POSIM_GENMODEL_ONE_HPP
#define POSIM_GENMODEL_ONE_HPP

#include <array>
#include <cstdint>

#include "posim/dataset.hpp"
#include "posim/posviol.hpp"

namespace posim {

// Discrete-time generator: HAART-style setting with a latent health walk,
// CD4 confounder updated at check-up visits, and once-started-always-on
// treatment. All N(m, v) parameters below are variances.
struct StudyOneParams {
  std::int32_t n = 1000;
  std::int32_t n_visits = 40;        // K
  std::int32_t checkup_spacing = 5;  // kappa: L and A update when k % kappa == 0
  std::array<double, 4> gamma = {-3.0, 0.05, -1.5, 0.1};
  PositivityPolicy policy{1.0, 0.0, ViolationRegion::BelowTau};
};

// Conditional discrete-time hazard: logit^-1 of
// g0 + g1*{(1-a)k + a*k_star} + g2*a + g3*a*(k - k_star).
double conditional_hazard_one(const std::array<double, 4>& gamma, std::int32_t k, int a_k,
                              std::int32_t k_star);

// Treatment-initiation probability at a check-up visit:
// logit^-1[-0.405 + 0.0205*k - 0.00405*(l - 500)]; the k term vanishes at
// baseline so this one formula covers both the baseline and later visits.
double treatment_prob_one(std::int32_t k, double l);

// One replication. Draw order per subject is fixed: propensity, baseline
// latent U0, baseline CD4 noise, then per visit: latent-walk noise, and at
// check-ups CD4 noise followed by the treatment Bernoulli. The Bernoulli is
// consumed even when assignment is deterministic, so pi=1 runs are
// bit-identical to benchmark runs.
LongDataset simulate_dataset_one(const StudyOneParams& params, std::uint64_t replication,
                                 std::uint64_t master_seed);

// Benchmark I: the same mechanism without any forcing rule. Equals
// simulate_dataset_one with pi=1 byte for byte.
LongDataset simulate_benchmark_one(StudyOneParams params, std::uint64_t replication,
                                   std::uint64_t master_seed);

}  // namespace posim

#endif
