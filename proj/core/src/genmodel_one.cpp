#include "posim/genmodel_one.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "posim/gamma.hpp"
#include "posim/stochastic.hpp"

namespace posim {

namespace {

double inv_logit(double x) { return 1.0 / (1.0 + std::exp(-x)); }

LongDataset simulate_one_impl(const StudyOneParams& params, std::uint64_t replication,
                              std::uint64_t master_seed, bool allow_forcing) {
  if (params.n <= 0) throw std::invalid_argument("StudyOneParams: n must be positive");
  if (params.checkup_spacing <= 0) throw std::invalid_argument("StudyOneParams: kappa must be positive");
  if (params.policy.region != ViolationRegion::BelowTau)
    throw std::invalid_argument("StudyOneParams: policy region must be BelowTau");

  const auto& g = params.gamma;
  const std::int32_t K = params.n_visits;
  const std::int32_t kappa = params.checkup_spacing;

  LongDataset data;
  data.study = Study::One;
  data.n_subjects = params.n;
  data.max_visit = K;
  data.rows.reserve(static_cast<std::size_t>(params.n) * 8);

  StreamKey rep_key{master_seed, {{StreamLabel::Replication, replication}}};

  for (std::int32_t i = 0; i < params.n; ++i) {
    RngStream rng = derive_stream(rep_key.child(StreamLabel::Subject, static_cast<std::uint64_t>(i)));

    const double p_i = rng.uniform();
    double u0 = rng.uniform();
    if (u0 <= 0.0) u0 = 0x1.0p-53;  // F^-1 needs (0,1)

    // Baseline CD4: Gamma(3,154) quantile of U0 plus N(0, 20) noise
    double l = gamma_inverse_cdf(u0, 3.0, 154.0) + rng.normal(0.0, std::sqrt(20.0));

    int a = 0;
    std::int32_t k_star = VisitRecord::kNoInitiation;
    bool forced0 = allow_forcing && is_forced(params.policy, p_i, l);
    {
      const int stochastic_a = rng.bernoulli(treatment_prob_one(0, l));
      a = forced0 ? 1 : stochastic_a;
    }
    if (a == 1) k_star = 0;
    if (forced0) ++data.forced_count;

    double u = u0;
    double surv = 1.0;
    for (std::int32_t k = 0; k <= K; ++k) {
      if (k > 0) {
        u = std::min(1.0, std::max(0.0, u + rng.normal(0.0, std::sqrt(0.05))));
        if (k % kappa == 0) {
          l = std::max(0.0, l + 150.0 * a + rng.normal(100.0 * (u - 2.0), std::sqrt(50.0)));
          const bool rule_fires = allow_forcing && is_forced(params.policy, p_i, l);
          const int stochastic_a = rng.bernoulli(treatment_prob_one(k, l));
          const int prev_a = a;
          if (rule_fires || prev_a == 1)
            a = 1;  // forced, or continuation once started
          else
            a = stochastic_a;
          if (a == 1 && prev_a == 0) k_star = k;
          if (rule_fires && prev_a == 0) ++data.forced_count;
        }
      }

      const double hazard = conditional_hazard_one(g, k, a, k_star);
      surv *= 1.0 - hazard;
      const int y_next = (surv <= 1.0 - u0) ? 1 : 0;

      VisitRecord r;
      r.id = i;
      r.k = k;
      r.a = a;
      r.l = l;
      r.k_star = k_star;
      r.y_next = y_next;
      r.forced = (k == 0)              ? forced0
                 : (k % kappa == 0)    ? (allow_forcing && is_forced(params.policy, p_i, l))
                                       : false;
      data.rows.push_back(r);
      if (y_next == 1) break;
    }
  }
  return data;
}

}  // namespace

double conditional_hazard_one(const std::array<double, 4>& gamma, std::int32_t k, int a_k,
                              std::int32_t k_star) {
  if (a_k == 1 && k_star == VisitRecord::kNoInitiation)
    throw std::invalid_argument("conditional_hazard_one: treated without initiation visit");
  const double d1 = (a_k == 1) ? static_cast<double>(k_star) : static_cast<double>(k);
  const double d3 = (a_k == 1) ? static_cast<double>(k - k_star) : 0.0;
  return inv_logit(gamma[0] + gamma[1] * d1 + gamma[2] * a_k + gamma[3] * d3);
}

double treatment_prob_one(std::int32_t k, double l) {
  return inv_logit(-0.405 + 0.0205 * k - 0.00405 * (l - 500.0));
}

LongDataset simulate_dataset_one(const StudyOneParams& params, std::uint64_t replication,
                                 std::uint64_t master_seed) {
  return simulate_one_impl(params, replication, master_seed, /*allow_forcing=*/true);
}

LongDataset simulate_benchmark_one(StudyOneParams params, std::uint64_t replication,
                                   std::uint64_t master_seed) {
  params.policy = PositivityPolicy{1.0, params.policy.tau, ViolationRegion::BelowTau};
  return simulate_one_impl(params, replication, master_seed, /*allow_forcing=*/false);
}

}  // namespace posim
