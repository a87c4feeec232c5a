#include "posim/genmodel_two.hpp"

#include <cmath>
#include <stdexcept>

#include "posim/stochastic.hpp"

namespace posim {

namespace {

double inv_logit(double x) { return 1.0 / (1.0 + std::exp(-x)); }

LongDataset simulate_two_impl(const StudyTwoParams& params, std::uint64_t replication,
                              std::uint64_t master_seed, bool allow_forcing) {
  if (params.n <= 0) throw std::invalid_argument("StudyTwoParams: n must be positive");
  if (params.frailty_variance < 0.0)
    throw std::invalid_argument("StudyTwoParams: frailty variance < 0");
  if (params.policy.region != ViolationRegion::AboveTau)
    throw std::invalid_argument("StudyTwoParams: policy region must be AboveTau");
  const std::int32_t K = params.n_visits;
  const bool intervened = params.intervention.has_value();
  if (intervened && static_cast<std::int32_t>(params.intervention->size()) != K + 1)
    throw std::invalid_argument("StudyTwoParams: intervention must have K+1 entries");

  LongDataset data;
  data.study = Study::Two;
  data.n_subjects = params.n;
  data.max_visit = K;
  data.rows.reserve(static_cast<std::size_t>(params.n) * (K + 1));

  StreamKey rep_key{master_seed, {{StreamLabel::Replication, replication}}};

  for (std::int32_t i = 0; i < params.n; ++i) {
    RngStream rng = derive_stream(rep_key.child(StreamLabel::Subject, static_cast<std::uint64_t>(i)));

    const double p_i = rng.uniform();
    const double u = rng.normal(0.0, std::sqrt(params.frailty_variance));
    double l = rng.normal(u, 1.0);

    int a_prev = 0;
    double event_time = static_cast<double>(K + 1);  // administrative censoring
    std::vector<VisitRecord> subject_rows;

    for (std::int32_t k = 0; k <= K; ++k) {
      if (k > 0) l = rng.normal(0.8 * l - a_prev + 0.1 * k + u, 1.0);

      int a;
      bool forced = false;
      if (intervened) {
        a = (*params.intervention)[static_cast<std::size_t>(k)];
      } else {
        forced = allow_forcing && is_forced(params.policy, p_i, l);
        const int stochastic_a = rng.bernoulli(treatment_prob_two(k, l, a_prev));
        a = forced ? 1 : stochastic_a;
        if (forced) ++data.forced_count;
      }

      const double hazard = conditional_hazard_two(params.alpha, a, l, u);
      const double upsilon = rng.uniform();
      int y_next = 0;
      if (hazard <= 0.0) {
        ++data.nonpositive_hazard_count;  // no event possible in this interval
      } else {
        double du = upsilon;
        if (du <= 0.0) du = 0x1.0p-53;
        const double delta = -std::log(du) / hazard;
        if (delta < 1.0) {
          y_next = 1;
          event_time = static_cast<double>(k) + delta;
        }
      }

      VisitRecord r;
      r.id = i;
      r.k = k;
      r.a = a;
      r.l = l;
      r.u = u;
      r.y_next = y_next;
      r.forced = forced;
      subject_rows.push_back(r);
      a_prev = a;
      if (y_next == 1) break;
    }

    for (auto& r : subject_rows) {
      r.t = event_time;
      data.rows.push_back(r);
    }
  }
  return data;
}

}  // namespace

double conditional_hazard_two(const std::array<double, 4>& alpha, int a_k, double l_k, double u) {
  return alpha[0] + alpha[1] * a_k + alpha[2] * l_k + alpha[3] * u;
}

double treatment_prob_two(std::int32_t k, double l, int a_prev) {
  if (k == 0 && a_prev != 0)
    throw std::invalid_argument("treatment_prob_two: a_prev must be 0 at baseline");
  return inv_logit(-2.0 + 0.5 * l + a_prev);
}

LongDataset simulate_dataset_two(const StudyTwoParams& params, std::uint64_t replication,
                                 std::uint64_t master_seed) {
  return simulate_two_impl(params, replication, master_seed, /*allow_forcing=*/true);
}

LongDataset simulate_benchmark_two(StudyTwoParams params, std::uint64_t replication,
                                   std::uint64_t master_seed) {
  params.policy = PositivityPolicy{1.0, params.policy.tau, ViolationRegion::AboveTau};
  params.intervention.reset();
  return simulate_two_impl(params, replication, master_seed, /*allow_forcing=*/false);
}

}  // namespace posim
