#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "doctest.h"
#include "posim/estimators.hpp"
#include "posim/genmodel_two.hpp"

using namespace posim;

namespace {

// Independent reference: at every distinct event time rebuild the full
// at-risk design and solve one weighted least-squares problem directly.
Eigen::MatrixXd aalen_direct_wls(const LongDataset& data, const WeightTable& weights,
                                 const std::vector<double>& times) {
  const std::int32_t K = data.max_visit;
  struct Subj {
    std::vector<int> history;
    std::vector<double> weight;
    double t = 0.0;
    bool event = false;
  };
  std::map<std::int32_t, Subj> subjects;
  for (std::size_t j = 0; j < data.rows.size(); ++j) {
    const auto& r = data.rows[j];
    auto& s = subjects[r.id];
    s.history.push_back(r.a);
    s.weight.push_back(weights.rows[j].sw_truncated);
    s.t = r.t;
    if (r.y_next == 1) s.event = true;
  }

  Eigen::MatrixXd inc = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(times.size()), K + 2);
  for (std::size_t ti = 0; ti < times.size(); ++ti) {
    const double t = times[ti];
    const auto kf = static_cast<std::int32_t>(std::floor(t));
    const int p = kf + 2;
    std::vector<const Subj*> at_risk;
    for (const auto& [id, s] : subjects)
      if (s.t >= t && static_cast<std::int32_t>(s.history.size()) > kf) at_risk.push_back(&s);
    if (static_cast<int>(at_risk.size()) < p) continue;
    Eigen::MatrixXd X(static_cast<Eigen::Index>(at_risk.size()), p);
    Eigen::VectorXd w(static_cast<Eigen::Index>(at_risk.size()));
    Eigen::VectorXd dn(static_cast<Eigen::Index>(at_risk.size()));
    for (Eigen::Index r = 0; r < X.rows(); ++r) {
      const Subj& s = *at_risk[static_cast<std::size_t>(r)];
      X(r, 0) = 1.0;
      for (std::int32_t j = 0; j <= kf; ++j) X(r, 1 + j) = s.history[static_cast<std::size_t>(kf - j)];
      w[r] = s.weight[static_cast<std::size_t>(kf)];
      dn[r] = (s.event && s.t == t) ? 1.0 : 0.0;
    }
    const Eigen::VectorXd sw = w.array().sqrt().matrix();
    const Eigen::MatrixXd Xw = sw.asDiagonal() * X;
    const Eigen::VectorXd yw = sw.asDiagonal() * dn;
    inc.row(static_cast<Eigen::Index>(ti)).head(p) = Xw.colPivHouseholderQr().solve(yw);
  }
  return inc;
}

}  // namespace

TEST_CASE("g-form expansions") {
  const std::vector<int> h = {0, 0, 1, 1};  // a_0..a_3
  CHECK(expand_gform(GForm::CurrentLevel, h, 4) == std::vector<double>{1.0});
  CHECK(expand_gform(GForm::Duration, h, 4) == std::vector<double>{2.0});
  CHECK(expand_gform(GForm::MainEffectTerms, h, 4) ==
        std::vector<double>{1.0, 1.0, 0.0, 0.0, 0.0});
  // k = 3, k* = 2: d1 = 2, current a = 1, d3 = 1
  CHECK(expand_gform(GForm::HavercroftD1AD3, h, 40) == std::vector<double>{2.0, 1.0, 1.0});
  // untreated history: d1 = k, a = 0, d3 = 0
  const std::vector<int> h0 = {0, 0, 0};
  CHECK(expand_gform(GForm::HavercroftD1AD3, h0, 40) == std::vector<double>{2.0, 0.0, 0.0});
  CHECK_THROWS_AS(expand_gform(GForm::CurrentLevel, std::vector<int>{}, 4),
                  std::invalid_argument);
}

TEST_CASE("Aalen increments match the direct per-event-time WLS oracle") {
  StudyTwoParams params;
  params.n = 20;
  params.policy = PositivityPolicy{0.05, 1.0, ViolationRegion::AboveTau};
  const auto d = simulate_dataset_two(params, 0, 7);
  const auto wt = truncate_weights(estimate_weights_two(d), TruncationStrategy::P5_95);

  const auto fit = fit_aalen_msm(d, wt);
  const auto want = aalen_direct_wls(d, wt, fit.event_times);
  REQUIRE(fit.increments.rows() == want.rows());
  for (Eigen::Index i = 0; i < want.rows(); ++i)
    for (Eigen::Index c = 0; c < want.cols(); ++c)
      if (fit.estimated[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)])
        CHECK(std::fabs(fit.increments(i, c) - want(i, c)) <= 1e-10);
}

TEST_CASE("Aalen oracle agreement also holds at a larger n") {
  StudyTwoParams params;
  params.n = 400;
  const auto d = simulate_dataset_two(params, 1, 7);
  const auto wt = estimate_weights_two(d);
  const auto fit = fit_aalen_msm(d, wt);
  const auto want = aalen_direct_wls(d, wt, fit.event_times);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < want.rows(); ++i)
    for (Eigen::Index c = 0; c < want.cols(); ++c)
      if (fit.estimated[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)])
        worst = std::max(worst, std::fabs(fit.increments(i, c) - want(i, c)));
  CHECK(worst <= 1e-9);
}

TEST_CASE("cumulative coefficients are increment partial sums") {
  StudyTwoParams params;
  params.n = 100;
  const auto d = simulate_dataset_two(params, 2, 7);
  const auto wt = estimate_weights_two(d);
  const auto fit = fit_aalen_msm(d, wt);
  REQUIRE(!fit.event_times.empty());
  double c0 = 0.0;
  for (std::size_t i = 0; i < fit.event_times.size(); ++i)
    c0 += fit.increments(static_cast<Eigen::Index>(i), 0);
  CHECK(fit.cumulative(0, fit.event_times.back()) == doctest::Approx(c0).epsilon(1e-12));
  CHECK(fit.cumulative(0, 0.0) == 0.0);
}

TEST_CASE("logit survival: zero coefficients give (1/2)^t") {
  Eigen::VectorXd gamma = Eigen::VectorXd::Zero(4);
  const std::vector<int> regime(41, 0);
  CHECK(survival_logit(gamma, GForm::HavercroftD1AD3, regime, 0) == 1.0);
  CHECK(survival_logit(gamma, GForm::HavercroftD1AD3, regime, 3) ==
        doctest::Approx(0.125).epsilon(1e-14));
}

TEST_CASE("logit survival is non-increasing in t") {
  Eigen::VectorXd gamma(4);
  gamma << -3.0, 0.05, -1.5, 0.1;
  const std::vector<int> always(41, 1), never(41, 0);
  for (const auto& reg : {always, never}) {
    double prev = 1.0;
    for (std::int32_t t = 0; t <= 41; ++t) {
      const double s = survival_logit(gamma, GForm::HavercroftD1AD3, reg, t);
      CHECK(s <= prev + 1e-15);
      prev = s;
    }
  }
}

TEST_CASE("Aalen survival: never treated depends only on the intercept") {
  StudyTwoParams params;
  params.n = 300;
  const auto d = simulate_dataset_two(params, 3, 7);
  const auto wt = estimate_weights_two(d);
  const auto fit = fit_aalen_msm(d, wt);
  const std::vector<int> never(5, 0);
  for (double t : {1.0, 2.5, 5.0})
    CHECK(survival_aalen(fit, never, t) ==
          doctest::Approx(std::exp(-fit.cumulative(0, t))).epsilon(1e-12));
}

TEST_CASE("Aalen survival with zero increments is 1") {
  AalenMsmFit fit;
  fit.max_visit = 4;
  fit.event_times = {0.5, 1.5};
  fit.increments = Eigen::MatrixXd::Zero(2, 6);
  fit.estimated.assign(2, std::vector<bool>(6, true));
  const std::vector<int> regime(5, 1);
  CHECK(survival_aalen(fit, regime, 5.0) == 1.0);
}
