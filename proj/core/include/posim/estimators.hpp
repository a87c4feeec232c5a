#ifndef POSIM_ESTIMATORS_HPP
#define POSIM_ESTIMATORS_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "posim/dataset.hpp"
#include "posim/glm.hpp"
#include "posim/weights.hpp"

namespace posim {

// How a treatment history expands into hazard-model design columns.
enum class GForm {
  CurrentLevel,     // a_k
  Duration,         // sum_{j<=k} a_j
  MainEffectTerms,  // a_k, a_{k-1}, ..., a_0 padded with zeros to K+1 columns
  HavercroftD1AD3,  // (d1, a_k, d3), d1 = min(k, k*), d3 = max(k - k*, 0)
};

// Number of non-intercept columns the g-form contributes (K is the last visit).
int gform_width(GForm gform, std::int32_t max_visit);

// Design columns for treatment history a_0..a_k (history.size() == k+1).
std::vector<double> expand_gform(GForm gform, const std::vector<int>& history,
                                 std::int32_t max_visit);

struct LogitMsmFit {
  Eigen::VectorXd gamma_hat;  // intercept followed by g-form coefficients
  LogisticFit diagnostics;
};

// Weighted pooled logistic regression of Y_{k+1} on intercept + g-form
// columns, case weights sw_truncated. Weight rows must align with the
// dataset rows.
LogitMsmFit fit_logit_msm(const LongDataset& data, const WeightTable& weights, GForm gform);

// Step functions of cumulative regression coefficients. Column 0 is the
// intercept C0; column 1+j is CAj for lag j = 0..K. The lag-j column only
// enters the design for event times t > j.
struct AalenMsmFit {
  std::int32_t max_visit = 0;               // K
  std::vector<double> event_times;          // ordered distinct event times
  Eigen::MatrixXd increments;               // n_times x (K+2)
  std::vector<std::vector<bool>> estimated; // identifiability mask, same shape
  std::int64_t negative_increment_count = 0;

  // C_col(t): sum of increments at event times <= t
  double cumulative(int col, double t) const;
};

// Weighted Aalen least-squares estimator with main-effect-terms design: at
// each ordered event time t, dC(t) = (X'WX)^-1 X'W dN(t) over the at-risk
// rows with interval-floor(t) covariates and weights. Singular designs drop
// the unidentified columns for that increment (recorded in the mask).
AalenMsmFit fit_aalen_msm(const LongDataset& data, const WeightTable& weights);

// Marginal survival under regime a_0..a_K at integer visit horizon t:
// product over k < t of (1 - logit^-1[gamma_0 + g(gamma_A; a_k)]).
double survival_logit(const Eigen::VectorXd& gamma, GForm gform, const std::vector<int>& regime,
                      std::int32_t t);

// Marginal survival from cumulative-coefficient step functions:
// exp(-sum_{s<=t} [dC0(s) + sum_j a_{floor(s)-j} dCAj(s)]).
double survival_aalen(const AalenMsmFit& fit, const std::vector<int>& regime, double t);

}  // namespace posim

#endif
