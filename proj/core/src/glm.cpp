#include "posim/glm.hpp"

#include <cmath>

namespace posim {

namespace {

// log(1 + e^x) without overflow
double softplus(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

double weighted_loglik(const Eigen::VectorXd& eta, const Eigen::VectorXd& y,
                       const Eigen::VectorXd& w) {
  double ll = 0.0;
  for (Eigen::Index i = 0; i < eta.size(); ++i)
    ll += w[i] * (y[i] * eta[i] - softplus(eta[i]));
  return ll;
}

}  // namespace

LogisticFit fit_weighted_logistic(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                  const Eigen::VectorXd& w) {
  const Eigen::Index n = X.rows();
  const Eigen::Index p = X.cols();
  if (n == 0 || p == 0) throw FitError("fit_weighted_logistic: empty data");
  if (y.size() != n || w.size() != n) throw FitError("fit_weighted_logistic: dimension mismatch");
  if (n < p) throw FitError("fit_weighted_logistic: fewer rows than columns");
  if (!X.allFinite() || !y.allFinite() || !w.allFinite())
    throw FitError("fit_weighted_logistic: non-finite input");
  if ((w.array() < 0.0).any() || w.sum() <= 0.0)
    throw FitError("fit_weighted_logistic: weights must be nonnegative, not all zero");

  // Rank check on the weight-scaled design; report the collinear columns.
  {
    Eigen::MatrixXd Xw = w.array().sqrt().matrix().asDiagonal() * X;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Xw);
    qr.setThreshold(1e-10);
    if (qr.rank() < p) {
      std::vector<int> cols;
      const auto perm = qr.colsPermutation().indices();
      for (Eigen::Index j = qr.rank(); j < p; ++j) cols.push_back(perm[j]);
      throw FitError("fit_weighted_logistic: singular weighted information matrix", cols);
    }
  }

  const double tol = 1e-8;
  const int max_iter = 50;

  LogisticFit fit;
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  Eigen::VectorXd eta = X * beta;
  double ll = weighted_loglik(eta, y, w);

  for (int iter = 1; iter <= max_iter; ++iter) {
    Eigen::VectorXd mu = (1.0 / (1.0 + (-eta.array()).exp())).matrix();
    Eigen::VectorXd score = X.transpose() * (w.array() * (y - mu).array()).matrix();
    fit.max_abs_score = score.cwiseAbs().maxCoeff();
    fit.iterations = iter - 1;
    if (fit.max_abs_score <= tol) {
      fit.converged = true;
      break;
    }

    Eigen::VectorXd irls_w = (w.array() * mu.array() * (1.0 - mu.array())).matrix();
    Eigen::MatrixXd info = X.transpose() * irls_w.asDiagonal() * X;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(info);
    Eigen::VectorXd step;
    if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
      step = ldlt.solve(score);
    } else {
      // Fisher weights collapsed (quasi-separation); fall back to a damped
      // gradient step so the iteration stays finite.
      step = score / std::max(1.0, score.cwiseAbs().maxCoeff());
    }

    // Step-halving on likelihood decrease. The slack is relative to the
    // log-likelihood magnitude: near the optimum a full Newton step improves
    // the objective by less than its rounding noise, and an absolute slack
    // would spuriously reject it and stall the iteration.
    const double slack = 1e-12 * (1.0 + std::fabs(ll));
    double scale = 1.0;
    Eigen::VectorXd beta_new;
    double ll_new;
    for (int h = 0; h < 30; ++h) {
      beta_new = beta + scale * step;
      ll_new = weighted_loglik(X * beta_new, y, w);
      if (ll_new >= ll - slack) break;
      scale *= 0.5;
    }
    beta = beta_new;
    eta = X * beta;
    ll = ll_new;
    fit.iterations = iter;
  }

  fit.coefficients = beta;
  if (!fit.converged) {
    Eigen::VectorXd mu = (1.0 / (1.0 + (-eta.array()).exp())).matrix();
    fit.max_abs_score =
        (X.transpose() * (w.array() * (y - mu).array()).matrix()).cwiseAbs().maxCoeff();
  }
  fit.separation_flag = (beta.cwiseAbs().maxCoeff() > 15.0);
  return fit;
}

}  // namespace posim
