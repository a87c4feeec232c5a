#include <cmath>
#include <vector>

#include "doctest.h"
#include "posim/glm.hpp"
#include "posim/stochastic.hpp"

using namespace posim;

namespace {

double weighted_loglik(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                       const Eigen::VectorXd& w, double b0, double b1) {
  double ll = 0.0;
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    const double eta = b0 * X(i, 0) + b1 * X(i, 1);
    // log(1 + e^eta) computed stably
    const double log1pe = eta > 0 ? eta + std::log1p(std::exp(-eta)) : std::log1p(std::exp(eta));
    ll += w[i] * (y[i] * eta - log1pe);
  }
  return ll;
}

// Two-parameter data set with known signal, deterministic draws.
void make_data(Eigen::MatrixXd& X, Eigen::VectorXd& y, Eigen::VectorXd& w, int n,
               bool uniform_weights) {
  StreamKey key{314, {}};
  auto s = derive_stream(key.child(StreamLabel::Oracle, 1));
  X.resize(n, 2);
  y.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    const double x = s.normal(0.0, 1.0);
    X(i, 0) = 1.0;
    X(i, 1) = x;
    const double p = 1.0 / (1.0 + std::exp(-(-0.4 + 1.1 * x)));
    y[i] = s.bernoulli(p);
    w[i] = uniform_weights ? 1.0 : 0.5 + s.uniform();
  }
}

}  // namespace

TEST_CASE("fitter agrees with a grid-search likelihood oracle") {
  Eigen::MatrixXd X;
  Eigen::VectorXd y, w;
  make_data(X, y, w, 60, false);
  const auto fit = fit_weighted_logistic(X, y, w);
  CHECK(fit.converged);

  // Coarse pass over [-5, 5]^2 then a fine pass around the coarse argmax.
  double best0 = 0, best1 = 0, best = -1e300;
  for (double b0 = -5.0; b0 <= 5.0; b0 += 0.05)
    for (double b1 = -5.0; b1 <= 5.0; b1 += 0.05) {
      const double ll = weighted_loglik(X, y, w, b0, b1);
      if (ll > best) {
        best = ll;
        best0 = b0;
        best1 = b1;
      }
    }
  for (double b0 = best0 - 0.06; b0 <= best0 + 0.06; b0 += 0.0001)
    for (double b1 = best1 - 0.06; b1 <= best1 + 0.06; b1 += 0.0001) {
      const double ll = weighted_loglik(X, y, w, b0, b1);
      if (ll > best) {
        best = ll;
        best0 = b0;
        best1 = b1;
      }
    }
  CHECK(std::fabs(fit.coefficients[0] - best0) <= 1e-4);
  CHECK(std::fabs(fit.coefficients[1] - best1) <= 1e-4);
}

TEST_CASE("fitted score is zero at the optimum") {
  Eigen::MatrixXd X;
  Eigen::VectorXd y, w;
  make_data(X, y, w, 200, false);
  const auto fit = fit_weighted_logistic(X, y, w);
  CHECK(fit.converged);
  CHECK(fit.max_abs_score <= 1e-8);
  CHECK_FALSE(fit.separation_flag);
}

TEST_CASE("rescaling all weights leaves the coefficients unchanged") {
  Eigen::MatrixXd X;
  Eigen::VectorXd y, w;
  make_data(X, y, w, 150, false);
  const auto a = fit_weighted_logistic(X, y, w);
  const auto b = fit_weighted_logistic(X, y, (5.0 * w).eval());
  CHECK((a.coefficients - b.coefficients).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("perfect separation raises the flag") {
  Eigen::MatrixXd X(8, 2);
  Eigen::VectorXd y(8), w = Eigen::VectorXd::Ones(8);
  for (int i = 0; i < 8; ++i) {
    X(i, 0) = 1.0;
    X(i, 1) = i < 4 ? -1.0 - i : 1.0 + (i - 4);
    y[i] = i < 4 ? 0.0 : 1.0;
  }
  const auto fit = fit_weighted_logistic(X, y, w);
  CHECK(fit.separation_flag);
}

TEST_CASE("a duplicated column is reported as collinear") {
  Eigen::MatrixXd X(20, 3);
  Eigen::VectorXd y(20), w = Eigen::VectorXd::Ones(20);
  StreamKey key{9, {}};
  auto s = derive_stream(key.child(StreamLabel::Oracle, 2));
  for (int i = 0; i < 20; ++i) {
    X(i, 0) = 1.0;
    X(i, 1) = s.normal(0.0, 1.0);
    X(i, 2) = 2.0 * X(i, 1);
    y[i] = s.bernoulli(0.5);
  }
  CHECK_THROWS_AS(fit_weighted_logistic(X, y, w), FitError);
  try {
    fit_weighted_logistic(X, y, w);
  } catch (const FitError& e) {
    CHECK_FALSE(e.collinear_columns.empty());
  }
}

TEST_CASE("input validation") {
  Eigen::MatrixXd X(2, 3);
  X.setOnes();
  Eigen::VectorXd y = Eigen::VectorXd::Zero(2);
  Eigen::VectorXd w = Eigen::VectorXd::Ones(2);
  CHECK_THROWS_AS(fit_weighted_logistic(X, y, w), FitError);  // n < p

  Eigen::MatrixXd X2(4, 1);
  X2.setOnes();
  Eigen::VectorXd y2(4);
  y2 << 0, 1, 0, 1;
  Eigen::VectorXd wneg(4);
  wneg << 1, 1, -1, 1;
  CHECK_THROWS_AS(fit_weighted_logistic(X2, y2, wneg), FitError);
}
