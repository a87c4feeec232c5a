#ifndef POSIM_GLM_HPP
#define POSIM_GLM_HPP

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

namespace posim {

struct LogisticFit {
  Eigen::VectorXd coefficients;
  bool converged = false;
  int iterations = 0;
  double max_abs_score = 0.0;
  bool separation_flag = false;
};

class FitError : public std::runtime_error {
 public:
  explicit FitError(const std::string& msg, std::vector<int> columns = {})
      : std::runtime_error(msg), collinear_columns(std::move(columns)) {}
  std::vector<int> collinear_columns;
};

// Weighted Bernoulli maximum likelihood by Newton/IRLS with step-halving on
// likelihood decrease. Score tolerance 1e-8, at most 50 iterations;
// separation_flag is raised when any |coefficient| > 15 at termination.
// Throws FitError on empty data, n_rows < p, invalid weights, or a singular
// weighted information matrix (with the offending columns identified).
LogisticFit fit_weighted_logistic(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                  const Eigen::VectorXd& w);

}  // namespace posim

#endif
