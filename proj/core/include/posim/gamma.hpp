#ifndef POSIM_GAMMA_HPP
#define POSIM_GAMMA_HPP

namespace posim {

// Regularized lower incomplete gamma P(shape, x), series/continued-fraction
// evaluation.
double regularized_gamma_p(double shape, double x);

// Inverse CDF of Gamma(shape, scale): returns x with
// P(shape, x/scale) = u to within absolute CDF error 1e-12.
// Bracketing bisection followed by a Newton polish; u must lie in (0,1).
double gamma_inverse_cdf(double u, double shape, double scale);

}  // namespace posim

#endif
