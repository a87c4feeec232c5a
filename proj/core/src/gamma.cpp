#include "posim/gamma.hpp"

#include <cmath>
#include <stdexcept>

namespace posim {

namespace {

// Series expansion, converges quickly for x < shape + 1.
double gamma_p_series(double shape, double x) {
  double ap = shape;
  double sum = 1.0 / shape;
  double del = sum;
  for (int n = 0; n < 500; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + shape * std::log(x) - std::lgamma(shape));
}

// Lentz continued fraction for Q(shape, x), x >= shape + 1.
double gamma_q_contfrac(double shape, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - shape;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 500; ++i) {
    double an = -static_cast<double>(i) * (static_cast<double>(i) - shape);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) break;
  }
  return std::exp(-x + shape * std::log(x) - std::lgamma(shape)) * h;
}

}  // namespace

double regularized_gamma_p(double shape, double x) {
  if (shape <= 0.0) throw std::invalid_argument("regularized_gamma_p: shape <= 0");
  if (x < 0.0) throw std::invalid_argument("regularized_gamma_p: x < 0");
  if (x == 0.0) return 0.0;
  if (x < shape + 1.0) return gamma_p_series(shape, x);
  return 1.0 - gamma_q_contfrac(shape, x);
}

double gamma_inverse_cdf(double u, double shape, double scale) {
  if (!(u > 0.0 && u < 1.0)) throw std::domain_error("gamma_inverse_cdf: u outside (0,1)");
  if (shape <= 0.0 || scale <= 0.0)
    throw std::invalid_argument("gamma_inverse_cdf: shape/scale must be positive");

  // Bracket in standardized units (scale 1), expanding upward from the mean.
  double lo = 0.0;
  double hi = shape;
  while (regularized_gamma_p(shape, hi) < u) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e8) break;
  }

  // Bisection until the bracket is tight enough for Newton.
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if (regularized_gamma_p(shape, mid) < u)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-8 * (1.0 + hi)) break;
  }

  // Newton polish on P(shape, x) - u with the gamma density as derivative.
  double x = 0.5 * (lo + hi);
  for (int i = 0; i < 30; ++i) {
    double f = regularized_gamma_p(shape, x) - u;
    if (std::fabs(f) <= 1e-13) break;
    double pdf = std::exp(-x + (shape - 1.0) * std::log(x) - std::lgamma(shape));
    if (pdf <= 0.0) break;
    double step = f / pdf;
    double next = x - step;
    if (next <= lo || next >= hi) {
      next = (f > 0.0) ? 0.5 * (lo + x) : 0.5 * (x + hi);
    }
    if (f > 0.0)
      hi = x;
    else
      lo = x;
    x = next;
  }
  return x * scale;
}

}  // namespace posim
