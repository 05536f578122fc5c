#include "gremfield/scalar.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace gremfield {

EntropyPoint cramer_entropy(double t) {
  if (!(std::abs(t) <= 1.0)) {
    throw std::domain_error("cramer_entropy: |t| > 1 (t = " + std::to_string(t) + ")");
  }
  EntropyPoint p;
  p.t = t;
  if (std::abs(t) == 1.0) {
    p.value = kLog2;
    p.d1 = std::copysign(std::numeric_limits<double>::infinity(), t);
    p.d2 = std::numeric_limits<double>::infinity();
    p.boundary = true;
    return p;
  }
  p.value = 0.5 * ((1.0 - t) * std::log1p(-t) + (1.0 + t) * std::log1p(t));
  p.d1 = std::atanh(t);
  p.d2 = 1.0 / ((1.0 - t) * (1.0 + t));
  return p;
}

double rho(double t) {
  const double gap = kLog2 - cramer_entropy(t).value;
  return gap > 0.0 ? std::sqrt(2.0 * gap) : 0.0;
}

double log_cosh(double x) {
  const double a = std::abs(x);
  return a + std::log1p(std::exp(-2.0 * a)) - kLog2;
}

double t_star(double h, double tol) {
  if (!(h >= 0.0)) {
    throw std::domain_error("t_star: field strength must be non-negative");
  }
  if (h == 0.0) return 0.0;
  if (!(tol > 0.0)) throw std::invalid_argument("t_star: tolerance must be positive");

  auto g = [h](double t) { return std::atanh(t) - h * rho(t); };
  double lo = 0.0;
  double hi = 1.0 - 1e-12;
  // For very strong fields the root may sit beyond the default bracket.
  while (g(hi) < 0.0 && hi < 1.0) {
    hi = 0.5 * (hi + 1.0);
    if (hi == 1.0) return std::nextafter(1.0, 0.0);
  }
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double gm = g(mid);
    if (gm == 0.0) return mid;
    (gm < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double ground_state_constant(double h) {
  const double t = t_star(h);
  return rho(t) + h * t;
}

RemScaling rem_scaling(int size, double h) {
  if (size < 1) throw std::invalid_argument("rem_scaling: size must be >= 1");
  RemScaling s;
  s.size = size;
  s.h = h;
  s.t_star = t_star(h);
  const double r = rho(s.t_star);
  s.ground_state = r + h * s.t_star;
  const double root_n = std::sqrt(static_cast<double>(size));
  s.slope = 1.0 / (r * root_n);
  const EntropyPoint e = cramer_entropy(s.t_star);
  const double one_minus_t2 = (1.0 - s.t_star) * (1.0 + s.t_star);
  // Curvature of the large-deviation exponent at t* is I''(t*) + h^2.
  const double curvature = e.d2 + h * h;
  s.shift = s.ground_state * root_n +
            0.5 * s.slope * std::log(s.slope * s.slope / (2.0 * kPi * one_minus_t2 * curvature));
  return s;
}

BinomialAsymptotic log_binomial_asymptotic(std::int64_t n, std::int64_t k, double eps) {
  if (n < 1 || k < 0 || k > n) {
    throw std::invalid_argument("log_binomial_asymptotic: need 0 <= k <= N, N >= 1");
  }
  const double nd = static_cast<double>(n);
  const double t = (nd - 2.0 * static_cast<double>(k)) / nd;
  if (std::abs(t) > 1.0 - eps) {
    throw std::domain_error("log_binomial_asymptotic: degenerate magnetization t = " +
                            std::to_string(t));
  }
  const double one_minus_t2 = (1.0 - t) * (1.0 + t);
  BinomialAsymptotic r;
  r.log_value = 0.5 * std::log(2.0 / kPi) + nd * kLog2 - nd * cramer_entropy(t).value -
                0.5 * std::log(nd * one_minus_t2) +
                std::log1p((1.0 / 12.0 - 1.0 / (3.0 * one_minus_t2)) / nd);
  r.error_order = 1.0 / (nd * nd);
  return r;
}

}  // namespace gremfield
