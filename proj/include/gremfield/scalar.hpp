#pragma once

// Scalar special functions of the REM/GREM with a uniform external field.
// All entropies are in natural logarithms.

#include <cstdint>

namespace gremfield {

/// Cramér entropy I(t) with its first two derivatives.
///
/// At t = +-1 the second derivative is +infinity and `boundary` is set.
struct EntropyPoint {
  double t = 0.0;
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 1.0;
  bool boundary = false;
};

struct RemScaling {
  int size = 1;
  double h = 0.0;
  double slope = 0.0;   // A_N(h)
  double shift = 0.0;   // B_N(h)
  double t_star = 0.0;
  double ground_state = 0.0;  // M(h)

  double forward(double x) const { return slope * x + shift; }
  double inverse(double y) const { return (y - shift) / slope; }
};

struct BinomialAsymptotic {
  double log_value = 0.0;
  double error_order = 0.0;  // size of the neglected relative term, 1/N^2
};

constexpr double kLog2 = 0.69314718055994530942;
constexpr double kPi = 3.14159265358979323846;

/// Throws std::domain_error for |t| > 1.
EntropyPoint cramer_entropy(double t);

/// rho(t) = sqrt(2 (log 2 - I(t))).
double rho(double t);

/// log cosh(x) without overflow.
double log_cosh(double x);

/// Unique maximiser of rho(t) + h t on [-1, 1] for h >= 0.
///
/// Bisection on I'(t) - h rho(t), which is strictly increasing on (0, 1).
/// `tol` is the final bracket width.
double t_star(double h, double tol = 1e-15);

/// M(h) = max_t (rho(t) + h t).
double ground_state_constant(double h);

/// Affine REM centring u_{N,h}(x) = A_N(h) x + B_N(h).
RemScaling rem_scaling(int size, double h);

/// Stirling form of log C(N, k) including the 1/N correction.
///
/// Throws std::domain_error when |(N - 2k)/N| > 1 - eps.
BinomialAsymptotic log_binomial_asymptotic(std::int64_t n, std::int64_t k, double eps = 0.05);

}  // namespace gremfield
