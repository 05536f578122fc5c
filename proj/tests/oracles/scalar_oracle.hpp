#pragma once

// Test-side reference values computed in 50-digit arithmetic, sharing no code
// with the library.

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

namespace oracle {

using Real = boost::multiprecision::cpp_bin_float_50;

inline Real entropy(const Real& t) {
  using boost::multiprecision::log;
  const Real one = 1;
  Real v = 0;
  if (t < one) v += (one - t) * log(one - t);
  if (t > -one) v += (one + t) * log(one + t);
  return v / 2;
}

inline Real rho(const Real& t) {
  using boost::multiprecision::log;
  using boost::multiprecision::sqrt;
  const Real r = 2 * (log(Real(2)) - entropy(t));
  return r > 0 ? sqrt(r) : Real(0);
}

struct Maximum {
  Real t;
  Real value;
};

/// argmax of rho(t) + h t: coarse grid over [0, 1], then golden section on
/// the bracket around the best node.
inline Maximum maximise_rho_plus_field(const Real& h, int grid = 2000) {
  auto f = [&](const Real& t) { return rho(t) + h * t; };
  int best = 0;
  Real best_value = f(0);
  for (int i = 1; i <= grid; ++i) {
    const Real v = f(Real(i) / grid);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  Real lo = Real(best > 0 ? best - 1 : 0) / grid;
  Real hi = Real(best < grid ? best + 1 : grid) / grid;
  using boost::multiprecision::sqrt;
  const Real inv_phi = (sqrt(Real(5)) - 1) / 2;
  Real a = hi - inv_phi * (hi - lo);
  Real b = lo + inv_phi * (hi - lo);
  Real fa = f(a);
  Real fb = f(b);
  for (int it = 0; it < 240; ++it) {
    if (fa < fb) {
      lo = a;
      a = b;
      fa = fb;
      b = lo + inv_phi * (hi - lo);
      fb = f(b);
    } else {
      hi = b;
      b = a;
      fb = fa;
      a = hi - inv_phi * (hi - lo);
      fa = f(a);
    }
  }
  const Real t = (lo + hi) / 2;
  return {t, f(t)};
}

/// Exact log C(n, k) from an arbitrary-precision integer.
inline double log_binomial_exact(int n, int k) {
  boost::multiprecision::cpp_int c = 1;
  for (int i = 1; i <= k; ++i) {
    c *= n - k + i;
    c /= i;
  }
  using boost::multiprecision::log;
  return static_cast<double>(log(Real(c)));
}

}  // namespace oracle
