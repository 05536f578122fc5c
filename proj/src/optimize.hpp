#pragma once

#include <cmath>
#include <cstddef>
#include <utility>

namespace gremfield::detail {

/// Golden-section search for the maximum of a unimodal f on [lo, hi].
/// Returns (argmax, max).
template <class F>
std::pair<double, double> golden_maximize(F&& f, double lo, double hi, int iterations = 200) {
  constexpr double kInvPhi = 0.61803398874989484820;
  double a = lo;
  double b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int i = 0; i < iterations && b - a > 1e-15 * (1.0 + std::abs(a) + std::abs(b)); ++i) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  double best_x = fc >= fd ? c : d;
  double best = fc >= fd ? fc : fd;
  for (double x : {lo, hi}) {
    const double fx = f(x);
    if (fx > best) {
      best = fx;
      best_x = x;
    }
  }
  return {best_x, best};
}

/// Maximum of f over a uniform grid of `points` nodes on [lo, hi], refined by
/// golden-section search over the two cells adjacent to the best node.
/// The flag reports whether the best node was an end point of the grid.
struct GridMax {
  double argmax;
  double value;
  bool at_boundary;
};

template <class F>
GridMax grid_golden_maximize(F&& f, double lo, double hi, int points) {
  int best_i = 0;
  double best = f(lo);
  for (int i = 1; i < points; ++i) {
    const double x = lo + (hi - lo) * i / (points - 1);
    const double fx = f(x);
    if (fx > best) {
      best = fx;
      best_i = i;
    }
  }
  const double step = (hi - lo) / (points - 1);
  const double a = best_i == 0 ? lo : lo + step * (best_i - 1);
  const double b = best_i == points - 1 ? hi : lo + step * (best_i + 1);
  auto [x, v] = golden_maximize(f, a, b);
  if (v < best) {
    x = lo + step * best_i;
    v = best;
  }
  return {x, v, best_i == 0 || best_i == points - 1};
}

}  // namespace gremfield::detail
