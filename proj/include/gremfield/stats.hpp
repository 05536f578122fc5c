#pragma once

// Goodness-of-fit tools for comparing finite-N samples with limit laws.

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gremfield/point_sample.hpp"

namespace gremfield {

/// One test outcome. `statistic` is a KS distance or |z|.
struct GofReport {
  std::string test;
  double statistic = 0.0;
  std::size_t sample_size = 0;
  double critical_1 = 0.0;
  double critical_5 = 0.0;
  bool pass_1 = false;
  bool pass_5 = false;
};

enum class Reference { kGumbel, kExponential, kUniform };

/// Throws std::invalid_argument on an unknown tag.
Reference parse_reference(std::string_view tag);
std::string_view reference_name(Reference ref);
double reference_cdf(Reference ref, double x);

/// Two-sided one-sample KS with asymptotic critical values. n >= 20.
GofReport ks_test(std::span<const double> sample, Reference ref);

/// Two-sample KS; each side needs at least 20 points.
GofReport ks_two_sample(std::span<const double> a, std::span<const double> b);

/// Sup distance between two empirical CDFs.
double ks_distance(std::span<const double> a, std::span<const double> b);

struct PoissonCountReport {
  double expected = 0.0;  // e^{-a} - e^{-b}
  double mean = 0.0;
  double variance = 0.0;
  double z_mean = 0.0;
  double z_variance = 0.0;
  GofReport mean_test;
  GofReport variance_test;
};

/// Counts points of each sample in [a, b] and compares the count
/// distribution with Poisson(e^{-a} - e^{-b}). b may be +infinity.
/// Throws std::domain_error when a sample's lowest retained point is not
/// below a (the count could be cut off by truncation).
PoissonCountReport poisson_interval_counts(std::span<const PointSample> samples, double a,
                                           double b);

struct HillEstimate {
  double alpha = 0.0;  // tail index, 1 / Hill gamma
  double lower = 0.0;  // 95% asymptotic interval
  double upper = 0.0;
  std::size_t exceedances = 0;
  // Estimate at half the fraction, used for the drift check.
  double alpha_half = 0.0;
  bool drift = false;
};

/// Hill estimator over the top `top_fraction` order statistics. Values must
/// be positive; top_fraction in (0, 0.5]. Throws std::invalid_argument if
/// fewer than 20 exceedances are available.
HillEstimate hill_tail_index(std::span<const double> values, double top_fraction);

}  // namespace gremfield
