#include "gremfield/stats.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace gremfield {

namespace {

// Asymptotic Kolmogorov quantiles.
constexpr double kKs1 = 1.628;
constexpr double kKs5 = 1.358;
constexpr double kZ1 = 2.5758293035489;
constexpr double kZ5 = 1.9599639845401;
constexpr std::size_t kMinSample = 20;

GofReport finish(std::string name, double statistic, std::size_t n, double c1, double c5) {
  GofReport r;
  r.test = std::move(name);
  r.statistic = statistic;
  r.sample_size = n;
  r.critical_1 = c1;
  r.critical_5 = c5;
  r.pass_1 = statistic < c1;
  r.pass_5 = statistic < c5;
  return r;
}

double hill_gamma(const std::vector<double>& sorted_desc, std::size_t k) {
  const double base = std::log(sorted_desc[k]);
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) sum += std::log(sorted_desc[i]) - base;
  return sum / static_cast<double>(k);
}

}  // namespace

Reference parse_reference(std::string_view tag) {
  if (tag == "gumbel") return Reference::kGumbel;
  if (tag == "exponential") return Reference::kExponential;
  if (tag == "uniform") return Reference::kUniform;
  throw std::invalid_argument("unknown reference distribution '" + std::string(tag) + "'");
}

std::string_view reference_name(Reference ref) {
  switch (ref) {
    case Reference::kGumbel: return "gumbel";
    case Reference::kExponential: return "exponential";
    case Reference::kUniform: return "uniform";
  }
  return "unknown";
}

double reference_cdf(Reference ref, double x) {
  switch (ref) {
    case Reference::kGumbel:
      return std::exp(-std::exp(-x));
    case Reference::kExponential:
      return x <= 0.0 ? 0.0 : -std::expm1(-x);
    case Reference::kUniform:
      return std::clamp(x, 0.0, 1.0);
  }
  return 0.0;
}

GofReport ks_test(std::span<const double> sample, Reference ref) {
  const std::size_t n = sample.size();
  if (n < kMinSample) throw std::invalid_argument("ks_test: need at least 20 points");
  std::vector<double> x(sample.begin(), sample.end());
  std::sort(x.begin(), x.end());
  const double dn = static_cast<double>(n);
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = reference_cdf(ref, x[i]);
    d = std::max({d, (i + 1) / dn - f, f - i / dn});
  }
  const double root = std::sqrt(dn);
  return finish("ks:" + std::string(reference_name(ref)), d, n, kKs1 / root, kKs5 / root);
}

double ks_distance(std::span<const double> a, std::span<const double> b) {
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double na = static_cast<double>(x.size());
  const double nb = static_cast<double>(y.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  return d;
}

GofReport ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.size() < kMinSample || b.size() < kMinSample) {
    throw std::invalid_argument("ks_two_sample: need at least 20 points per side");
  }
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double scale = std::sqrt((na + nb) / (na * nb));
  const auto n_eff = static_cast<std::size_t>(std::llround(na * nb / (na + nb)));
  return finish("ks:two-sample", ks_distance(a, b), n_eff, kKs1 * scale, kKs5 * scale);
}

PoissonCountReport poisson_interval_counts(std::span<const PointSample> samples, double a,
                                           double b) {
  if (!(b > a)) throw std::invalid_argument("poisson_interval_counts: need b > a");
  if (samples.size() < 2) throw std::invalid_argument("poisson_interval_counts: need >= 2 samples");
  std::vector<double> counts;
  counts.reserve(samples.size());
  for (const auto& s : samples) {
    if (s.empty() || !(s.lowest() < a)) {
      throw std::domain_error("poisson_interval_counts: sample truncated above the interval");
    }
    const auto c = std::count_if(s.points.begin(), s.points.end(),
                                 [&](double x) { return x >= a && x <= b; });
    counts.push_back(static_cast<double>(c));
  }
  const double n = static_cast<double>(counts.size());
  double mean = 0.0;
  for (double c : counts) mean += c;
  mean /= n;
  double var = 0.0;
  for (double c : counts) var += (c - mean) * (c - mean);
  var /= n - 1.0;

  PoissonCountReport r;
  r.expected = std::exp(-a) - (std::isinf(b) ? 0.0 : std::exp(-b));
  r.mean = mean;
  r.variance = var;
  const double mu = r.expected;
  r.z_mean = (mean - mu) / std::sqrt(mu / n);
  // Var(s^2) for Poisson(mu) is mu/n + 2 mu^2/(n-1) ~ (mu + 2 mu^2)/n.
  r.z_variance = (var - mu) / std::sqrt((mu + 2.0 * mu * mu) / n);
  r.mean_test = finish("poisson:mean", std::abs(r.z_mean), counts.size(), kZ1, kZ5);
  r.variance_test = finish("poisson:variance", std::abs(r.z_variance), counts.size(), kZ1, kZ5);
  return r;
}

HillEstimate hill_tail_index(std::span<const double> values, double top_fraction) {
  if (!(top_fraction > 0.0 && top_fraction <= 0.5)) {
    throw std::invalid_argument("hill_tail_index: top_fraction must lie in (0, 0.5]");
  }
  std::vector<double> x(values.begin(), values.end());
  for (double v : x) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("hill_tail_index: values must be positive and finite");
    }
  }
  std::sort(x.begin(), x.end(), std::greater<>());
  const auto k = static_cast<std::size_t>(top_fraction * static_cast<double>(x.size()));
  if (k < kMinSample || k >= x.size()) {
    throw std::invalid_argument("hill_tail_index: fewer than 20 exceedances");
  }
  HillEstimate h;
  h.exceedances = k;
  h.alpha = 1.0 / hill_gamma(x, k);
  const double half = 1.96 * h.alpha / std::sqrt(static_cast<double>(k));
  h.lower = h.alpha - half;
  h.upper = h.alpha + half;
  const std::size_t k2 = k / 2;
  if (k2 >= 1) {
    h.alpha_half = 1.0 / hill_gamma(x, k2);
    // Nested estimators share data; the half-sample error dominates.
    const double se = h.alpha_half / std::sqrt(static_cast<double>(k2));
    h.drift = std::abs(h.alpha_half - h.alpha) > 3.0 * se;
  }
  return h;
}

}  // namespace gremfield
