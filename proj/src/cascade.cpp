#include "gremfield/cascade.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

#include "gremfield/rng.hpp"

namespace gremfield {

namespace {

// Descending arrivals -log Gamma_i of one node's PPP.
void fill_node(std::uint64_t seed, std::uint32_t level, std::uint32_t node, int top_count,
               double* out) {
  double gamma = 0.0;
  for (int i = 0; i < top_count; ++i) {
    gamma += cascade_exponential(seed, level, node, static_cast<std::uint32_t>(i));
    out[i] = -std::log(gamma);
  }
}

void check_gamma(std::span<const double> gamma_bar, int depth) {
  if (static_cast<int>(gamma_bar.size()) != depth) {
    throw std::invalid_argument("cascade: gamma_bar length must equal the cascade depth");
  }
  for (std::size_t l = 0; l < gamma_bar.size(); ++l) {
    if (!(gamma_bar[l] > 0.0) || (l > 0 && !(gamma_bar[l] < gamma_bar[l - 1]))) {
      throw std::invalid_argument("cascade: gamma_bar must be positive and strictly decreasing");
    }
  }
}

}  // namespace

PointSample sample_ppp_exp(std::uint64_t seed, int top_count) {
  if (top_count < 1) throw std::invalid_argument("sample_ppp_exp: K must be >= 1");
  PointSample s;
  s.points.resize(top_count);
  fill_node(seed, 0, 0, top_count, s.points.data());
  s.truncation = static_cast<std::size_t>(top_count);
  s.meta = "PPP(exp(-x)dx) top " + std::to_string(top_count);
  return s;
}

CascadeSample::CascadeSample(int depth, int top_count, std::vector<double> coordinates)
    : depth_(depth), per_level_(top_count), coordinates_(std::move(coordinates)) {}

int CascadeSample::index(std::size_t i, int level) const {
  std::size_t stride = 1;
  for (int l = level + 1; l < depth_; ++l) stride *= per_level_;
  return static_cast<int>((i / stride) % per_level_);
}

CascadeSample sample_cascade(std::uint64_t seed, int depth, int top_count, std::size_t cap) {
  if (depth < 1 || top_count < 1) {
    throw std::invalid_argument("sample_cascade: need m >= 1 and K >= 1");
  }
  std::size_t tuples = 1;
  for (int l = 0; l < depth; ++l) {
    if (tuples > cap / static_cast<std::size_t>(top_count)) {
      throw std::length_error("sample_cascade: K^m exceeds the configured cap");
    }
    tuples *= static_cast<std::size_t>(top_count);
  }

  std::vector<double> coords(tuples * depth);
  std::vector<double> node_points(top_count);
  // Level l has K^l nodes (prefixes of length l), each with its own PPP.
  std::size_t nodes = 1;
  std::size_t block = tuples;  // tuples below one level-l node
  for (int l = 0; l < depth; ++l) {
    block /= top_count;
    for (std::size_t node = 0; node < nodes; ++node) {
      fill_node(seed, static_cast<std::uint32_t>(l), static_cast<std::uint32_t>(node), top_count,
                node_points.data());
      for (int a = 0; a < top_count; ++a) {
        const std::size_t first = (node * top_count + a) * block;
        for (std::size_t t = first; t < first + block; ++t) coords[t * depth + l] = node_points[a];
      }
    }
    nodes *= top_count;
  }
  return CascadeSample(depth, top_count, std::move(coords));
}

PointSample cascade_energy(const CascadeSample& cs, std::span<const double> gamma_bar) {
  check_gamma(gamma_bar, cs.depth());
  PointSample s;
  s.points.reserve(cs.tuples());
  for (std::size_t i = 0; i < cs.tuples(); ++i) {
    const auto e = cs.tuple(i);
    double energy = 0.0;
    for (int l = 0; l < cs.depth(); ++l) energy += gamma_bar[l] * e[l];
    s.points.push_back(energy);
  }
  std::sort(s.points.begin(), s.points.end(), std::greater<>());
  s.truncation = cs.tuples();
  s.meta = "cascade energy m=" + std::to_string(cs.depth()) + " K=" +
           std::to_string(cs.per_level());
  return s;
}

double cascade_max_energy(const CascadeSample& cs, std::span<const double> gamma_bar) {
  check_gamma(gamma_bar, cs.depth());
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < cs.tuples(); ++i) {
    const auto e = cs.tuple(i);
    double energy = 0.0;
    for (int l = 0; l < cs.depth(); ++l) energy += gamma_bar[l] * e[l];
    best = std::max(best, energy);
  }
  return best;
}

CascadeIntegral cascade_partition_integral(const CascadeSample& cs,
                                           std::span<const double> gamma_bar, double beta) {
  check_gamma(gamma_bar, cs.depth());
  for (double g : gamma_bar) {
    if (!(beta * g > 1.0)) {
      throw std::domain_error("cascade_partition_integral: level not frozen (beta gamma_bar <= 1)");
    }
  }
  const std::size_t n = cs.tuples();
  std::vector<double> exponent(n);
  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const auto e = cs.tuple(i);
    double energy = 0.0;
    for (int l = 0; l < cs.depth(); ++l) energy += gamma_bar[l] * e[l];
    exponent[i] = beta * energy;
    peak = std::max(peak, exponent[i]);
  }
  double sum = 0.0;
  double deepest = 0.0;
  const int last_first = cs.per_level() - 1;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = std::exp(exponent[i] - peak);
    sum += w;
    if (cs.index(i, 0) == last_first) deepest += w;
  }
  CascadeIntegral out;
  out.log_value = peak + std::log(sum);
  out.value = std::exp(out.log_value);
  out.top_energy = peak / beta;
  out.tail_share = deepest / sum;
  out.tail_error = out.tail_share > 1e-3;
  return out;
}

}  // namespace gremfield
