#pragma once

// Samplers for the limiting point processes: PPP(e^{-x} dx), the m-level
// cascade P_m truncated to the top K points per node, the cascade energy
// functional and the cascade partition integral.

#include <cstdint>
#include <span>
#include <vector>

#include "gremfield/point_sample.hpp"

namespace gremfield {

constexpr std::size_t kDefaultCascadeCap = std::size_t{1} << 24;

/// Top K points of PPP(e^{-x} dx): x_i = -log Gamma_i.
PointSample sample_ppp_exp(std::uint64_t seed, int top_count);

/// Tuples indexed by alpha in [0, K)^m, tuple-major with alpha_1 most
/// significant. For a fixed prefix alpha_1..alpha_{l-1} the level-l
/// coordinates are the descending points of an independent PPP.
class CascadeSample {
 public:
  CascadeSample(int depth, int top_count, std::vector<double> coordinates);

  int depth() const { return depth_; }
  int per_level() const { return per_level_; }
  std::size_t tuples() const { return coordinates_.size() / depth_; }
  std::span<const double> tuple(std::size_t i) const {
    return {coordinates_.data() + i * depth_, static_cast<std::size_t>(depth_)};
  }
  /// alpha_{l} (0-based level) of tuple i.
  int index(std::size_t i, int level) const;

 private:
  int depth_;
  int per_level_;
  std::vector<double> coordinates_;
};

/// Throws std::length_error when K^m exceeds `cap`.
CascadeSample sample_cascade(std::uint64_t seed, int depth, int top_count,
                             std::size_t cap = kDefaultCascadeCap);

/// {sum_l gamma_bar_l e_l} over all tuples, descending. gamma_bar must be
/// positive and strictly decreasing with length m.
PointSample cascade_energy(const CascadeSample& cs, std::span<const double> gamma_bar);

/// Largest cascade energy, max over tuples of sum_l gamma_bar_l e_l.
double cascade_max_energy(const CascadeSample& cs, std::span<const double> gamma_bar);

struct CascadeIntegral {
  double log_value = 0.0;
  double value = 0.0;
  double top_energy = 0.0;
  // Share of the total carried by the deepest retained level-1 point.
  double tail_share = 0.0;
  bool tail_error = false;  // tail_share > 1e-3
};

/// Truncated sum of exp(beta E^{(m)}) over the sample. Requires
/// beta gamma_bar_l > 1 for every level (std::domain_error otherwise).
CascadeIntegral cascade_partition_integral(const CascadeSample& cs,
                                           std::span<const double> gamma_bar, double beta);

}  // namespace gremfield
