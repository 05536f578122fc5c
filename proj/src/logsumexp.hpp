#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "gremfield/simulator.hpp"

namespace gremfield::detail {

/// Streaming log-sum-exp with a running maximum.
struct LogSumExp {
  double max = -std::numeric_limits<double>::infinity();
  double sum = 0.0;

  void add(double v) {
    if (v <= max) {
      sum += std::exp(v - max);
    } else {
      sum = sum * std::exp(max - v) + 1.0;
      max = v;
    }
  }

  void merge(const LogSumExp& other) {
    if (other.sum == 0.0) return;
    if (sum == 0.0) {
      *this = other;
      return;
    }
    if (other.max <= max) {
      sum += other.sum * std::exp(other.max - max);
    } else {
      sum = sum * std::exp(max - other.max) + other.sum;
      max = other.max;
    }
  }

  double value() const {
    return sum == 0.0 ? -std::numeric_limits<double>::infinity() : max + std::log(sum);
  }
};

/// Builds the public result from per-class accumulators laid out [class * betas + b].
EnumerationResult assemble(const SimulationSpec& spec, int replica,
                           const std::vector<LogSumExp>& classes, double max_energy,
                           std::uint64_t argmax, std::vector<double> top);

}  // namespace gremfield::detail
