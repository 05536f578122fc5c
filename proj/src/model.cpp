#include "gremfield/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "gremfield/scalar.hpp"

namespace gremfield {

namespace {

void require_increasing(const std::vector<double>& v, const char* name) {
  double prev = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i]) || !(v[i] > prev)) {
      throw std::invalid_argument(std::string("order parameter: ") + name +
                                  " must be strictly increasing in (0, 1]");
    }
    prev = v[i];
  }
  if (v.back() != 1.0) {
    throw std::invalid_argument(std::string("order parameter: last ") + name + " must equal 1");
  }
}

}  // namespace

OrderParameter::OrderParameter(std::vector<double> x, std::vector<double> q)
    : x_(std::move(x)), q_(std::move(q)) {
  if (x_.empty() || q_.empty()) throw std::invalid_argument("order parameter: empty input");
  if (x_.size() != q_.size()) {
    throw std::invalid_argument("order parameter: x and q must have equal lengths");
  }
  require_increasing(x_, "x");
  require_increasing(q_, "q");
}

double OrderParameter::amplitude(int k) const {
  if (k < 1 || k > levels()) throw std::out_of_range("amplitude: level out of range");
  return std::sqrt(q_at(k) - q_at(k - 1));
}

double OrderParameter::covariance_at(double overlap) const {
  double value = 0.0;
  for (int k = 1; k <= levels(); ++k) {
    if (x_at(k) <= overlap) value = q_at(k);
  }
  return value;
}

OrderParameter validate_order_parameter(std::span<const double> x, std::span<const double> q) {
  return OrderParameter({x.begin(), x.end()}, {q.begin(), q.end()});
}

double slope(const OrderParameter& op, int j, int k) {
  if (j < 1 || k > op.levels() || j > k) {
    throw std::out_of_range("slope: need 1 <= j <= k <= n");
  }
  return (op.q_at(k) - op.q_at(j - 1)) / (op.x_at(k) - op.x_at(j - 1));
}

namespace {

double modify(double theta, double h) {
  const double r = rho(t_star(h / std::sqrt(theta)));
  return theta / (r * r);
}

}  // namespace

double modified_slope(const OrderParameter& op, int j, int k, double h) {
  return modify(slope(op, j, k), h);
}

double CoarseGraining::block_field(int l) const { return h / std::sqrt(theta_bar.at(l)); }

CoarseGraining coarse_grain(const OrderParameter& op, double h) {
  if (!(h >= 0.0)) throw std::domain_error("coarse_grain: field strength must be non-negative");
  const int n = op.levels();

  // table[j][k] = theta~_{j,k}(h), 1 <= j <= k <= n
  std::vector<std::vector<double>> table(n + 1, std::vector<double>(n + 1, 0.0));
  for (int j = 1; j <= n; ++j) {
    for (int k = j; k <= n; ++k) table[j][k] = modified_slope(op, j, k, h);
  }

  CoarseGraining cg;
  cg.h = h;
  cg.J.push_back(0);
  int start = 0;
  while (start < n) {
    int chosen = n;
    for (int cand = start + 1; cand <= n; ++cand) {
      const double lhs = table[start + 1][cand];
      bool strict = true;
      bool tied = false;
      for (int k = cand + 1; k <= n; ++k) {
        const double rhs = table[cand + 1][k];
        const double scale = std::max(std::abs(lhs), std::abs(rhs));
        if (std::abs(lhs - rhs) <= kSlopeTieTolerance * scale) {
          strict = false;
          tied = true;
        } else if (!(lhs > rhs)) {
          strict = false;
          tied = false;
          break;
        }
      }
      if (strict) {
        chosen = cand;
        break;
      }
      if (tied) cg.critical = true;
    }
    const double q_bar = op.q_at(chosen) - op.q_at(start);
    const double x_bar = op.x_at(chosen) - op.x_at(start);
    const double theta = q_bar / x_bar;
    cg.J.push_back(chosen);
    cg.q_bar.push_back(q_bar);
    cg.x_bar.push_back(x_bar);
    cg.theta_bar.push_back(theta);
    cg.gamma_bar.push_back(std::sqrt(table[start + 1][chosen]));
    cg.t_block.push_back(t_star(h / std::sqrt(theta)));
    start = chosen;
  }
  return cg;
}

int temperature_threshold(const CoarseGraining& cg, double beta) {
  if (!(beta > 0.0)) throw std::domain_error("temperature_threshold: beta must be positive");
  int level = 0;
  for (int l = 0; l < cg.blocks(); ++l) {
    if (beta * cg.gamma_bar[l] > 1.0) level = l + 1;
  }
  return level;
}

bool at_freezing_point(const CoarseGraining& cg, double beta) {
  const int l = temperature_threshold(cg, beta);
  return l < cg.blocks() && std::abs(beta * cg.gamma_bar[l] - 1.0) <= 1e-12;
}

GremScaling grem_scaling(const CoarseGraining& cg, int size) {
  if (size < 1) throw std::invalid_argument("grem_scaling: size must be >= 1");
  GremScaling s;
  s.size = size;
  s.slope = 1.0 / std::sqrt(static_cast<double>(size));
  double cumulative = 0.0;
  long previous = 0;
  for (int l = 0; l < cg.blocks(); ++l) {
    cumulative += cg.x_bar[l];
    const double exact = cumulative * size;
    const long boundary = std::lround(exact);
    if (std::abs(exact - static_cast<double>(boundary)) > 1e-9) s.rounded = true;
    const int spins = static_cast<int>(boundary - previous);
    if (spins < 1) {
      throw std::invalid_argument("grem_scaling: block " + std::to_string(l + 1) +
                                  " has no spins at N = " + std::to_string(size));
    }
    previous = boundary;
    s.block_sizes.push_back(spins);
    s.shift += std::sqrt(cg.q_bar[l]) * rem_scaling(spins, cg.block_field(l)).shift;
  }
  return s;
}

GremScaling grem_scaling(const OrderParameter& op, double h, int size) {
  return grem_scaling(coarse_grain(op, h), size);
}

}  // namespace gremfield
