#include "gremfield/limit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gremfield/scalar.hpp"
#include "optimize.hpp"

namespace gremfield {

double grem_free_energy(const CoarseGraining& cg, const OrderParameter& op, double beta) {
  const int frozen = temperature_threshold(cg, beta);
  const double h = cg.h;
  double frozen_part = 0.0;
  for (int l = 0; l < frozen; ++l) {
    const double t = cg.t_block[l];
    frozen_part += std::sqrt(cg.x_bar[l] * cg.q_bar[l]) * rho(t) + h * cg.x_bar[l] * t;
  }
  const double x_j = op.x_at(cg.J[frozen]);
  const double q_j = op.q_at(cg.J[frozen]);
  return beta * frozen_part + (1.0 - x_j) * (kLog2 + log_cosh(beta * h)) +
         0.5 * beta * beta * (1.0 - q_j);
}

double grem_free_energy(const OrderParameter& op, double h, double beta) {
  return grem_free_energy(coarse_grain(op, h), op, beta);
}

double grem_ground_state(const OrderParameter& op, double h) {
  const CoarseGraining cg = coarse_grain(op, h);
  double total = 0.0;
  for (int l = 0; l < cg.blocks(); ++l) {
    total += std::sqrt(cg.q_bar[l] * cg.x_bar[l]) * ground_state_constant(cg.block_field(l));
  }
  return total;
}

double rem_freezing_beta(double h) { return rho(t_star(h)); }

double rem_free_energy_closed(double beta, double h) {
  const double t = t_star(h);
  const double beta0 = rho(t);
  if (beta <= beta0) return kLog2 + log_cosh(beta * h) + 0.5 * beta * beta;
  return beta * (beta0 + h * t);
}

double rem_free_energy_zero_field(double beta) {
  const double critical = std::sqrt(2.0 * kLog2);
  if (beta <= critical) return 0.5 * beta * beta + kLog2;
  return beta * critical;
}

double rem_restricted_free_energy(double beta, double t) {
  const double s = 1.0 - cramer_entropy(t).value / kLog2;
  if (s <= 0.0) return 0.0;
  return s * rem_free_energy_zero_field(beta / std::sqrt(s));
}

double rem_free_energy_variational(double beta, double h, int grid_size) {
  if (grid_size < 3) throw std::invalid_argument("rem_free_energy_variational: grid_size < 3");
  auto objective = [beta, h](double t) { return t * beta * h + rem_restricted_free_energy(beta, t); };
  return detail::grid_golden_maximize(objective, -1.0, 1.0, grid_size).value;
}

FreeEnergyCurve free_energy_curve(const OrderParameter& op, double h,
                                  const std::vector<double>& beta_grid) {
  for (std::size_t i = 0; i < beta_grid.size(); ++i) {
    if (!(beta_grid[i] > 0.0) || (i > 0 && !(beta_grid[i] > beta_grid[i - 1]))) {
      throw std::invalid_argument("free_energy_curve: beta grid must be positive and increasing");
    }
  }
  const CoarseGraining cg = coarse_grain(op, h);
  FreeEnergyCurve curve;
  curve.h = h;
  curve.beta_grid = beta_grid;
  curve.values.resize(beta_grid.size());
  curve.threshold_levels.resize(beta_grid.size());
  const long count = static_cast<long>(beta_grid.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < count; ++i) {
    curve.values[i] = grem_free_energy(cg, op, beta_grid[i]);
    curve.threshold_levels[i] = temperature_threshold(cg, beta_grid[i]);
  }
  return curve;
}

TabulatedFunction::TabulatedFunction(std::vector<double> grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (grid_.size() != values_.size()) {
    throw std::invalid_argument("TabulatedFunction: grid and values differ in length");
  }
  for (std::size_t i = 1; i < grid_.size(); ++i) {
    if (!(grid_[i] > grid_[i - 1])) {
      throw std::invalid_argument("TabulatedFunction: grid must be strictly increasing");
    }
  }
}

double TabulatedFunction::operator()(double x) const {
  const std::size_t n = grid_.size();
  if (n == 0) throw std::out_of_range("TabulatedFunction: empty");
  if (n == 1 || x <= grid_.front()) return values_.front();
  if (x >= grid_.back()) return values_.back();

  const std::size_t i = static_cast<std::size_t>(
      std::upper_bound(grid_.begin(), grid_.end(), x) - grid_.begin() - 1);
  auto secant = [this](std::size_t a) {
    return (values_[a + 1] - values_[a]) / (grid_[a + 1] - grid_[a]);
  };
  auto tangent = [&](std::size_t k) {
    if (k == 0) return secant(0);
    if (k == n - 1) return secant(n - 2);
    return 0.5 * (secant(k - 1) + secant(k));
  };
  const double w = grid_[i + 1] - grid_[i];
  const double s = (x - grid_[i]) / w;
  const double s2 = s * s;
  const double s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * values_[i] + (s3 - 2 * s2 + s) * w * tangent(i) +
         (-2 * s3 + 3 * s2) * values_[i + 1] + (s3 - s2) * w * tangent(i + 1);
}

namespace {

template <class F>
LegendreValue refine_on_table(const TabulatedFunction& table, F&& objective) {
  const auto& grid = table.grid();
  const std::size_t n = grid.size();
  std::size_t best = 0;
  double best_value = objective(grid[0]);
  for (std::size_t i = 1; i < n; ++i) {
    const double v = objective(grid[i]);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  LegendreValue out{best_value, grid[best], best == 0 || best == n - 1};
  if (n >= 2) {
    const double lo = grid[best == 0 ? 0 : best - 1];
    const double hi = grid[best == n - 1 ? n - 1 : best + 1];
    const auto [x, v] = detail::golden_maximize(objective, lo, hi);
    if (v > out.value) {
      out.value = v;
      out.argument = x;
    }
  }
  return out;
}

}  // namespace

LegendreValue legendre_restrict(const TabulatedFunction& p_of_lambda, double q) {
  if (p_of_lambda.size() == 0) throw std::invalid_argument("legendre_restrict: empty tabulation");
  LegendreValue r = refine_on_table(
      p_of_lambda, [&](double lambda) { return lambda * q - p_of_lambda(lambda); });
  r.value = -r.value;
  return r;
}

LegendreValue global_from_restricted(const TabulatedFunction& restricted, double coupling) {
  if (restricted.size() == 0) {
    throw std::invalid_argument("global_from_restricted: empty tabulation");
  }
  return refine_on_table(restricted,
                         [&](double q) { return restricted(q) + coupling * q; });
}

double log_partition_normalisation(const CoarseGraining& cg, const OrderParameter& op,
                                   double beta, int size) {
  const int frozen = temperature_threshold(cg, beta);
  const GremScaling scaling = grem_scaling(cg, size);
  const double root_n = std::sqrt(static_cast<double>(size));
  double centring = 0.0;
  for (int l = 0; l < frozen; ++l) {
    centring += std::sqrt(cg.q_bar[l]) *
                rem_scaling(scaling.block_sizes[l], cg.block_field(l)).shift;
  }
  const double x_j = op.x_at(cg.J[frozen]);
  const double q_j = op.q_at(cg.J[frozen]);
  return beta * root_n * centring +
         size * ((1.0 - x_j) * (kLog2 + log_cosh(beta * cg.h)) + 0.5 * beta * beta * (1.0 - q_j));
}

}  // namespace gremfield
