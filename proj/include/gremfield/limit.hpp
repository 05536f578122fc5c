#pragma once

// Closed-form thermodynamic limits and the Legendre machinery relating
// restricted and global free energies.

#include <vector>

#include "gremfield/model.hpp"

namespace gremfield {

/// Limiting free energy p(beta, h) of the GREM with uniform field.
double grem_free_energy(const OrderParameter& op, double h, double beta);
double grem_free_energy(const CoarseGraining& cg, const OrderParameter& op, double beta);

/// Limiting ground state: sum_l sqrt(q_bar_l x_bar_l) M(theta_bar_l^{-1/2} h).
double grem_ground_state(const OrderParameter& op, double h);

/// Freezing inverse temperature of the REM, beta_0 = rho(t_*(h)).
double rem_freezing_beta(double h);

/// Two-branch REM free energy with field.
double rem_free_energy_closed(double beta, double h);

/// REM free energy at zero field, the function p(.) of the variational formula.
double rem_free_energy_zero_field(double beta);

/// Restricted REM free energy at fixed magnetisation t (no field):
/// s p(beta / sqrt s) with s = 1 - I(t) / log 2.
double rem_restricted_free_energy(double beta, double t);

/// max_t { t beta h + s p(beta / sqrt s) } by grid search and golden-section refinement.
double rem_free_energy_variational(double beta, double h, int grid_size = 4096);

struct FreeEnergyCurve {
  double h = 0.0;
  std::vector<double> beta_grid;
  std::vector<double> values;
  std::vector<int> threshold_levels;
};

/// Evaluates grem_free_energy on an increasing beta grid (OpenMP over points).
FreeEnergyCurve free_energy_curve(const OrderParameter& op, double h,
                                  const std::vector<double>& beta_grid);

/// Samples of a real function on an increasing grid, interpolated with
/// Catmull-Rom cubics between nodes.
class TabulatedFunction {
 public:
  TabulatedFunction(std::vector<double> grid, std::vector<double> values);

  template <class F>
  static TabulatedFunction sample(F&& f, double lo, double hi, int points) {
    std::vector<double> grid(points);
    std::vector<double> values(points);
    for (int i = 0; i < points; ++i) {
      grid[i] = points == 1 ? lo : lo + (hi - lo) * i / (points - 1);
      values[i] = f(grid[i]);
    }
    return TabulatedFunction(std::move(grid), std::move(values));
  }

  const std::vector<double>& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return grid_.size(); }
  double operator()(double x) const;

 private:
  std::vector<double> grid_;
  std::vector<double> values_;
};

struct LegendreValue {
  double value = 0.0;
  double argument = 0.0;    // optimising lambda (or q)
  bool at_boundary = false; // optimum sits on the first or last grid node
};

/// inf_lambda ( -lambda q + p(lambda) ) over the tabulated range.
LegendreValue legendre_restrict(const TabulatedFunction& p_of_lambda, double q);

/// sup_q ( restricted(q) + coupling q ); throws std::invalid_argument if empty.
LegendreValue global_from_restricted(const TabulatedFunction& restricted, double coupling = 1.0);

/// Log of the deterministic normalisation of Z_N(beta, h) whose ratio has a
/// cascade-integral limit: beta sqrt(N) sum_{l <= L} sqrt(q_bar_l) B_{x_bar_l N}
/// + N [(1 - x_{J_L})(log 2 + log cosh beta h) + beta^2 (1 - q_{J_L}) / 2].
double log_partition_normalisation(const CoarseGraining& cg, const OrderParameter& op,
                                   double beta, int size);

}  // namespace gremfield
