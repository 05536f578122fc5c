#pragma once

// Discrete order parameter, slopes, the field-dependent coarse-graining and
// the GREM centring function.

#include <span>
#include <vector>

namespace gremfield {

/// Piecewise-constant order parameter with n jumps:
/// 0 < x_1 < ... < x_n = 1 and 0 < q_1 < ... < q_n = 1.
class OrderParameter {
 public:
  /// Validating constructor; throws std::invalid_argument.
  OrderParameter(std::vector<double> x, std::vector<double> q);

  static OrderParameter rem() { return OrderParameter({1.0}, {1.0}); }

  int levels() const { return static_cast<int>(x_.size()); }
  const std::vector<double>& x() const { return x_; }
  const std::vector<double>& q() const { return q_; }

  /// x_k and q_k with the convention x_0 = q_0 = 0.
  double x_at(int k) const { return k == 0 ? 0.0 : x_[k - 1]; }
  double q_at(int k) const { return k == 0 ? 0.0 : q_[k - 1]; }

  /// a_k = sqrt(q_k - q_{k-1}), k in [1, n].
  double amplitude(int k) const;

  /// varrho(u): covariance at lexicographic overlap u.
  double covariance_at(double overlap) const;

 private:
  std::vector<double> x_;
  std::vector<double> q_;
};

OrderParameter validate_order_parameter(std::span<const double> x, std::span<const double> q);

/// theta_{j,k} = (q_k - q_{j-1}) / (x_k - x_{j-1}), 1 <= j <= k <= n.
double slope(const OrderParameter& op, int j, int k);

/// theta_{j,k} / rho(t_*(theta_{j,k}^{-1/2} h))^2.
double modified_slope(const OrderParameter& op, int j, int k, double h);

struct CoarseGraining {
  double h = 0.0;
  std::vector<int> J;  // J_0 = 0 < J_1 < ... < J_m = n
  std::vector<double> q_bar;
  std::vector<double> x_bar;
  std::vector<double> theta_bar;
  std::vector<double> gamma_bar;
  std::vector<double> t_block;
  bool critical = false;  // a tie occurred in the selection rule

  int blocks() const { return static_cast<int>(q_bar.size()); }
  /// Effective field seen by block l (0-based): theta_bar^{-1/2} h.
  double block_field(int l) const;
};

/// Relative tolerance under which two modified slopes count as tied.
constexpr double kSlopeTieTolerance = 1e-12;

CoarseGraining coarse_grain(const OrderParameter& op, double h);

/// l(beta, h) = max{l : beta gamma_bar_l > 1}, 0 if none.
int temperature_threshold(const CoarseGraining& cg, double beta);

/// True when beta gamma_bar_{l+1} == 1 for l = l(beta, h) (within 1e-12).
bool at_freezing_point(const CoarseGraining& cg, double beta);

/// u_{N,rho,h}(x) = shift + x / sqrt(N).
struct GremScaling {
  int size = 1;
  double shift = 0.0;
  double slope = 1.0;
  std::vector<int> block_sizes;  // effective spins per coarse-grained block
  bool rounded = false;          // some x_bar_l N was not integral

  double forward(double x) const { return shift + slope * x; }
  double inverse(double y) const { return (y - shift) / slope; }
};

GremScaling grem_scaling(const CoarseGraining& cg, int size);
GremScaling grem_scaling(const OrderParameter& op, double h, int size);

}  // namespace gremfield
