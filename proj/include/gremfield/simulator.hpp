#pragma once

// Exact finite-N enumeration of the GREM with uniform field.
//
// Configurations are packed into a std::uint64_t with spin 1 in the most
// significant of the N used bits; bit value 1 encodes sigma_i = -1.

#include <cstdint>
#include <optional>
#include <vector>

#include "gremfield/model.hpp"
#include "gremfield/point_sample.hpp"

namespace gremfield {

constexpr int kDefaultSpinCap = 28;

struct SimulationSpec {
  int size = 0;  // N
  OrderParameter op = OrderParameter::rem();
  double h = 0.0;
  std::vector<double> betas;
  std::uint64_t seed = 0;
  int replicas = 1;
  bool zero_disorder = false;
  int spin_cap = kDefaultSpinCap;
};

/// Throws std::invalid_argument for an inconsistent spec and
/// std::length_error when N exceeds the spin cap.
void validate(const SimulationSpec& spec);

/// Spins per hierarchy level, x_k N - x_{k-1} N.
std::vector<int> level_spins(const SimulationSpec& spec);

struct ObservableRecord {
  int replica = 0;
  std::vector<double> betas;
  std::vector<double> log_z;   // per beta
  std::vector<double> p_n;     // log_z / N
  double ground_state = 0.0;   // M_N = N^{-1/2} max_sigma X_N(h, sigma)
  double argmax_magnetization = 0.0;
  std::uint64_t argmax_configuration = 0;
  // restricted_log_z[k][b]: configurations at Hamming distance k from the
  // class reference (all plus: N - 2k = sum sigma_i).
  std::vector<std::vector<double>> restricted_log_z;
};

struct EnumerationOptions {
  int top_k = 0;
  // Class reference configuration (packed); 0 is all plus.
  std::uint64_t class_reference = 0;
  // Drop the field term from the energies.
  bool without_field = false;
};

struct EnumerationResult {
  ObservableRecord record;
  // The top_k largest values of sqrt(N) X_N(h, sigma), descending.
  std::vector<double> top_energies;
};

/// Parallel depth-first enumeration of all 2^N configurations. The result is
/// bit-identical for any number of OpenMP threads.
EnumerationResult enumerate_configurations(const SimulationSpec& spec, int replica,
                                           const EnumerationOptions& options = {});

ObservableRecord exact_observables(const SimulationSpec& spec, int replica);

/// Runs every replica of the spec in order.
std::vector<EnumerationResult> simulate(const SimulationSpec& spec,
                                        const EnumerationOptions& options = {});

/// sum_k a_k X(sigma^(1), ..., sigma^(k)) for one configuration, without field.
double disorder_energy(const SimulationSpec& spec, int replica, std::uint64_t configuration);

/// log Z restricted to |m_N(sigma) - q| <= eps, per beta; empty optional when
/// no magnetisation class falls inside the window.
std::optional<std::vector<double>> restricted_partition(const ObservableRecord& record, int size,
                                                        double q, double eps);

enum class EnergyScaling { kRem, kGrem };

/// Rescales the largest energies by u^{-1}_{N,h} (kRem, requires n = 1) or
/// u^{-1}_{N,rho,h} (kGrem). `top_energies` holds sqrt(N) X_N values.
PointSample rescaled_energy_points(const SimulationSpec& spec,
                                   const std::vector<double>& top_energies,
                                   EnergyScaling scaling);

// Gauge transformations and overlaps on explicit +-1 configurations.
using Configuration = std::vector<int>;

Configuration gauge_transform(const Configuration& sigma, const Configuration& rho);
double overlap(const Configuration& sigma, const Configuration& tau);
double lexicographic_overlap(const Configuration& sigma, const Configuration& tau);
std::uint64_t pack(const Configuration& sigma);
Configuration unpack(std::uint64_t bits, int size);

struct GaugeReport {
  int replicas = 0;
  double z_mean = 0.0;
  double z_variance = 0.0;
  double mean_a = 0.0;
  double mean_b = 0.0;
  double variance_a = 0.0;
  double variance_b = 0.0;
  bool pass = false;  // both |z| <= 4
};

/// Compares the distribution over disorder of log Z^(p)(beta, q, eps) where the
/// restriction is by overlap with reference_a versus reference_b. The
/// Hamiltonian is the field-free GREM. Requires replicas >= 100.
GaugeReport gauge_invariance_check(const SimulationSpec& spec, double beta, double q, double eps,
                                   const Configuration& reference_a,
                                   const Configuration& reference_b, int replicas);

namespace reference {

/// Serial enumeration by configuration index with direct evaluation of every
/// level's Gaussian and a two-pass log-sum-exp. Kept for tests and benchmarks.
EnumerationResult enumerate_configurations_serial(const SimulationSpec& spec, int replica,
                                                  const EnumerationOptions& options = {});

}  // namespace reference

}  // namespace gremfield
