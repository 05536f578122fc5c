#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "gremfield/simulator.hpp"
#include "logsumexp.hpp"

namespace gremfield::reference {

EnumerationResult enumerate_configurations_serial(const SimulationSpec& spec, int replica,
                                                  const EnumerationOptions& options) {
  validate(spec);
  const int n = spec.size;
  const std::uint64_t count = std::uint64_t{1} << n;
  const double root_n = std::sqrt(static_cast<double>(n));
  const double field = options.without_field ? 0.0 : spec.h;
  const std::size_t nb = spec.betas.size();

  std::vector<double> energy(count);
  std::vector<int> klass(count);
  for (std::uint64_t sigma = 0; sigma < count; ++sigma) {
    const int minus = std::popcount(sigma);
    energy[sigma] = root_n * disorder_energy(spec, replica, sigma) +
                    field * static_cast<double>(n - 2 * minus);
    klass[sigma] = std::popcount(sigma ^ options.class_reference);
  }

  // Two passes: class maxima, then shifted sums.
  std::vector<detail::LogSumExp> classes(static_cast<std::size_t>(n + 1) * nb);
  for (std::size_t b = 0; b < nb; ++b) {
    std::vector<double> peak(n + 1, -std::numeric_limits<double>::infinity());
    for (std::uint64_t s = 0; s < count; ++s) {
      peak[klass[s]] = std::max(peak[klass[s]], spec.betas[b] * energy[s]);
    }
    std::vector<double> sum(n + 1, 0.0);
    for (std::uint64_t s = 0; s < count; ++s) {
      sum[klass[s]] += std::exp(spec.betas[b] * energy[s] - peak[klass[s]]);
    }
    for (int k = 0; k <= n; ++k) {
      classes[static_cast<std::size_t>(k) * nb + b] = {peak[k], sum[k]};
    }
  }

  const auto best = std::max_element(energy.begin(), energy.end());
  const auto argmax = static_cast<std::uint64_t>(best - energy.begin());

  std::vector<std::uint64_t> order(count);
  std::iota(order.begin(), order.end(), std::uint64_t{0});
  const std::size_t keep = std::min<std::size_t>(static_cast<std::size_t>(options.top_k), count);
  std::partial_sort(order.begin(), order.begin() + keep, order.end(),
                    [&](std::uint64_t a, std::uint64_t b) {
                      return energy[a] > energy[b] || (energy[a] == energy[b] && a < b);
                    });
  std::vector<double> top;
  for (std::size_t i = 0; i < keep; ++i) top.push_back(energy[order[i]]);

  return detail::assemble(spec, replica, classes, *best, argmax, std::move(top));
}

}  // namespace gremfield::reference
