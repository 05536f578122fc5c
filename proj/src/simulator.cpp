#include "gremfield/simulator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "gremfield/rng.hpp"
#include "gremfield/scalar.hpp"
#include "logsumexp.hpp"

namespace gremfield {

void validate(const SimulationSpec& spec) {
  if (spec.spin_cap < 1 || spec.spin_cap > 62) {
    throw std::invalid_argument("simulation: spin cap must lie in [1, 62]");
  }
  if (spec.size < 1) throw std::invalid_argument("simulation: N must be >= 1");
  if (spec.size > spec.spin_cap) {
    throw std::length_error("simulation: N = " + std::to_string(spec.size) +
                            " exceeds the spin cap " + std::to_string(spec.spin_cap));
  }
  if (spec.replicas < 1) throw std::invalid_argument("simulation: replicas must be >= 1");
  if (spec.betas.empty()) throw std::invalid_argument("simulation: no inverse temperatures");
  for (double b : spec.betas) {
    if (!(b >= 0.0) || !std::isfinite(b)) {
      throw std::invalid_argument("simulation: inverse temperatures must be finite and >= 0");
    }
  }
  if (!(spec.h >= 0.0) || !std::isfinite(spec.h)) {
    throw std::invalid_argument("simulation: field strength must be finite and >= 0");
  }
  for (double x : spec.op.x()) {
    const double spins = x * spec.size;
    if (std::abs(spins - std::round(spins)) > 1e-9) {
      throw std::invalid_argument("simulation: x_k N must be integral for every level");
    }
  }
  for (int s : level_spins(spec)) {
    if (s < 1) throw std::invalid_argument("simulation: every level needs at least one spin");
  }
}

std::vector<int> level_spins(const SimulationSpec& spec) {
  std::vector<int> spins;
  long previous = 0;
  for (double x : spec.op.x()) {
    const long boundary = std::lround(x * spec.size);
    spins.push_back(static_cast<int>(boundary - previous));
    previous = boundary;
  }
  return spins;
}

namespace {

struct Ranked {
  double energy;
  std::uint64_t configuration;
};

// Higher energy first; ties by lower configuration index.
inline bool ranks_before(const Ranked& a, const Ranked& b) {
  return a.energy > b.energy || (a.energy == b.energy && a.configuration < b.configuration);
}

struct Partial {
  std::vector<detail::LogSumExp> classes;  // [class * betas + b]
  double max_energy = -std::numeric_limits<double>::infinity();
  std::uint64_t argmax = 0;
  std::vector<Ranked> heap;  // min-heap on ranks_before
};

class Enumerator {
 public:
  Enumerator(const SimulationSpec& spec, int replica, const EnumerationOptions& options)
      : spec_(spec),
        options_(options),
        seed_(replica_seed(spec.seed, static_cast<std::uint64_t>(replica))),
        size_(spec.size),
        spins_(level_spins(spec)),
        root_n_(std::sqrt(static_cast<double>(spec.size))),
        field_(options.without_field ? 0.0 : spec.h),
        betas_(spec.betas) {
    int offset = 0;
    for (std::size_t k = 0; k < spins_.size(); ++k) {
      amplitude_.push_back(spec.op.amplitude(static_cast<int>(k) + 1));
      offset += spins_[k];
      const int shift = size_ - offset;
      const std::uint64_t mask = (std::uint64_t{1} << spins_[k]) - 1;
      reference_level_.push_back((options.class_reference >> shift) & mask);
    }
  }

  // Depends on N only, so the reduction order is independent of the thread count.
  int chunk_bits() const { return std::clamp(size_ - 8, 0, 10); }

  Partial make_partial() const {
    Partial p;
    p.classes.resize(static_cast<std::size_t>(size_ + 1) * betas_.size());
    return p;
  }

  void run_chunk(std::uint64_t chunk, Partial& out) const {
    int fixed = chunk_bits();
    std::uint64_t remaining = chunk;
    std::uint64_t path = 0;
    double energy = 0.0;
    int minus = 0;
    int mismatch = 0;
    int level = 0;
    const int levels = static_cast<int>(spins_.size());
    while (level < levels && fixed >= spins_[level]) {
      const int s = spins_[level];
      const int rest = fixed - s;
      const std::uint64_t local = remaining >> rest;
      remaining &= (std::uint64_t{1} << rest) - 1;
      fixed = rest;
      path = (path << s) | local;
      energy += amplitude_[level] * gaussian(level, path);
      minus += std::popcount(local);
      mismatch += std::popcount(local ^ reference_level_[level]);
      ++level;
    }
    if (level == levels) {
      leaf(path, energy, minus, mismatch, out);
      return;
    }
    descend(level, remaining, fixed, path, energy, minus, mismatch, out);
  }

 private:
  double gaussian(int level, std::uint64_t path) const {
    if (spec_.zero_disorder) return 0.0;
    return disorder_gaussian(seed_, {level + 1, path});
  }

  void descend(int level, std::uint64_t fixed_value, int fixed_count, std::uint64_t path,
               double energy, int minus, int mismatch, Partial& out) const {
    const int s = spins_[level];
    const int free = s - fixed_count;
    const std::uint64_t count = std::uint64_t{1} << free;
    const std::uint64_t base = fixed_value << free;
    const bool last = level + 1 == static_cast<int>(spins_.size());
    const double a = amplitude_[level];
    const std::uint64_t ref = reference_level_[level];

    if (last && free >= 1) {
      for (std::uint64_t pair = 0; pair < count; pair += 2) {
        const std::uint64_t local = base | pair;
        const std::uint64_t p0 = (path << s) | local;
        GaussianPair g{0.0, 0.0};
        if (!spec_.zero_disorder) g = disorder_gaussian_pair(seed_, level + 1, p0 >> 1);
        leaf(p0, energy + a * g.even, minus + std::popcount(local),
             mismatch + std::popcount(local ^ ref), out);
        leaf(p0 | 1u, energy + a * g.odd, minus + std::popcount(local | 1u),
             mismatch + std::popcount((local | 1u) ^ ref), out);
      }
      return;
    }
    for (std::uint64_t i = 0; i < count; ++i) {
      const std::uint64_t local = base | i;
      const std::uint64_t p = (path << s) | local;
      const double e = energy + a * gaussian(level, p);
      const int mi = minus + std::popcount(local);
      const int mm = mismatch + std::popcount(local ^ ref);
      if (last) {
        leaf(p, e, mi, mm, out);
      } else {
        descend(level + 1, 0, 0, p, e, mi, mm, out);
      }
    }
  }

  void leaf(std::uint64_t configuration, double disorder, int minus, int mismatch,
            Partial& out) const {
    const double energy = root_n_ * disorder + field_ * static_cast<double>(size_ - 2 * minus);
    const std::size_t nb = betas_.size();
    detail::LogSumExp* acc = &out.classes[static_cast<std::size_t>(mismatch) * nb];
    for (std::size_t b = 0; b < nb; ++b) acc[b].add(betas_[b] * energy);
    if (energy > out.max_energy) {
      out.max_energy = energy;
      out.argmax = configuration;
    }
    if (options_.top_k > 0) {
      const Ranked r{energy, configuration};
      if (out.heap.size() < static_cast<std::size_t>(options_.top_k)) {
        out.heap.push_back(r);
        std::push_heap(out.heap.begin(), out.heap.end(), ranks_before);
      } else if (ranks_before(r, out.heap.front())) {
        std::pop_heap(out.heap.begin(), out.heap.end(), ranks_before);
        out.heap.back() = r;
        std::push_heap(out.heap.begin(), out.heap.end(), ranks_before);
      }
    }
  }

  const SimulationSpec& spec_;
  const EnumerationOptions& options_;
  std::uint64_t seed_;
  int size_;
  std::vector<int> spins_;
  std::vector<double> amplitude_;
  std::vector<std::uint64_t> reference_level_;
  double root_n_;
  double field_;
  std::vector<double> betas_;
};

}  // namespace

namespace detail {

EnumerationResult assemble(const SimulationSpec& spec, int replica,
                           const std::vector<detail::LogSumExp>& classes, double max_energy,
                           std::uint64_t argmax, std::vector<double> top) {
  const std::size_t nb = spec.betas.size();
  EnumerationResult result;
  ObservableRecord& rec = result.record;
  rec.replica = replica;
  rec.betas = spec.betas;
  rec.log_z.resize(nb);
  rec.p_n.resize(nb);
  rec.restricted_log_z.assign(spec.size + 1, std::vector<double>(nb));
  for (std::size_t b = 0; b < nb; ++b) {
    detail::LogSumExp total;
    for (int k = 0; k <= spec.size; ++k) {
      const detail::LogSumExp& c = classes[static_cast<std::size_t>(k) * nb + b];
      rec.restricted_log_z[k][b] = c.value();
      total.merge(c);
    }
    rec.log_z[b] = total.value();
    rec.p_n[b] = rec.log_z[b] / spec.size;
  }
  rec.ground_state = max_energy / spec.size;
  rec.argmax_configuration = argmax;
  rec.argmax_magnetization =
      static_cast<double>(spec.size - 2 * std::popcount(argmax)) / spec.size;
  result.top_energies = std::move(top);
  return result;
}

}  // namespace detail

EnumerationResult enumerate_configurations(const SimulationSpec& spec, int replica,
                                           const EnumerationOptions& options) {
  validate(spec);
  const Enumerator walker(spec, replica, options);
  const long chunks = 1L << walker.chunk_bits();
  std::vector<Partial> partials(static_cast<std::size_t>(chunks));

#pragma omp parallel for schedule(dynamic, 1)
  for (long c = 0; c < chunks; ++c) {
    Partial p = walker.make_partial();
    walker.run_chunk(static_cast<std::uint64_t>(c), p);
    partials[c] = std::move(p);
  }

  // Fixed-order reduction.
  Partial total = walker.make_partial();
  std::vector<Ranked> ranked;
  for (const Partial& p : partials) {
    for (std::size_t i = 0; i < total.classes.size(); ++i) total.classes[i].merge(p.classes[i]);
    if (p.max_energy > total.max_energy) {
      total.max_energy = p.max_energy;
      total.argmax = p.argmax;
    }
    ranked.insert(ranked.end(), p.heap.begin(), p.heap.end());
  }
  std::sort(ranked.begin(), ranked.end(), ranks_before);
  if (ranked.size() > static_cast<std::size_t>(options.top_k)) ranked.resize(options.top_k);
  std::vector<double> top;
  top.reserve(ranked.size());
  for (const Ranked& r : ranked) top.push_back(r.energy);

  return detail::assemble(spec, replica, total.classes, total.max_energy, total.argmax,
                          std::move(top));
}

ObservableRecord exact_observables(const SimulationSpec& spec, int replica) {
  return enumerate_configurations(spec, replica).record;
}

std::vector<EnumerationResult> simulate(const SimulationSpec& spec,
                                        const EnumerationOptions& options) {
  std::vector<EnumerationResult> out;
  out.reserve(spec.replicas);
  for (int r = 0; r < spec.replicas; ++r) out.push_back(enumerate_configurations(spec, r, options));
  return out;
}

double disorder_energy(const SimulationSpec& spec, int replica, std::uint64_t configuration) {
  if (spec.zero_disorder) return 0.0;
  const std::uint64_t seed = replica_seed(spec.seed, static_cast<std::uint64_t>(replica));
  const std::vector<int> spins = level_spins(spec);
  double energy = 0.0;
  int offset = 0;
  for (std::size_t k = 0; k < spins.size(); ++k) {
    offset += spins[k];
    const std::uint64_t prefix = configuration >> (spec.size - offset);
    energy += spec.op.amplitude(static_cast<int>(k) + 1) *
              disorder_gaussian(seed, {static_cast<int>(k) + 1, prefix});
  }
  return energy;
}

std::optional<std::vector<double>> restricted_partition(const ObservableRecord& record, int size,
                                                        double q, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("restricted_partition: eps must be positive");
  if (static_cast<int>(record.restricted_log_z.size()) != size + 1) {
    throw std::invalid_argument("restricted_partition: record does not match N");
  }
  const std::size_t nb = record.betas.size();
  std::vector<detail::LogSumExp> acc(nb);
  bool any = false;
  for (int k = 0; k <= size; ++k) {
    const double t = static_cast<double>(size - 2 * k) / size;
    if (std::abs(t - q) > eps + 1e-12) continue;
    any = true;
    for (std::size_t b = 0; b < nb; ++b) acc[b].add(record.restricted_log_z[k][b]);
  }
  if (!any) return std::nullopt;
  std::vector<double> out(nb);
  for (std::size_t b = 0; b < nb; ++b) out[b] = acc[b].value();
  return out;
}

PointSample rescaled_energy_points(const SimulationSpec& spec,
                                   const std::vector<double>& top_energies,
                                   EnergyScaling scaling) {
  const double root_n = std::sqrt(static_cast<double>(spec.size));
  PointSample sample;
  sample.truncation = top_energies.size();
  sample.points.reserve(top_energies.size());
  if (scaling == EnergyScaling::kRem) {
    if (spec.op.levels() != 1) {
      throw std::invalid_argument("rescaled_energy_points: REM scaling needs a one-level model");
    }
    const RemScaling s = rem_scaling(spec.size, spec.h);
    for (double e : top_energies) sample.points.push_back(s.inverse(e / root_n));
    sample.meta = "rem-rescaled energies N=" + std::to_string(spec.size);
  } else {
    const GremScaling s = grem_scaling(spec.op, spec.h, spec.size);
    for (double e : top_energies) sample.points.push_back(s.inverse(e / root_n));
    sample.meta = "grem-rescaled energies N=" + std::to_string(spec.size);
  }
  return sample;
}

Configuration gauge_transform(const Configuration& sigma, const Configuration& rho) {
  if (sigma.size() != rho.size()) throw std::invalid_argument("gauge_transform: length mismatch");
  Configuration out(sigma.size());
  for (std::size_t i = 0; i < sigma.size(); ++i) out[i] = rho[i] * sigma[i];
  return out;
}

double overlap(const Configuration& sigma, const Configuration& tau) {
  if (sigma.size() != tau.size() || sigma.empty()) {
    throw std::invalid_argument("overlap: length mismatch");
  }
  long sum = 0;
  for (std::size_t i = 0; i < sigma.size(); ++i) sum += sigma[i] * tau[i];
  return static_cast<double>(sum) / static_cast<double>(sigma.size());
}

double lexicographic_overlap(const Configuration& sigma, const Configuration& tau) {
  if (sigma.size() != tau.size() || sigma.empty()) {
    throw std::invalid_argument("lexicographic_overlap: length mismatch");
  }
  std::size_t common = 0;
  while (common < sigma.size() && sigma[common] == tau[common]) ++common;
  return static_cast<double>(common) / static_cast<double>(sigma.size());
}

std::uint64_t pack(const Configuration& sigma) {
  if (sigma.size() > 64) throw std::invalid_argument("pack: more than 64 spins");
  std::uint64_t bits = 0;
  for (int s : sigma) {
    if (s != 1 && s != -1) throw std::invalid_argument("pack: spins must be +1 or -1");
    bits = (bits << 1) | (s == -1 ? 1u : 0u);
  }
  return bits;
}

Configuration unpack(std::uint64_t bits, int size) {
  Configuration sigma(size);
  for (int i = 0; i < size; ++i) sigma[i] = ((bits >> (size - 1 - i)) & 1u) ? -1 : 1;
  return sigma;
}

GaugeReport gauge_invariance_check(const SimulationSpec& spec, double beta, double q, double eps,
                                   const Configuration& reference_a,
                                   const Configuration& reference_b, int replicas) {
  if (replicas < 100) throw std::invalid_argument("gauge_invariance_check: need >= 100 replicas");
  if (static_cast<int>(reference_a.size()) != spec.size ||
      static_cast<int>(reference_b.size()) != spec.size) {
    throw std::invalid_argument("gauge_invariance_check: reference length differs from N");
  }
  SimulationSpec s = spec;
  s.betas = {beta};
  s.replicas = replicas;

  EnumerationOptions opt_a;
  opt_a.without_field = true;
  opt_a.class_reference = pack(reference_a);
  EnumerationOptions opt_b = opt_a;
  opt_b.class_reference = pack(reference_b);

  std::vector<double> ya(replicas);
  std::vector<double> yb(replicas);
  for (int r = 0; r < replicas; ++r) {
    const auto za = restricted_partition(enumerate_configurations(s, r, opt_a).record, s.size, q, eps);
    const auto zb = restricted_partition(enumerate_configurations(s, r, opt_b).record, s.size, q, eps);
    if (!za || !zb) throw std::invalid_argument("gauge_invariance_check: empty overlap window");
    ya[r] = (*za)[0];
    yb[r] = (*zb)[0];
  }

  auto mean = [](const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m += x;
    return m / static_cast<double>(v.size());
  };
  // Paired z statistic for E[d] = 0.
  auto paired_z = [&](const std::vector<double>& d) {
    const double m = mean(d);
    double ss = 0.0;
    for (double x : d) ss += (x - m) * (x - m);
    const double n = static_cast<double>(d.size());
    const double se = std::sqrt(ss / (n - 1.0) / n);
    if (se == 0.0) return m == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return m / se;
  };

  GaugeReport report;
  report.replicas = replicas;
  report.mean_a = mean(ya);
  report.mean_b = mean(yb);
  std::vector<double> diff(replicas);
  std::vector<double> diff_sq(replicas);
  for (int r = 0; r < replicas; ++r) {
    diff[r] = ya[r] - yb[r];
    const double da = ya[r] - report.mean_a;
    const double db = yb[r] - report.mean_b;
    diff_sq[r] = da * da - db * db;
    report.variance_a += da * da;
    report.variance_b += db * db;
  }
  report.variance_a /= replicas - 1;
  report.variance_b /= replicas - 1;
  report.z_mean = paired_z(diff);
  report.z_variance = paired_z(diff_sq);
  report.pass = std::abs(report.z_mean) <= 4.0 && std::abs(report.z_variance) <= 4.0;
  return report;
}

}  // namespace gremfield
