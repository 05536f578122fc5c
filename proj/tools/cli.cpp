#include "cli.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "gremfield/cascade.hpp"
#include "gremfield/limit.hpp"
#include "gremfield/model.hpp"
#include "gremfield/rng.hpp"
#include "gremfield/scalar.hpp"
#include "gremfield/simulator.hpp"
#include "gremfield/stats.hpp"

namespace gremfield::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::vector<std::string> kOrderKeys{"x", "q", "h"};

const std::map<std::string, std::vector<std::string>>& key_table() {
  static const std::map<std::string, std::vector<std::string>> table = [] {
    std::map<std::string, std::vector<std::string>> t;
    t["tstar"] = {"h_grid"};
    t["coarse-grain"] = kOrderKeys;
    t["free-energy"] = {"x", "q", "h", "betas", "beta_range", "variational_grid"};
    t["simulate"] = {"x",        "q",      "h",      "N",       "betas",
                     "seed",     "replicas", "zero_disorder", "top_k", "spin_cap"};
    t["fluctuations"] = {"x",        "q",        "h",        "N",         "betas",
                         "seed",     "replicas", "top_k",    "spin_cap",  "scaling_h",
                         "cascade_seeds", "cascade_K", "interval"};
    t["cascade"] = {"x",       "q",       "h",          "gamma_bar", "beta",
                    "K",       "samples", "seed",       "hill_fraction", "cap"};
    std::set<std::string> all;
    for (const auto& [name, keys] : t) all.insert(keys.begin(), keys.end());
    t["validate"] = {all.begin(), all.end()};
    return t;
  }();
  return table;
}

bool allows(const std::string& command, const std::string& key) {
  const auto& keys = allowed_keys(command);
  return std::find(keys.begin(), keys.end(), key) != keys.end();
}

template <class T>
T value_or(const json& cfg, const char* key, T fallback) {
  return cfg.contains(key) ? cfg.at(key).get<T>() : fallback;
}

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

OrderParameter order_parameter(const json& cfg) {
  const auto x = value_or<std::vector<double>>(cfg, "x", {1.0});
  const auto q = value_or<std::vector<double>>(cfg, "q", {1.0});
  return validate_order_parameter(x, q);
}

double field(const json& cfg) {
  const double h = value_or<double>(cfg, "h", 0.0);
  if (!(h >= 0.0) || !std::isfinite(h)) throw std::invalid_argument("h must be finite and >= 0");
  return h;
}

std::vector<double> beta_grid(const json& cfg) {
  if (cfg.contains("beta_range")) {
    const json& r = cfg.at("beta_range");
    const double lo = r.at("min").get<double>();
    const double hi = r.at("max").get<double>();
    const int points = r.at("points").get<int>();
    if (!(lo > 0.0) || !(hi > lo) || points < 2) {
      throw std::invalid_argument("beta_range needs 0 < min < max and points >= 2");
    }
    std::vector<double> grid(points);
    for (int i = 0; i < points; ++i) grid[i] = lo + (hi - lo) * i / (points - 1);
    return grid;
  }
  const auto betas = value_or<std::vector<double>>(cfg, "betas", {1.0});
  if (betas.empty()) throw std::invalid_argument("betas must not be empty");
  for (std::size_t i = 0; i < betas.size(); ++i) {
    if (!(betas[i] >= 0.0) || (i > 0 && !(betas[i] > betas[i - 1]))) {
      throw std::invalid_argument("betas must be non-negative and increasing");
    }
  }
  return betas;
}

SimulationSpec simulation_spec(const json& cfg) {
  SimulationSpec s;
  if (!cfg.contains("N")) throw std::invalid_argument("config is missing N");
  s.size = cfg.at("N").get<int>();
  s.op = order_parameter(cfg);
  s.h = field(cfg);
  s.betas = beta_grid(cfg);
  s.seed = value_or<std::uint64_t>(cfg, "seed", 0);
  s.replicas = value_or<int>(cfg, "replicas", 1);
  s.zero_disorder = value_or<bool>(cfg, "zero_disorder", false);
  s.spin_cap = value_or<int>(cfg, "spin_cap", kDefaultSpinCap);
  validate(s);
  return s;
}

// Output sink: a file under --out, or the given stream when no directory.
class Sink {
 public:
  Sink(const Flags& flags, const std::string& name, std::ostream& fallback) {
    if (flags.out) {
      file_.open(*flags.out / name, std::ios::binary);
      if (!file_) throw std::runtime_error("cannot write " + (*flags.out / name).string());
      stream_ = &file_;
    } else {
      stream_ = &fallback;
    }
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

void write_points(const fs::path& path, const PointSample& sample) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << "rank,value\n";
  for (std::size_t i = 0; i < sample.points.size(); ++i) {
    f << i + 1 << ',' << num(sample.points[i]) << '\n';
  }
}

json gof_json(const GofReport& r) {
  return {{"test", r.test},           {"statistic", r.statistic}, {"sample_size", r.sample_size},
          {"critical_1", r.critical_1}, {"critical_5", r.critical_5}, {"pass_1", r.pass_1},
          {"pass_5", r.pass_5}};
}

json record_json(const ObservableRecord& r) {
  return {{"replica", r.replica},
          {"betas", r.betas},
          {"log_z", r.log_z},
          {"p_n", r.p_n},
          {"ground_state", r.ground_state},
          {"argmax_magnetization", r.argmax_magnetization},
          {"argmax_configuration", r.argmax_configuration},
          {"restricted_log_z", r.restricted_log_z}};
}

std::vector<double> cascade_gamma(const json& cfg) {
  if (cfg.contains("gamma_bar")) return cfg.at("gamma_bar").get<std::vector<double>>();
  return coarse_grain(order_parameter(cfg), field(cfg)).gamma_bar;
}

}  // namespace

const std::vector<std::string>& allowed_keys(const std::string& command) {
  const auto& table = key_table();
  const auto it = table.find(command);
  if (it == table.end()) throw std::invalid_argument("unknown command '" + command + "'");
  return it->second;
}

json resolve_config(const std::string& command, const Flags& flags) {
  json cfg = json::object();
  if (flags.config) {
    std::ifstream in(*flags.config);
    if (!in) throw std::invalid_argument("cannot read config " + flags.config->string());
    try {
      cfg = json::parse(in);
    } catch (const json::parse_error& e) {
      throw std::invalid_argument(std::string("malformed config: ") + e.what());
    }
    if (!cfg.is_object()) throw std::invalid_argument("config must be a JSON object");
  }
  for (const auto& [key, value] : cfg.items()) {
    if (!allows(command, key)) {
      throw std::invalid_argument("unknown config key '" + key + "' for " + command);
    }
  }
  if (flags.seed && allows(command, "seed")) cfg["seed"] = *flags.seed;
  if (flags.zero_disorder && allows(command, "zero_disorder")) cfg["zero_disorder"] = true;
  if (flags.top_k && allows(command, "top_k")) cfg["top_k"] = *flags.top_k;
  return cfg;
}

int cmd_tstar(const json& cfg, const Flags& flags, std::ostream& out) {
  std::vector<double> grid = value_or<std::vector<double>>(
      cfg, "h_grid", {0.0, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 5.0, 10.0});
  if (grid.empty()) throw std::invalid_argument("h_grid must not be empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= 0.0) || (i > 0 && !(grid[i] > grid[i - 1]))) {
      throw std::invalid_argument("h_grid must be non-negative and strictly increasing");
    }
  }
  Sink sink(flags, "tstar.csv", out);
  *sink << "h,t_star,M,rho_t_star\n";
  for (double h : grid) {
    const double t = t_star(h);
    *sink << num(h) << ',' << num(t) << ',' << num(ground_state_constant(h)) << ','
          << num(rho(t)) << '\n';
  }
  return kOk;
}

int cmd_coarse_grain(const json& cfg, const Flags& flags, std::ostream& out) {
  const CoarseGraining cg = coarse_grain(order_parameter(cfg), field(cfg));
  Sink sink(flags, "coarse_grain.csv", out);
  *sink << "block,J,q_bar,x_bar,theta_bar,gamma_bar,t_block,critical\n";
  for (int l = 0; l < cg.blocks(); ++l) {
    *sink << l + 1 << ',' << cg.J[l + 1] << ',' << num(cg.q_bar[l]) << ',' << num(cg.x_bar[l])
          << ',' << num(cg.theta_bar[l]) << ',' << num(cg.gamma_bar[l]) << ','
          << num(cg.t_block[l]) << ',' << (cg.critical ? 1 : 0) << '\n';
  }
  return kOk;
}

int cmd_free_energy(const json& cfg, const Flags& flags, std::ostream& out) {
  const OrderParameter op = order_parameter(cfg);
  const double h = field(cfg);
  std::vector<double> grid = beta_grid(cfg);
  if (grid.front() <= 0.0) throw std::invalid_argument("free-energy needs beta > 0");
  const int vgrid = value_or<int>(cfg, "variational_grid", 4096);
  const FreeEnergyCurve curve = free_energy_curve(op, h, grid);
  Sink sink(flags, "free_energy.csv", out);
  *sink << "beta,p,level,p_variational\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    *sink << num(grid[i]) << ',' << num(curve.values[i]) << ',' << curve.threshold_levels[i]
          << ',';
    if (op.levels() == 1) *sink << num(rem_free_energy_variational(grid[i], h, vgrid));
    *sink << '\n';
  }
  return kOk;
}

int cmd_simulate(const json& cfg, const Flags& flags, std::ostream& out) {
  const SimulationSpec spec = simulation_spec(cfg);
  EnumerationOptions opt;
  opt.top_k = value_or<int>(cfg, "top_k", 0);
  if (opt.top_k < 0) throw std::invalid_argument("top_k must be >= 0");
  if (flags.out && opt.top_k > 0) fs::create_directories(*flags.out / "points");
  const EnergyScaling scaling = spec.op.levels() == 1 ? EnergyScaling::kRem : EnergyScaling::kGrem;

  Sink sink(flags, "observables.jsonl", out);
  for (int r = 0; r < spec.replicas; ++r) {
    const EnumerationResult res = enumerate_configurations(spec, r, opt);
    *sink << record_json(res.record).dump() << '\n';
    if (flags.out && opt.top_k > 0) {
      char name[32];
      std::snprintf(name, sizeof name, "replica_%04d.csv", r);
      write_points(*flags.out / "points" / name,
                   rescaled_energy_points(spec, res.top_energies, scaling));
    }
  }
  return kOk;
}

int cmd_fluctuations(const json& cfg, const Flags& flags, std::ostream& out) {
  const SimulationSpec spec = simulation_spec(cfg);
  EnumerationOptions opt;
  opt.top_k = value_or<int>(cfg, "top_k", 64);
  if (opt.top_k < 1) throw std::invalid_argument("top_k must be >= 1");
  SimulationSpec scaled = spec;
  scaled.h = value_or<double>(cfg, "scaling_h", spec.h);
  const int cascade_seeds = value_or<int>(cfg, "cascade_seeds", 10000);
  const int cascade_k = value_or<int>(cfg, "cascade_K", 64);
  const auto interval = value_or<std::vector<double>>(cfg, "interval", {0.0, 1.0});
  if (interval.size() != 2) throw std::invalid_argument("interval must be [a, b]");
  const bool rem = spec.op.levels() == 1;

  std::vector<PointSample> samples;
  std::vector<double> maxima;
  for (int r = 0; r < spec.replicas; ++r) {
    const EnumerationResult res = enumerate_configurations(spec, r, opt);
    samples.push_back(rescaled_energy_points(
        scaled, res.top_energies, rem ? EnergyScaling::kRem : EnergyScaling::kGrem));
    maxima.push_back(samples.back().top());
  }

  const std::uint64_t cascade_seed = mix64(spec.seed ^ 0x63617363616465ULL);
  json report = json::object();
  json tests = json::array();
  bool pass = true;

  // Calibration: top points of the reference point process itself.
  std::vector<double> ppp_tops;
  for (int s = 0; s < cascade_seeds; ++s) {
    ppp_tops.push_back(sample_ppp_exp(replica_seed(cascade_seed, s), 1).top());
  }
  const GofReport calibration = ks_test(ppp_tops, Reference::kGumbel);
  tests.push_back(gof_json(calibration));
  pass = pass && calibration.pass_1;

  if (rem) {
    const GofReport ks = ks_test(maxima, Reference::kGumbel);
    tests.push_back(gof_json(ks));
    pass = pass && ks.pass_1;
    const PoissonCountReport pc = poisson_interval_counts(samples, interval[0], interval[1]);
    report["interval_counts"] = {{"a", interval[0]},       {"b", interval[1]},
                                 {"expected", pc.expected}, {"mean", pc.mean},
                                 {"variance", pc.variance}, {"z_mean", pc.z_mean},
                                 {"z_variance", pc.z_variance}, {"pass", std::abs(pc.z_mean) <= 4.0}};
    pass = pass && std::abs(pc.z_mean) <= 4.0;
  } else {
    const CoarseGraining cg = coarse_grain(spec.op, scaled.h);
    std::vector<double> reference;
    for (int s = 0; s < cascade_seeds; ++s) {
      const CascadeSample cs = sample_cascade(replica_seed(cascade_seed, s), cg.blocks(), cascade_k);
      reference.push_back(cascade_max_energy(cs, cg.gamma_bar));
    }
    const GofReport ks = ks_two_sample(maxima, reference);
    tests.push_back(gof_json(ks));
    pass = pass && ks.pass_1;
    report["gamma_bar"] = cg.gamma_bar;
  }
  report["tests"] = tests;
  report["pass"] = pass;

  PointSample sorted;
  sorted.points = maxima;
  std::sort(sorted.points.begin(), sorted.points.end(), std::greater<>());
  if (flags.out) write_points(*flags.out / "maxima.csv", sorted);
  Sink sink(flags, "fluctuations.json", out);
  *sink << report.dump(2) << '\n';
  return pass ? kOk : kAcceptance;
}

int cmd_cascade(const json& cfg, const Flags& flags, std::ostream& out) {
  const std::vector<double> gamma = cascade_gamma(cfg);
  if (!cfg.contains("beta")) throw std::invalid_argument("config is missing beta");
  const double beta = cfg.at("beta").get<double>();
  const int k = value_or<int>(cfg, "K", 64);
  const int samples = value_or<int>(cfg, "samples", 1000);
  const std::uint64_t seed = value_or<std::uint64_t>(cfg, "seed", 0);
  const double fraction = value_or<double>(cfg, "hill_fraction", 0.1);
  const auto cap = value_or<std::size_t>(cfg, "cap", kDefaultCascadeCap);
  if (samples < 1) throw std::invalid_argument("samples must be >= 1");
  for (double g : gamma) {
    if (!(beta * g > 1.0)) {
      throw std::domain_error("cascade: beta * gamma_bar must exceed 1 on every level");
    }
  }
  const int depth = static_cast<int>(gamma.size());

  std::vector<CascadeIntegral> integrals(samples);
  PointSample first;
  for (int s = 0; s < samples; ++s) {
    const CascadeSample cs = sample_cascade(replica_seed(seed, s), depth, k, cap);
    if (s == 0) first = cascade_energy(cs, gamma);
    integrals[s] = cascade_partition_integral(cs, gamma, beta);
  }

  if (flags.out) write_points(*flags.out / "cascade_points.csv", first);
  Sink table(flags, "integrals.csv", out);
  *table << "sample,log_value,top_energy,tail_share,tail_error\n";
  int tail_errors = 0;
  std::vector<double> values;
  for (int s = 0; s < samples; ++s) {
    const CascadeIntegral& v = integrals[s];
    *table << s << ',' << num(v.log_value) << ',' << num(v.top_energy) << ','
           << num(v.tail_share) << ',' << (v.tail_error ? 1 : 0) << '\n';
    tail_errors += v.tail_error;
    values.push_back(v.value);
  }

  json report = {{"beta", beta},       {"gamma_bar", gamma},         {"K", k},
                 {"samples", samples}, {"tail_errors", tail_errors},
                 {"predicted_alpha", 1.0 / (beta * gamma.front())}};
  if (static_cast<double>(samples) * fraction >= 20.0) {
    const HillEstimate hill = hill_tail_index(values, fraction);
    report["hill"] = {{"alpha", hill.alpha},         {"lower", hill.lower},
                      {"upper", hill.upper},         {"exceedances", hill.exceedances},
                      {"alpha_half", hill.alpha_half}, {"drift", hill.drift}};
  }
  if (flags.out) {
    std::ofstream f(*flags.out / "cascade_report.json", std::ios::binary);
    f << report.dump(2) << '\n';
  } else {
    out << report.dump(2) << '\n';
  }
  return kOk;
}

int cmd_validate(const json& cfg, const Flags&, std::ostream& out) {
  if (cfg.contains("x") || cfg.contains("q")) (void)order_parameter(cfg);
  (void)field(cfg);
  if (cfg.contains("betas") || cfg.contains("beta_range")) (void)beta_grid(cfg);
  if (cfg.contains("N")) (void)simulation_spec(cfg);
  if (cfg.contains("h_grid")) {
    const Flags none;
    std::ostringstream sink;
    (void)cmd_tstar(json{{"h_grid", cfg.at("h_grid")}}, none, sink);
  }
  if (cfg.contains("gamma_bar")) {
    const auto g = cfg.at("gamma_bar").get<std::vector<double>>();
    const CascadeSample probe(static_cast<int>(g.size()), 1, std::vector<double>(g.size(), 0.0));
    (void)cascade_energy(probe, g);
  }
  out << "valid\n";
  return kOk;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact enumeration and limit laws for the GREM with a uniform external field",
               "gremfield"};
  app.require_subcommand(1);
  Flags flags;
  std::string config;
  std::string outdir;
  std::uint64_t seed = 0;
  int threads = 0;
  int top_k = 0;

  const std::vector<std::pair<std::string, std::string>> commands{
      {"tstar", "Optimal magnetisation and ground-state constant over an h grid"},
      {"coarse-grain", "Field-dependent coarse-graining of an order parameter"},
      {"free-energy", "Limiting free energy curve"},
      {"simulate", "Exact enumeration over disorder replicas"},
      {"fluctuations", "Rescaled maxima against the limiting laws"},
      {"cascade", "Cascade point samples and partition integrals"},
      {"validate", "Check a config without running anything"}};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config, "JSON config file");
    sub->add_option("--seed", seed, "Run seed");
    sub->add_option("--threads", threads, "OpenMP threads")->check(CLI::PositiveNumber);
    sub->add_option("--out", outdir, "Output directory");
    sub->add_flag("--zero-disorder", flags.zero_disorder, "Force all Gaussians to zero");
    sub->add_option("--top-k", top_k, "Largest energies to keep")->check(CLI::NonNegativeNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string command = sub->get_name();
  if (sub->count("--config")) flags.config = config;
  if (sub->count("--seed")) flags.seed = seed;
  if (sub->count("--threads")) flags.threads = threads;
  if (sub->count("--out")) flags.out = outdir;
  if (sub->count("--top-k")) flags.top_k = top_k;

  try {
    const json cfg = resolve_config(command, flags);
    if (flags.threads) omp_set_num_threads(*flags.threads);
    if (flags.out) {
      fs::create_directories(*flags.out);
      std::ofstream copy(*flags.out / "config.json", std::ios::binary);
      copy << cfg.dump(2) << '\n';
    }
    if (command == "tstar") return cmd_tstar(cfg, flags, out);
    if (command == "coarse-grain") return cmd_coarse_grain(cfg, flags, out);
    if (command == "free-energy") return cmd_free_energy(cfg, flags, out);
    if (command == "simulate") return cmd_simulate(cfg, flags, out);
    if (command == "fluctuations") return cmd_fluctuations(cfg, flags, out);
    if (command == "cascade") return cmd_cascade(cfg, flags, out);
    return cmd_validate(cfg, flags, out);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
  } catch (const std::length_error& e) {
    err << "error: " << e.what() << '\n';
  } catch (const nlohmann::json::exception& e) {
    err << "error: config: " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return kValidation;
}

}  // namespace gremfield::cli
