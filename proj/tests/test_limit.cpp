#include <doctest.h>

#include <cmath>
#include <random>

#include "gremfield/limit.hpp"
#include "gremfield/scalar.hpp"
#include "oracles/scalar_oracle.hpp"

using namespace gremfield;

namespace {
const double kLn2 = std::log(2.0);
const double kB0 = std::sqrt(2 * kLn2);
}  // namespace

TEST_CASE("rem free energy branches") {
  const OrderParameter rem = OrderParameter::rem();
  for (double beta : {0.2, 0.8, kB0 * 0.99}) {
    CHECK(grem_free_energy(rem, 0.0, beta) == doctest::Approx(beta * beta / 2 + kLn2).epsilon(1e-14));
  }
  CHECK(rem_free_energy_closed(kB0, 0.0) == doctest::Approx(2 * kLn2).epsilon(1e-14));

  const double h = 0.5;
  for (double beta : {0.1, 0.5, 0.9}) {
    CHECK(rem_free_energy_closed(beta, h) ==
          doctest::Approx(kLn2 + std::log(std::cosh(beta / 2)) + beta * beta / 2).epsilon(1e-14));
  }
  const auto m = oracle::maximise_rho_plus_field(h);
  CHECK(rem_free_energy_closed(3.0, h) ==
        doctest::Approx(3.0 * static_cast<double>(m.value)).epsilon(1e-12));
  CHECK(rem_free_energy_closed(1e-9, 0.3) == doctest::Approx(kLn2).epsilon(1e-12));
}

TEST_CASE("rem branch continuity at the freezing temperature") {
  for (int i = 0; i <= 30; ++i) {
    const double h = 0.1 * i;
    const double b0 = rem_freezing_beta(h);
    const double high = kLn2 + log_cosh(b0 * h) + b0 * b0 / 2;
    const double low = b0 * ground_state_constant(h);
    CHECK(std::abs(high - low) <= 1e-12);
  }
}

TEST_CASE("grem free energy reduces to the rem closed form") {
  const OrderParameter rem = OrderParameter::rem();
  for (double h : {0.0, 0.4, 1.3}) {
    for (double beta : {0.3, 1.0, 2.0, 4.0}) {
      CHECK(grem_free_energy(rem, h, beta) ==
            doctest::Approx(rem_free_energy_closed(beta, h)).epsilon(1e-13));
    }
  }
}

TEST_CASE("variational formula matches the closed form") {
  CHECK(std::abs(rem_free_energy_variational(0.5, 0.5) - rem_free_energy_closed(0.5, 0.5)) <= 1e-8);
  CHECK(std::abs(rem_free_energy_variational(3.0, 0.5) - rem_free_energy_closed(3.0, 0.5)) <= 1e-8);
  CHECK(std::abs(rem_free_energy_variational(1.0, 0.0) - rem_free_energy_zero_field(1.0)) <= 1e-12);
}

TEST_CASE("two-level grem at zero field") {
  const OrderParameter op({0.5, 1.0}, {0.75, 1.0});
  const double beta = 10.0;
  const double frozen = beta * (std::sqrt(2 * kLn2 * 0.75 * 0.5) + std::sqrt(2 * kLn2 * 0.25 * 0.5));
  CHECK(grem_free_energy(op, 0.0, beta) == doctest::Approx(frozen).epsilon(1e-13));
  CHECK(grem_ground_state(op, 0.0) == doctest::Approx(frozen / beta).epsilon(1e-13));

  // Intermediate phase: first level frozen, second free.
  const CoarseGraining cg = coarse_grain(op, 0.0);
  const double mid = 0.5 * (1 / cg.gamma_bar[0] + 1 / cg.gamma_bar[1]);
  const double expected = mid * std::sqrt(2 * kLn2 * 0.75 * 0.5) + 0.5 * kLn2 + mid * mid * 0.25 / 2;
  CHECK(grem_free_energy(op, 0.0, mid) == doctest::Approx(expected).epsilon(1e-13));

  const OrderParameter merged({0.5, 1.0}, {0.25, 1.0});
  CHECK(grem_ground_state(merged, 0.0) == doctest::Approx(kB0).epsilon(1e-14));
  CHECK(grem_ground_state(OrderParameter::rem(), 0.8) ==
        doctest::Approx(ground_state_constant(0.8)).epsilon(1e-14));
}

TEST_CASE("free energy curve shape") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> x{u(gen), 1.0};
    std::vector<double> q{u(gen), 1.0};
    const OrderParameter op(x, q);
    const double h = 0.25 * (trial % 5);
    std::vector<double> grid;
    for (int i = 1; i <= 200; ++i) grid.push_back(0.025 * i);
    const FreeEnergyCurve c = free_energy_curve(op, h, grid);
    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
      CHECK(c.values[i - 1] - 2 * c.values[i] + c.values[i + 1] >= -1e-10);
      CHECK(c.values[i] >= c.values[i - 1] - 1e-10);
      CHECK(c.threshold_levels[i] >= c.threshold_levels[i - 1]);
    }
    const double big = 1e3;
    const double ratio = grem_free_energy(op, h, big) / big;
    CHECK(std::abs(ratio / grem_ground_state(op, h) - 1) <= 1e-3);
    CHECK(grem_free_energy(op, h + 0.1, 1.5) >= grem_free_energy(op, h, 1.5) - 1e-10);
  }
}

TEST_CASE("legendre restriction of a quadratic") {
  const auto p = TabulatedFunction::sample([](double l) { return l * l / 2; }, -5.0, 5.0, 2001);
  for (double q : {-2.0, -0.5, 0.0, 1.0, 3.0}) {
    const LegendreValue v = legendre_restrict(p, q);
    CHECK(v.value == doctest::Approx(-q * q / 2).epsilon(1e-9));
    CHECK(v.argument == doctest::Approx(q).epsilon(1e-6));
    CHECK_FALSE(v.at_boundary);
  }
  CHECK(legendre_restrict(p, 8.0).at_boundary);
}

TEST_CASE("global from restricted") {
  const auto constant = TabulatedFunction::sample([](double) { return 0.3; }, -1.0, 0.5, 11);
  CHECK(global_from_restricted(constant).value == doctest::Approx(0.8));
  const TabulatedFunction single({0.25}, {1.0});
  CHECK(global_from_restricted(single).value == doctest::Approx(1.25));
  CHECK_THROWS(global_from_restricted(TabulatedFunction({}, {})));
}

TEST_CASE("rem restricted free energy through the legendre machinery") {
  // Restricted free energy from the direct formula, then the field coupling
  // h beta t integrated back out by global_from_restricted.
  for (double beta : {0.5, 1.5, 3.0}) {
    for (double h : {0.0, 0.5}) {
      const auto restricted = TabulatedFunction::sample(
          [&](double t) { return rem_restricted_free_energy(beta, t); }, -0.999, 0.999, 4001);
      const LegendreValue g = global_from_restricted(restricted, beta * h);
      CHECK(std::abs(g.value - rem_free_energy_closed(beta, h)) <= 1e-6);
    }
  }
  // The restricted free energy is the Legendre transform in the field.
  const double beta = 1.0;
  const auto p_of_lambda = TabulatedFunction::sample(
      [&](double lambda) { return rem_free_energy_closed(beta, std::abs(lambda) / beta); }, -6.0,
      6.0, 4001);
  for (double t : {-0.6, 0.0, 0.3, 0.7}) {
    const LegendreValue v = legendre_restrict(p_of_lambda, t);
    CHECK(std::abs(v.value - rem_restricted_free_energy(beta, t)) <= 1e-6);
  }
}

TEST_CASE("partition normalisation at high temperature") {
  const OrderParameter op({0.5, 1.0}, {0.75, 1.0});
  const CoarseGraining cg = coarse_grain(op, 0.3);
  const double beta = 0.2;
  REQUIRE(temperature_threshold(cg, beta) == 0);
  CHECK(log_partition_normalisation(cg, op, beta, 20) ==
        doctest::Approx(20 * (kLn2 + log_cosh(beta * 0.3) + beta * beta / 2)).epsilon(1e-13));
}
