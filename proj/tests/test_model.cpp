#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "gremfield/model.hpp"
#include "gremfield/scalar.hpp"
#include "oracles/coarse_grain_oracle.hpp"

using namespace gremfield;

namespace {

OrderParameter random_order_parameter(std::mt19937_64& gen, int n) {
  std::uniform_real_distribution<double> u(0.02, 0.98);
  std::vector<double> x(n);
  std::vector<double> q(n);
  for (int i = 0; i + 1 < n; ++i) {
    x[i] = u(gen);
    q[i] = u(gen);
  }
  std::sort(x.begin(), x.end() - 1);
  std::sort(q.begin(), q.end() - 1);
  x[n - 1] = 1.0;
  q[n - 1] = 1.0;
  return OrderParameter(x, q);
}

}  // namespace

TEST_CASE("order parameter validation") {
  CHECK(validate_order_parameter(std::vector{1.0}, std::vector{1.0}).levels() == 1);
  CHECK(validate_order_parameter(std::vector{0.5, 1.0}, std::vector{0.25, 1.0}).levels() == 2);
  CHECK_THROWS_AS(OrderParameter({0.5, 1.0}, {1.0, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(OrderParameter({0.5, 0.9}, {0.5, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(OrderParameter({}, {}), std::invalid_argument);
  CHECK_THROWS_AS(OrderParameter({0.5, 1.0}, {1.0}), std::invalid_argument);

  const OrderParameter op({0.5, 1.0}, {0.75, 1.0});
  CHECK(op.amplitude(1) == doctest::Approx(std::sqrt(0.75)));
  CHECK(op.amplitude(2) == doctest::Approx(0.5));
  CHECK(op.covariance_at(0.0) == 0.0);
  CHECK(op.covariance_at(0.6) == 0.75);
  CHECK(op.covariance_at(1.0) == 1.0);
}

TEST_CASE("slopes") {
  const OrderParameter op({0.5, 1.0}, {0.75, 1.0});
  CHECK(slope(op, 1, 1) == doctest::Approx(1.5));
  CHECK(slope(op, 2, 2) == doctest::Approx(0.5));
  CHECK(slope(op, 1, 2) == doctest::Approx(1.0));
  CHECK(slope(OrderParameter::rem(), 1, 1) == 1.0);
  CHECK_THROWS(slope(op, 2, 1));
  CHECK_THROWS(slope(op, 0, 1));
  CHECK_THROWS(slope(op, 1, 3));

  CHECK(modified_slope(op, 1, 1, 0.0) == doctest::Approx(1.5 / (2 * std::log(2.0))));
  const double h = 0.5;
  const double theta = 1.5;
  const double r =
      static_cast<double>(oracle::rho_ld(oracle::t_star_golden(h / std::sqrt(theta))));
  // The long-double golden search resolves t only to ~1e-10.
  CHECK(modified_slope(op, 1, 1, h) == doctest::Approx(theta / (r * r)).epsilon(1e-9));
}

TEST_CASE("coarse graining of reference cases") {
  const CoarseGraining rem = coarse_grain(OrderParameter::rem(), 0.7);
  CHECK(rem.J == std::vector<int>{0, 1});
  CHECK(rem.gamma_bar[0] == doctest::Approx(1.0 / rho(t_star(0.7))).epsilon(1e-14));

  const CoarseGraining kept = coarse_grain(OrderParameter({0.5, 1.0}, {0.75, 1.0}), 0.0);
  CHECK(kept.J == std::vector<int>{0, 1, 2});
  CHECK(kept.blocks() == 2);
  CHECK_FALSE(kept.critical);

  const CoarseGraining merged = coarse_grain(OrderParameter({0.5, 1.0}, {0.25, 1.0}), 0.0);
  CHECK(merged.J == std::vector<int>{0, 2});
  CHECK(merged.theta_bar[0] == doctest::Approx(1.0));

  // Collinear levels tie; the strict rule merges them and records the tie.
  const CoarseGraining tie = coarse_grain(OrderParameter({0.5, 1.0}, {0.5, 1.0}), 0.0);
  CHECK(tie.J == std::vector<int>{0, 2});
  CHECK(tie.critical);
}

TEST_CASE("coarse graining agrees with brute force and the concave hull") {
  std::mt19937_64 gen(2024);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 1 + trial % 6;
    const OrderParameter op = random_order_parameter(gen, n);
    const oracle::SimpleOp simple{op.x(), op.q()};
    const auto hull = oracle::concave_hull_vertices(simple);
    for (double h : {0.0, 0.5, 2.0}) {
      const CoarseGraining cg = coarse_grain(op, h);
      const auto brute = oracle::brute_force_coarse_grain(simple, h);
      REQUIRE(brute.size() == 1);
      CHECK(cg.J == brute.front());
      CHECK(cg.J == hull);
      double sq = 0.0;
      double sx = 0.0;
      for (int l = 0; l < cg.blocks(); ++l) {
        sq += cg.q_bar[l];
        sx += cg.x_bar[l];
        if (l > 0) CHECK(cg.gamma_bar[l] < cg.gamma_bar[l - 1]);
      }
      CHECK(sq == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(sx == doctest::Approx(1.0).epsilon(1e-12));

      // Idempotence on the rebuilt order parameter.
      std::vector<double> xs;
      std::vector<double> qs;
      double cx = 0.0;
      double cq = 0.0;
      for (int l = 0; l < cg.blocks(); ++l) {
        cx += cg.x_bar[l];
        cq += cg.q_bar[l];
        xs.push_back(l + 1 == cg.blocks() ? 1.0 : cx);
        qs.push_back(l + 1 == cg.blocks() ? 1.0 : cq);
      }
      CHECK(coarse_grain(OrderParameter(xs, qs), h).blocks() == cg.blocks());
    }
  }
}

TEST_CASE("temperature threshold") {
  const CoarseGraining rem = coarse_grain(OrderParameter::rem(), 0.0);
  const double b0 = std::sqrt(2 * std::log(2.0));
  CHECK(temperature_threshold(rem, 1e-9) == 0);
  CHECK(temperature_threshold(rem, b0 * (1 - 1e-9)) == 0);
  CHECK(temperature_threshold(rem, b0 * (1 + 1e-9)) == 1);
  CHECK(at_freezing_point(rem, b0));

  const CoarseGraining two = coarse_grain(OrderParameter({0.5, 1.0}, {0.75, 1.0}), 0.5);
  int previous = 0;
  for (double beta = 0.05; beta < 6.0; beta += 0.05) {
    const int l = temperature_threshold(two, beta);
    CHECK(l >= previous);
    previous = l;
  }
  CHECK(temperature_threshold(two, 1.01 / two.gamma_bar.back()) == 2);
  CHECK_THROWS(temperature_threshold(two, 0.0));
}

TEST_CASE("grem scaling") {
  const GremScaling rem = grem_scaling(OrderParameter::rem(), 0.5, 64);
  const RemScaling direct = rem_scaling(64, 0.5);
  CHECK(rem.shift == doctest::Approx(direct.shift).epsilon(1e-14));
  CHECK(rem.slope == doctest::Approx(1.0 / 8.0));
  CHECK(rem.inverse(rem.forward(1.25)) == doctest::Approx(1.25).epsilon(1e-12));
  CHECK_FALSE(rem.rounded);

  const OrderParameter op({0.5, 1.0}, {0.75, 1.0});
  const CoarseGraining cg = coarse_grain(op, 0.0);
  double limit = 0.0;
  for (int l = 0; l < cg.blocks(); ++l) {
    limit += std::sqrt(2 * std::log(2.0) * cg.q_bar[l] * cg.x_bar[l]);
  }
  double previous_gap = 1.0;
  for (int n : {100, 10000, 1000000}) {
    const GremScaling s = grem_scaling(op, 0.0, n);
    CHECK(s.block_sizes == std::vector<int>{n / 2, n / 2});
    const double gap = std::abs(s.shift / std::sqrt(n) - limit);
    CHECK(gap < previous_gap);
    previous_gap = gap;
  }
  CHECK(grem_scaling(op, 0.0, 25).rounded);
}
