#include <doctest.h>

#include <random>

#include "uigm/oracles.hpp"

using namespace uigm;

namespace {

Point vec(std::initializer_list<double> xs) {
  Point p(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) p[i++] = x;
  return p;
}

}  // namespace

TEST_CASE("dual_pairing examples") {
  CHECK(dual_pairing(vec({1, 2}), vec({3, 4})) == 11.0);
  CHECK(dual_pairing(vec({0, 0}), vec({7, -3})) == 0.0);
  CHECK(dual_pairing(vec({1, -1}), vec({1, 1})) == 0.0);
  CHECK_THROWS_AS(dual_pairing(vec({1, 2}), vec({1, 2, 3})), ContractError);
}

TEST_CASE("dual_pairing is bilinear") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n;
  for (int trial = 0; trial < 200; ++trial) {
    Point x(5), y(5), s(5), t(5);
    for (int i = 0; i < 5; ++i) {
      x[i] = n(rng);
      y[i] = n(rng);
      s[i] = n(rng);
      t[i] = n(rng);
    }
    const double a = n(rng), b = n(rng);
    const double lhs = dual_pairing(s, a * x + b * y);
    const double rhs = a * dual_pairing(s, x) + b * dual_pairing(s, y);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12).scale(1.0));
    const double lhs2 = dual_pairing(a * s + b * t, x);
    const double rhs2 = a * dual_pairing(s, x) + b * dual_pairing(t, x);
    CHECK(lhs2 == doctest::Approx(rhs2).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("dual norm is the max of the pairing over the primal unit sphere") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n;
  for (NormKind kind : {NormKind::l2, NormKind::l1}) {
    const NormPair norms(kind);
    DualVector s(4);
    for (int i = 0; i < 4; ++i) s[i] = n(rng);
    double best = 0.0;
    for (int trial = 0; trial < 20000; ++trial) {
      Point x(4);
      for (int i = 0; i < 4; ++i) x[i] = n(rng);
      x /= norms.primal(x);
      best = std::max(best, norms.pairing(s, x));
      CHECK(norms.pairing(s, x) <= norms.dual(s) * (1 + 1e-12));
    }
    // Vertices of the l1 ball attain the max exactly; random l2 samples come close.
    CHECK(best >= 0.9 * norms.dual(s));
  }
}

TEST_CASE("check_oracle_inequality examples") {
  const auto quad = make_power_objective(vec({1}), 0.0, 1.0);
  auto c = check_oracle_inequality(*quad, vec({1}), vec({0}), 0.1, 1.0);
  CHECK(c.lower_ok);
  CHECK(c.upper_ok);

  const auto abs = make_power_objective(vec({1}), 0.0, 0.0);
  const double L = hoelder_constant(0.5, {0.0, 1.0});
  CHECK(L == doctest::Approx(1.0));
  c = check_oracle_inequality(*abs, vec({1}), vec({-1}), 0.5, L);
  CHECK(c.lower_ok);
  CHECK(c.upper_ok);
  CHECK(c.slack == doctest::Approx(0.5));

  c = check_oracle_inequality(*abs, vec({1}), vec({-1}), 0.5, 0.1);
  CHECK_FALSE(c.upper_ok);
}

TEST_CASE("SolverConfig validation") {
  SolverConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.p = 2.5;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.p = 1.0;
  cfg.epsilon = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.epsilon = 1e-3;
  cfg.L0 = -1.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}
