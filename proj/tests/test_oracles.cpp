#include <doctest.h>

#include <cmath>
#include <random>

#include "uigm/oracles.hpp"
#include "uigm/problems.hpp"

using namespace uigm;

namespace {

Point vec(std::initializer_list<double> xs) {
  Point p(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) p[i++] = x;
  return p;
}

Point random_point(std::mt19937_64& rng, Eigen::Index n, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Point x(n);
  for (Eigen::Index i = 0; i < n; ++i) x[i] = u(rng);
  return x;
}

}  // namespace

TEST_CASE("hoelder_constant examples") {
  CHECK(hoelder_constant(0.3, {1.0, 7.0}) == doctest::Approx(7.0));
  CHECK(hoelder_constant(1e-9, {1.0, 7.0}) == doctest::Approx(7.0));
  CHECK(hoelder_constant(0.5, {0.0, 1.0}) == doctest::Approx(1.0));
  CHECK(hoelder_constant(1.0, {0.0, 2.0}) == doctest::Approx(2.0));
  CHECK_THROWS_AS(hoelder_constant(0.0, {0.5, 1.0}), DomainError);
  CHECK_THROWS_AS(hoelder_constant(-1.0, {0.5, 1.0}), DomainError);
}

TEST_CASE("hoelder_constant is nonincreasing in delta_c") {
  for (double nu : {0.0, 0.25, 0.5, 0.75}) {
    double prev = hoelder_constant(1e-8, {nu, 3.0});
    for (double dc = 2e-8; dc < 10.0; dc *= 2.0) {
      const double cur = hoelder_constant(dc, {nu, 3.0});
      CHECK(cur <= prev);
      prev = cur;
    }
  }
}

TEST_CASE("power objective examples") {
  auto f = make_power_objective(vec({1}), 0.0, 1.0);
  auto r = f->query(vec({3}), 1e-3);
  CHECK(r.value == doctest::Approx(4.5));
  CHECK(r.subgrad[0] == doctest::Approx(3.0));

  f = make_power_objective(vec({1}), 0.0, 0.0);
  r = f->query(vec({-2}), 1e-3);
  CHECK(r.value == doctest::Approx(2.0));
  CHECK(r.subgrad[0] == doctest::Approx(-1.0));
  CHECK(f->query(vec({0}), 1e-3).subgrad[0] == 0.0);

  f = make_power_objective(vec({1}), 0.0, 0.5);
  r = f->query(vec({4}), 1e-3);
  CHECK(r.value == doctest::Approx(16.0 / 3.0));
  CHECK(r.subgrad[0] == doctest::Approx(2.0));
}

TEST_CASE("power objective reports a valid Hoelder constant") {
  std::mt19937_64 rng(3);
  for (double nu : {0.0, 0.3, 0.5, 0.9}) {
    const DualVector a = random_point(rng, 4, 1.0);
    const auto f = make_power_objective(a, 0.4, nu);
    const HoelderInfo h = *f->smoothness();
    for (int trial = 0; trial < 1000; ++trial) {
      const Point x = random_point(rng, 4, 2.0);
      const Point y = random_point(rng, 4, 2.0);
      const double lhs = (f->query(x, 1.0).subgrad - f->query(y, 1.0).subgrad).norm();
      CHECK(lhs <= h.M * std::pow((x - y).norm(), nu) + 1e-9);
    }
  }
}

TEST_CASE("quadratic objective examples") {
  auto f = make_quadratic_objective(Eigen::MatrixXd::Identity(2, 2), vec({0, 0}));
  auto r = f->query(vec({1, 1}), 1e-3);
  CHECK(r.value == doctest::Approx(1.0));
  CHECK(r.subgrad[0] == doctest::Approx(1.0));
  CHECK(r.subgrad[1] == doctest::Approx(1.0));

  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(2, 2);
  Q(0, 0) = 1.0;
  Q(1, 1) = 4.0;
  f = make_quadratic_objective(Q, vec({0, 0}));
  CHECK(f->smoothness()->M == doctest::Approx(4.0).epsilon(1e-9));
  CHECK(f->smoothness()->nu == 1.0);

  f = make_quadratic_objective(Q, vec({1, 0}));
  r = f->query(vec({0, 0}), 1e-3);
  CHECK(r.value == doctest::Approx(0.0));
  CHECK(r.subgrad[0] == doctest::Approx(1.0));
  CHECK(r.subgrad[1] == doctest::Approx(0.0));

  Eigen::MatrixXd bad = Eigen::MatrixXd::Identity(2, 2);
  bad(1, 1) = -3.0;
  CHECK_THROWS_AS(make_quadratic_objective(bad, vec({0, 0})), DomainError);
}

TEST_CASE("noise wrapper examples") {
  const auto base = make_power_objective(vec({1}), 0.0, 1.0);
  NoiseSpec none;
  none.mode = NoiseMode::adversarial_sign;
  const auto same = with_noise(base, none);
  for (double t : {-2.0, 0.3, 1.0}) {
    CHECK(same->query(vec({t}), 0.1).value == base->query(vec({t}), 0.1).value);
    CHECK(same->query(vec({t}), 0.1).subgrad[0] == base->query(vec({t}), 0.1).subgrad[0]);
  }

  NoiseSpec adv;
  adv.delta1_bar = 0.1;
  adv.mode = NoiseMode::adversarial_sign;
  const auto r = with_noise(base, adv)->query(vec({1}), 0.1);
  const bool in_set = std::abs(r.value - 0.4) < 1e-15 || std::abs(r.value - 0.6) < 1e-15;
  CHECK(in_set);
  CHECK(r.value == doctest::Approx(0.4));
  CHECK(r.subgrad[0] == 1.0);

  NoiseSpec grad;
  grad.delta2_bar = 0.2;
  grad.diameter = 5.0;
  grad.mode = NoiseMode::fixed_direction;
  CHECK(with_noise(base, grad)->delta_u() == doctest::Approx(1.0));
}

TEST_CASE("analytic oracles satisfy the oracle inequality on random pairs") {
  std::mt19937_64 rng(17);
  for (const std::string id : {"quad1d", "quad10d", "power_nu0", "power_nu05", "l1_quad",
                               "logspec_quad", "strong_quad"}) {
    const RegisteredProblem rp = make_problem(id);
    const auto& oracle = *rp.problem.oracle;
    const auto n = oracle.dim();
    for (double dc : {1e-3, 1e-1, 1.0}) {
      const double L = hoelder_constant(dc, *rp.smoothness);
      int failures = 0;
      for (int trial = 0; trial < 1000; ++trial) {
        const Point x = random_point(rng, n, 3.0);
        const Point y = random_point(rng, n, 3.0);
        const OracleCheck c = check_oracle_inequality(oracle, x, y, dc, L);
        if (!c.lower_ok || !c.upper_ok) ++failures;
      }
      CAPTURE(id);
      CAPTURE(dc);
      CHECK(failures == 0);
    }
  }
}

TEST_CASE("noise wrapper keeps the upper side with the reported delta_u") {
  std::mt19937_64 rng(23);
  const RegisteredProblem rp = make_problem("power_nu05");
  const double radius = 1.5;
  for (NoiseMode mode : {NoiseMode::adversarial_sign, NoiseMode::fixed_direction}) {
    for (double d2 : {0.0, 0.05}) {
      NoiseSpec spec;
      spec.delta1_bar = 0.02;
      spec.delta2_bar = d2;
      spec.diameter = 2.0 * radius * std::sqrt(10.0);
      spec.mode = mode;
      const auto noisy = with_noise(rp.problem.oracle, spec);
      for (double dc : {1e-3, 1e-1, 1.0}) {
        const double L = hoelder_constant(dc, *rp.smoothness);
        int upper_failures = 0, lower_failures = 0;
        for (int trial = 0; trial < 1000; ++trial) {
          const Point x = random_point(rng, 10, radius);
          const Point y = random_point(rng, 10, radius);
          const OracleCheck c = check_oracle_inequality(*noisy, x, y, dc, L);
          if (!c.upper_ok) ++upper_failures;
          if (!c.lower_ok) ++lower_failures;
        }
        CHECK(upper_failures == 0);
        // The value error is one-sided, so the lower side survives value noise.
        if (d2 == 0.0) CHECK(lower_failures == 0);
      }
    }
  }
}
