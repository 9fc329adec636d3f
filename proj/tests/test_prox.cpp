#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "grid_oracle.hpp"
#include "uigm/problems.hpp"
#include "uigm/prox.hpp"

using namespace uigm;

namespace {

Point vec(std::initializer_list<double> xs) {
  Point p(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) p[i++] = x;
  return p;
}

}  // namespace

TEST_CASE("euclidean prox examples") {
  const ProxSetup s = ProxSetup::euclidean(Point::Zero(2));
  ProxResult r = euclidean_prox(s, CompositeTerm::zero(), {vec({3, -0.5}), 1.0, 0.0});
  CHECK(r.point[0] == doctest::Approx(-3.0));
  CHECK(r.point[1] == doctest::Approx(0.5));

  r = euclidean_prox(s, CompositeTerm::l1(1.0), {vec({3, -0.5}), 1.0, 0.0});
  const Point grid = testing::euclidean_grid_prox(s, CompositeTerm::l1(1.0), {vec({3, -0.5}), 1.0, 0.0});
  CHECK(r.point[0] == doctest::Approx(-2.0));
  CHECK(r.point[1] == doctest::Approx(0.0));
  CHECK((r.point - grid).lpNorm<Eigen::Infinity>() <= 2e-4);

  const ProxSetup s5 = ProxSetup::euclidean(vec({5}));
  r = euclidean_prox(s5, CompositeTerm::zero(), {vec({0}), 1.0, 0.0});
  CHECK(r.point[0] == doctest::Approx(5.0));
  CHECK(r.exact);
}

TEST_CASE("entropy prox examples") {
  ProxResult r = entropy_prox_simplex({vec({0, 0}), 0.0, 0.0});
  CHECK(r.point[0] == doctest::Approx(0.5));
  CHECK(r.point[1] == doctest::Approx(0.5));

  r = entropy_prox_simplex({vec({std::log(3.0), 0}), 0.0, 0.0});
  CHECK(r.point[0] == doctest::Approx(0.25));
  CHECK(r.point[1] == doctest::Approx(0.75));

  for (double t : {-40.0, 0.0, 3.5, 700.0}) {
    r = entropy_prox_simplex({vec({t, t, t}), 0.0, 0.0});
    for (int i = 0; i < 3; ++i) CHECK(r.point[i] == doctest::Approx(1.0 / 3.0));
  }
}

TEST_CASE("solve_prox dispatch and injection") {
  const ProxSetup s = ProxSetup::euclidean(Point::Zero(2));
  const ProxModel m{vec({3, -0.5}), 1.0, 0.0};
  const ProxResult exact = solve_prox(s, CompositeTerm::l1(1.0), m, 1e-6);
  const ProxResult closed = euclidean_prox(s, CompositeTerm::l1(1.0), m);
  CHECK(exact.point == closed.point);

  const ProxSetup s1 = ProxSetup::euclidean(Point::Zero(1));
  const ProxModel m1{vec({1}), 1.0, 0.0};
  const double dpc = 1e-3;
  const ProxResult inj = solve_prox(s1, CompositeTerm::zero(), m1, dpc, 0.005);
  CHECK_FALSE(inj.exact);
  CHECK(inj.point[0] != -1.0);
  std::vector<Point> grid;
  for (double u = -10.0; u <= 10.0; u += 0.01) grid.push_back(vec({u}));
  const CertificateCheck c = verify_certificate(s1, CompositeTerm::zero(), m1, inj.point, 0.005 + dpc, grid);
  CHECK(c.ok);
  CHECK(c.worst_violation <= 0.0);

  const ProxSetup e = ProxSetup::entropy(2);
  const ProxModel me{vec({0.3, -1.1}), 1.0, 0.0};
  const ProxResult a = solve_prox(e, CompositeTerm::indicator(), me, 1e-6);
  const ProxResult b = entropy_prox_simplex(me);
  CHECK((a.point - b.point).lpNorm<Eigen::Infinity>() <= 1e-12);
}

TEST_CASE("certificate examples") {
  const ProxSetup s = ProxSetup::euclidean(Point::Zero(1));
  const ProxModel m{vec({1}), 1.0, 0.0};
  std::vector<Point> probes = {vec({-2}), vec({0}), vec({2})};
  CertificateCheck c = verify_certificate(s, CompositeTerm::zero(), m, vec({-1}), 0.0, probes);
  CHECK(c.ok);
  CHECK(c.worst_violation >= -1e-12);

  // Minimizer of 1/2 x^2 + x is -1; shift by 0.1 and probe at offsets -2, 0, 2.
  const Point shifted = vec({-0.9});
  probes = {vec({-2.9}), vec({-0.9}), vec({1.1})};
  c = verify_certificate(s, CompositeTerm::zero(), m, shifted, 0.0, probes);
  CHECK(c.worst_violation == doctest::Approx(-0.2));
  CHECK_FALSE(c.ok);
  CHECK(verify_certificate(s, CompositeTerm::zero(), m, shifted, 0.2, probes).ok);
  CHECK_FALSE(verify_certificate(s, CompositeTerm::zero(), m, shifted, 0.19, probes).ok);

  probes = {shifted};
  c = verify_certificate(s, CompositeTerm::zero(), m, shifted, 0.0, probes);
  CHECK(c.ok);
  CHECK(c.worst_violation == 0.0);
}

TEST_CASE("lemma1_gap examples") {
  const ProxSetup s = ProxSetup::euclidean(Point::Zero(2));
  const ProxModel m{vec({0.7, -1.3}), 1.0, 0.0};
  const ProxResult r = euclidean_prox(s, CompositeTerm::zero(), m);
  std::mt19937_64 rng(9);
  std::normal_distribution<double> n;
  for (int j = 0; j < 50; ++j) {
    const Point y = vec({n(rng), n(rng)});
    CHECK(lemma1_gap(s, CompositeTerm::zero(), m, r.point, y, 0.0) == doctest::Approx(0.0).scale(1.0));
  }
  CHECK(lemma1_gap(s, CompositeTerm::zero(), m, r.point, r.point, 0.25) == 0.25);
}

TEST_CASE("Bregman divergence is nonnegative and vanishes on the diagonal") {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n;
  const ProxSetup eu = ProxSetup::euclidean(vec({1, -1, 0.5}));
  const ProxSetup en = ProxSetup::entropy(3);
  std::exponential_distribution<double> e(1.0);
  for (int j = 0; j < 200; ++j) {
    const Point x = vec({n(rng), n(rng), n(rng)});
    const Point y = vec({n(rng), n(rng), n(rng)});
    CHECK(eu.bregman(x, y) >= -1e-12);
    CHECK(eu.bregman(x, y) == doctest::Approx(0.5 * (x - y).squaredNorm()));
    CHECK(eu.bregman(x, x) == 0.0);
    Point p = vec({e(rng), e(rng), e(rng)});
    Point q = vec({e(rng), e(rng), e(rng)});
    p /= p.sum();
    q /= q.sum();
    CHECK(en.bregman(p, q) >= -1e-12);
    // Strong convexity of entropy w.r.t. the l1 norm (Pinsker).
    CHECK(en.bregman(p, q) >= 0.5 * (p - q).lpNorm<1>() * (p - q).lpNorm<1>() - 1e-12);
    CHECK(std::abs(en.bregman(p, p)) <= 1e-12);
  }
}

TEST_CASE("prox results pass certificates and the three-point inequality on random probes") {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> n;
  Box box;
  box.lo = Eigen::VectorXd::Constant(4, -1.0);
  box.hi = Eigen::VectorXd::Constant(4, 1.5);
  const std::vector<std::pair<ProxSetup, CompositeTerm>> setups = {
      {ProxSetup::euclidean(Point::Zero(4)), CompositeTerm::zero()},
      {ProxSetup::euclidean(Point::Zero(4)), CompositeTerm::l1(0.3)},
      {ProxSetup::euclidean(Point::Zero(4), box), CompositeTerm::l1(0.3)},
      {ProxSetup::euclidean(Point::Constant(4, 0.25), Simplex{}), CompositeTerm::indicator()},
      {ProxSetup::entropy(4), CompositeTerm::indicator()},
  };
  for (const auto& [setup, h] : setups) {
    for (double injection : {0.0, 1e-3}) {
      for (int trial = 0; trial < 10; ++trial) {
        ProxModel m{DualVector(4), 0.5 + trial * 0.2, 0.0};
        for (int i = 0; i < 4; ++i) m.linear[i] = 2.0 * n(rng);
        const double dpc = 1e-6;
        // The entropy setup has no injection path that keeps points interior.
        const double inj = setup.kind() == ProxSetup::Kind::entropy ? 0.0 : injection;
        const ProxResult r = solve_prox(setup, h, m, dpc, inj);
        const auto probes = testing::random_probes(rng, setup, setup.center(), 100);
        const double slack = dpc + inj;
        CHECK(verify_certificate(setup, h, m, r.point, slack, probes).ok);
        for (const Point& y : probes) CHECK(lemma1_gap(setup, h, m, r.point, y, slack) >= -1e-9);
      }
    }
  }
}

TEST_CASE("entropy prox stays interior for widely spread logits") {
  const ProxSetup s = ProxSetup::entropy(3);
  const ProxModel m{vec({0.0, 2000.0, 5000.0}), 1.0, 0.0};
  const ProxResult r = solve_prox(s, CompositeTerm::indicator(), m, 0.0, 0.0);
  CHECK(r.point[0] == doctest::Approx(1.0));
  CHECK(r.point.minCoeff() > 0.0);
  const Point probes[] = {vec({0.2, 0.3, 0.5}), vec({0.0, 0.0, 1.0}), vec({1.0, 0.0, 0.0})};
  CHECK(verify_certificate(s, CompositeTerm::indicator(), m, r.point, 1e-12, probes).ok);
  for (const Point& y : probes)
    CHECK(lemma1_gap(s, CompositeTerm::indicator(), m, r.point, y, 1e-12) >= -1e-9);
}
