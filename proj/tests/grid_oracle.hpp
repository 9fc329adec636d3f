#pragma once

// Brute-force reference minimizers for prox subproblems.

#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <variant>
#include <vector>

#include "uigm/problems.hpp"
#include "uigm/prox.hpp"

namespace uigm::testing {

/// argmin of f over the grid lo, lo + step, ..., hi.
inline double grid_argmin(const std::function<double(double)>& f, double lo, double hi,
                          double step) {
  double best_t = lo;
  double best = std::numeric_limits<double>::infinity();
  const long count = static_cast<long>(std::floor((hi - lo) / step + 0.5));
  for (long j = 0; j <= count; ++j) {
    const double t = lo + static_cast<double>(j) * step;
    const double v = f(t);
    if (v < best) {
      best = v;
      best_t = t;
    }
  }
  return best_t;
}

/// Coordinatewise grid search for the Euclidean prox with zero or l1 h on
/// all-space (searched on center +- radius) or a box.
inline Point euclidean_grid_prox(const ProxSetup& setup, const CompositeTerm& h,
                                 const ProxModel& model, double step = 1e-4,
                                 double radius = 10.0) {
  const Point& c = setup.center();
  const Eigen::Index n = c.size();
  const double w = h.kind == CompositeTerm::Kind::l1 ? h.lambda * model.composite_weight : 0.0;
  Point out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double lo = c[i] - radius - std::abs(model.linear[i]);
    double hi = c[i] + radius + std::abs(model.linear[i]);
    if (const auto* box = std::get_if<Box>(&setup.set())) {
      lo = box->lo[i];
      hi = box->hi[i];
    }
    const double li = model.linear[i];
    const double ci = c[i];
    out[i] = grid_argmin(
        [&](double t) { return 0.5 * (t - ci) * (t - ci) + li * t + w * std::abs(t); }, lo, hi,
        step);
  }
  return out;
}

/// Grid search over the first coordinate for the two-point entropy prox.
inline Point entropy_grid_prox_2d(const ProxModel& model, double step = 1e-5) {
  auto xlogx = [](double v) { return v > 0.0 ? v * std::log(v) : 0.0; };
  const double s = grid_argmin(
      [&](double t) {
        return xlogx(t) + xlogx(1.0 - t) + model.linear[0] * t + model.linear[1] * (1.0 - t);
      },
      0.0, 1.0, step);
  Point out(2);
  out << s, 1.0 - s;
  return out;
}

/// Feasible probe points: uniform in around +- 3 (clipped to a box or projected
/// onto the simplex), or Dirichlet(1) draws for the entropy setup.
inline std::vector<Point> random_probes(std::mt19937_64& rng, const ProxSetup& setup,
                                        const Point& around, int count) {
  std::vector<Point> probes;
  const Eigen::Index n = setup.dim();
  if (setup.kind() == ProxSetup::Kind::entropy) {
    std::exponential_distribution<double> e(1.0);
    for (int j = 0; j < count; ++j) {
      Point u(n);
      for (Eigen::Index i = 0; i < n; ++i) u[i] = e(rng);
      probes.push_back(u / u.sum());
    }
    return probes;
  }
  std::uniform_real_distribution<double> d(-3.0, 3.0);
  for (int j = 0; j < count; ++j) {
    Point u(n);
    for (Eigen::Index i = 0; i < n; ++i) u[i] = around[i] + d(rng);
    if (const auto* box = std::get_if<Box>(&setup.set())) u = u.cwiseMax(box->lo).cwiseMin(box->hi);
    if (std::holds_alternative<Simplex>(setup.set())) u = project_onto_simplex(u);
    probes.push_back(u);
  }
  return probes;
}

}  // namespace uigm::testing
