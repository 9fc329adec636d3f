#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "uigm/solver.hpp"

namespace uigm {

struct ProblemParams {
  Eigen::Index n = 0;  ///< 0 picks the problem's default size
  std::uint64_t seed = 1;
  double lambda = 0.1;  ///< l1 weight for composite problems
};

/// A test problem with known optimum.
struct RegisteredProblem {
  std::string id;
  Problem problem;
  double F_star = 0.0;
  Point x_star;
  std::optional<HoelderInfo> smoothness;
  double mu = 0.0;  ///< strong convexity modulus w.r.t. the prox norm, 0 if none

  double gap(const Point& x) const { return problem.F(x) - F_star; }
  double d_star() const { return problem.prox.d(x_star); }
};

/// Known ids:
///   quad1d         f(t) = 1/2 (t - 3)^2, Euclidean prox on R
///   quad10d        dense random convex quadratic, n = 10
///   power_nu0      |<a,x> - b|, nonsmooth
///   power_nu05     |<a,x> - b|^1.5 / 1.5
///   l1_quad        diagonal quadratic + lambda ||x||_1
///   simplex_quad   <c,x> + 1/2 ||x - t||^2 on the simplex, entropy prox
///   logspec_quad   diagonal quadratic with log-uniform spectrum in [1e-9, 1]
///   strong_quad    diagonal quadratic with spectrum in [1, 4]
RegisteredProblem make_problem(const std::string& id, const ProblemParams& params = {});
std::vector<std::string> registered_problem_ids();

/// Euclidean projection onto the simplex by sorting.
Point project_onto_simplex(const Eigen::VectorXd& v);

}  // namespace uigm
