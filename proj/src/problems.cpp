#include "uigm/problems.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <vector>

#include <Eigen/Cholesky>

#include "uigm/oracles.hpp"

namespace uigm {

namespace {

Eigen::VectorXd uniform_vector(std::mt19937_64& rng, Eigen::Index n, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = dist(rng);
  return v;
}

Eigen::Index size_or(const ProblemParams& p, Eigen::Index fallback) {
  return p.n > 0 ? p.n : fallback;
}

// 1/2 sum q_i (x_i - t_i)^2 written as 1/2 <diag(q) x, x> + <c, x> + r.
std::shared_ptr<const InexactOracle> shifted_diagonal(const Eigen::VectorXd& q,
                                                      const Eigen::VectorXd& t) {
  const Eigen::VectorXd c = -q.cwiseProduct(t);
  const double r = 0.5 * q.dot(t.cwiseProduct(t));
  return make_diagonal_quadratic(q, c, r);
}

RegisteredProblem quad1d(const ProblemParams&) {
  Eigen::VectorXd q(1), t(1);
  q << 1.0;
  t << 3.0;
  RegisteredProblem rp{"quad1d",
                       {shifted_diagonal(q, t), CompositeTerm::zero(),
                        ProxSetup::euclidean(Point::Zero(1))},
                       0.0, t, HoelderInfo{1.0, 1.0}, 1.0};
  return rp;
}

RegisteredProblem quad10d(const ProblemParams& params) {
  const Eigen::Index n = size_or(params, 10);
  std::mt19937_64 rng(params.seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd G(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) G(i, j) = normal(rng);
  Eigen::MatrixXd Q = G.transpose() * G / static_cast<double>(n);
  Q = 0.5 * (Q + Q.transpose()).eval();
  const Eigen::VectorXd c = uniform_vector(rng, n, -1.0, 1.0);
  auto oracle = make_quadratic_objective(Q, c);
  const Point x_star = Q.ldlt().solve(-c);
  const double F_star = 0.5 * x_star.dot(Q * x_star) + c.dot(x_star);
  return {"quad10d",
          {oracle, CompositeTerm::zero(), ProxSetup::euclidean(Point::Zero(n))},
          F_star, x_star, oracle->smoothness(), 0.0};
}

RegisteredProblem power(const std::string& id, double nu, const ProblemParams& params) {
  const Eigen::Index n = size_or(params, 10);
  std::mt19937_64 rng(params.seed);
  const DualVector a = uniform_vector(rng, n, -1.0, 1.0);
  const double b = 1.0;
  auto oracle = make_power_objective(a, b, nu);
  const Point x_star = (b / a.squaredNorm()) * a;
  return {id,
          {oracle, CompositeTerm::zero(), ProxSetup::euclidean(Point::Zero(n))},
          0.0, x_star, oracle->smoothness(), 0.0};
}

RegisteredProblem l1_quad(const ProblemParams& params) {
  const Eigen::Index n = size_or(params, 20);
  std::mt19937_64 rng(params.seed);
  const Eigen::VectorXd q = uniform_vector(rng, n, 0.1, 2.0);
  const Eigen::VectorXd t = uniform_vector(rng, n, -2.0, 2.0);
  const double lambda = params.lambda;
  Point x_star(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double thr = lambda / q[i];
    x_star[i] = std::copysign(std::max(std::abs(t[i]) - thr, 0.0), t[i]);
  }
  const Eigen::VectorXd r = x_star - t;
  const double F_star = 0.5 * q.dot(r.cwiseProduct(r)) + lambda * x_star.lpNorm<1>();
  return {"l1_quad",
          {shifted_diagonal(q, t), CompositeTerm::l1(lambda), ProxSetup::euclidean(Point::Zero(n))},
          F_star, x_star, HoelderInfo{1.0, q.maxCoeff()}, 0.0};
}

RegisteredProblem simplex_quad(const ProblemParams& params) {
  const Eigen::Index n = size_or(params, 20);
  std::mt19937_64 rng(params.seed);
  const Eigen::VectorXd c = uniform_vector(rng, n, -0.5, 0.5);
  const Eigen::VectorXd t = uniform_vector(rng, n, 0.0, 0.3);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
  auto oracle = make_diagonal_quadratic(ones, c - t, 0.5 * t.squaredNorm());
  const Point x_star = project_onto_simplex(t - c);
  const double F_star = c.dot(x_star) + 0.5 * (x_star - t).squaredNorm();
  // Unit diagonal Hessian: ||grad f(x) - grad f(y)||_inf <= ||x - y||_1.
  return {"simplex_quad",
          {oracle, CompositeTerm::indicator(), ProxSetup::entropy(n)},
          F_star, x_star, HoelderInfo{1.0, 1.0}, 0.0};
}

RegisteredProblem logspec_quad(const ProblemParams& params) {
  const Eigen::Index n = size_or(params, 400);
  Eigen::VectorXd q(n);
  for (Eigen::Index i = 0; i < n; ++i)
    q[i] = std::pow(10.0, -9.0 * static_cast<double>(i) / static_cast<double>(n - 1));
  const Eigen::VectorXd t = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
  return {"logspec_quad",
          {shifted_diagonal(q, t), CompositeTerm::zero(), ProxSetup::euclidean(Point::Zero(n))},
          0.0, t, HoelderInfo{1.0, q.maxCoeff()}, 0.0};
}

RegisteredProblem strong_quad(const ProblemParams& params) {
  const Eigen::Index n = size_or(params, 10);
  std::mt19937_64 rng(params.seed);
  const Eigen::VectorXd q = uniform_vector(rng, n, 1.0, 4.0);
  const Eigen::VectorXd t = uniform_vector(rng, n, -1.0, 1.0);
  return {"strong_quad",
          {shifted_diagonal(q, t), CompositeTerm::zero(), ProxSetup::euclidean(Point::Zero(n))},
          0.0, t, HoelderInfo{1.0, q.maxCoeff()}, q.minCoeff()};
}

using Factory = std::function<RegisteredProblem(const ProblemParams&)>;

const std::map<std::string, Factory>& registry() {
  static const std::map<std::string, Factory> table = {
      {"quad1d", quad1d},
      {"quad10d", quad10d},
      {"power_nu0", [](const ProblemParams& p) { return power("power_nu0", 0.0, p); }},
      {"power_nu05", [](const ProblemParams& p) { return power("power_nu05", 0.5, p); }},
      {"l1_quad", l1_quad},
      {"simplex_quad", simplex_quad},
      {"logspec_quad", logspec_quad},
      {"strong_quad", strong_quad},
  };
  return table;
}

}  // namespace

RegisteredProblem make_problem(const std::string& id, const ProblemParams& params) {
  const auto& table = registry();
  auto it = table.find(id);
  if (it == table.end()) throw ConfigError("unknown problem id '" + id + "'");
  return it->second(params);
}

std::vector<std::string> registered_problem_ids() {
  std::vector<std::string> ids;
  for (const auto& [id, factory] : registry()) ids.push_back(id);
  return ids;
}

Point project_onto_simplex(const Eigen::VectorXd& v) {
  std::vector<double> u(v.data(), v.data() + v.size());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumsum = 0.0;
  double theta = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    cumsum += u[j];
    const double candidate = (cumsum - 1.0) / static_cast<double>(j + 1);
    if (u[j] - candidate > 0.0) theta = candidate;
  }
  return (v.array() - theta).max(0.0).matrix();
}

}  // namespace uigm
