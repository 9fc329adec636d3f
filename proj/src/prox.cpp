#include "uigm/prox.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "uigm/kernels.hpp"

namespace uigm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::span<const double> view(const Eigen::VectorXd& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}
std::span<double> view(Eigen::VectorXd& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

double xlogx(double v) { return v > 0.0 ? v * std::log(v) : 0.0; }

const Box* as_box(const SetDescriptor& s) { return std::get_if<Box>(&s); }
bool is_simplex(const SetDescriptor& s) { return std::holds_alternative<Simplex>(s); }
bool is_all_space(const SetDescriptor& s) { return std::holds_alternative<AllSpace>(s); }

void check_model(const ProxSetup& setup, const ProxModel& model) {
  require_same_dim(setup.center(), model.linear, "prox model");
  if (model.composite_weight < 0.0) throw ContractError("prox model: negative composite weight");
}

// Euclidean projection onto the simplex of v, refined by bisection on the
// threshold theta with an exact finish from the detected support.
Point simplex_threshold_refine(const ProxSetup& setup, const CompositeTerm& h,
                               const ProxModel& model, double delta_pc,
                               int max_iterations, bool& exact) {
  const Eigen::VectorXd v = setup.center() - model.linear;
  const Eigen::Index n = v.size();
  double hi = v.maxCoeff();
  double lo = hi - 1.0;  // sum max(v - lo, 0) >= 1 here
  double best = -kInf;
  const double scale = std::max(1.0, v.cwiseAbs().maxCoeff());
  const double accept = std::max(delta_pc, 1e-13 * scale);

  for (int it = 0; it < max_iterations; ++it) {
    const double theta = 0.5 * (lo + hi);
    double mass = 0.0;
    double support_sum = 0.0;
    Eigen::Index support = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (v(i) > theta) {
        mass += v(i) - theta;
        support_sum += v(i);
        ++support;
      }
    }
    if (support > 0) {
      const double exact_theta = (support_sum - 1.0) / static_cast<double>(support);
      Point x = (v.array() - exact_theta).max(0.0).matrix();
      const double s = x.sum();
      if (s > 0.0) {
        x /= s;
        const double r = certificate_residual(setup, h, model, x);
        best = std::max(best, r);
        if (r >= -accept) {
          exact = r >= -1e-13 * scale;
          return x;
        }
      }
    }
    if (mass > 1.0) lo = theta;
    else hi = theta;
  }
  throw ProxFailure("simplex prox: refinement did not reach the requested certificate", best);
}

// Moves the exact solution along the direction that violates the
// certificate fastest until the residual reaches -target.
Point inject_error(const ProxSetup& setup, const CompositeTerm& h, const ProxModel& model,
                   const Point& exact, double target) {
  const Eigen::Index n = exact.size();
  struct Path {
    Point dir;
    double t_max;
  };
  std::vector<Path> paths;

  if (is_simplex(setup.set())) {
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), Eigen::Index{0});
    std::stable_sort(idx.begin(), idx.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return exact(a) < exact(b); });
    idx.resize(std::min<std::size_t>(idx.size(), 32));
    for (Eigen::Index j : idx) {
      Point dir = -exact;
      dir(j) += 1.0;
      if (dir.norm() > 0.0) paths.push_back({dir, 1.0 - 1e-9});
    }
  } else {
    const Box* box = as_box(setup.set());
    for (Eigen::Index j = 0; j < std::min<Eigen::Index>(n, 16); ++j) {
      for (double sgn : {1.0, -1.0}) {
        Point dir = Point::Zero(n);
        dir(j) = sgn;
        double t_max = kInf;
        if (box) t_max = sgn > 0 ? box->hi(j) - exact(j) : exact(j) - box->lo(j);
        if (t_max > 0.0) paths.push_back({dir, t_max});
      }
    }
  }
  if (paths.empty()) return exact;

  const double scale = std::max(1.0, exact.cwiseAbs().maxCoeff());
  const double probe = 1e-6 * scale;
  std::size_t pick = 0;
  double worst = kInf;
  for (std::size_t k = 0; k < paths.size(); ++k) {
    const double t = std::min(probe, 0.5 * paths[k].t_max);
    const double r = certificate_residual(setup, h, model, exact + t * paths[k].dir) / t;
    if (r < worst) {
      worst = r;
      pick = k;
    }
  }
  const Path& path = paths[pick];
  auto residual = [&](double t) {
    return certificate_residual(setup, h, model, exact + t * path.dir);
  };

  double t_lo = 0.0;
  double t_hi = std::min(probe, 0.5 * path.t_max);
  while (residual(t_hi) > -target) {
    if (t_hi >= path.t_max) return exact + path.t_max * path.dir;
    t_lo = t_hi;
    t_hi = std::min(2.0 * t_hi, path.t_max);
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (t_lo + t_hi);
    if (residual(mid) > -target) t_lo = mid;
    else t_hi = mid;
    if (t_hi - t_lo <= 1e-15 * std::max(1.0, t_hi)) break;
  }
  return exact + t_lo * path.dir;
}

}  // namespace

// ---------------------------------------------------------------------------

bool contains(const SetDescriptor& set, const Point& x, double tol) {
  if (!x.allFinite()) return false;
  if (is_all_space(set)) return true;
  if (const Box* b = as_box(set)) {
    return ((x - b->lo).array() >= -tol).all() && ((b->hi - x).array() >= -tol).all();
  }
  return (x.array() >= -tol).all() &&
         std::abs(x.sum() - 1.0) <= tol * std::max<double>(1.0, static_cast<double>(x.size()));
}

CompositeTerm CompositeTerm::l1(double lambda) {
  if (!(lambda >= 0.0)) throw DomainError("l1 weight must be nonnegative");
  return {Kind::l1, lambda};
}

double CompositeTerm::evaluate(const Point& x) const {
  if (kind == Kind::l1) return lambda * kernels::abs_sum(view(x));
  return 0.0;
}

ProxSetup ProxSetup::euclidean(Point center, SetDescriptor set) {
  if (const Box* b = std::get_if<Box>(&set)) {
    require_same_dim(center, b->lo, "box lower bound");
    require_same_dim(center, b->hi, "box upper bound");
    if (((b->hi - b->lo).array() < 0.0).any()) throw ContractError("box: empty");
  }
  if (const AllSpace* a = std::get_if<AllSpace>(&set)) {
    if (!(a->probe_radius > 0.0)) throw ContractError("probe radius must be positive");
  }
  if (!contains(set, center, 1e-12)) throw ContractError("prox center must be feasible");
  return ProxSetup(Kind::euclidean, std::move(center), std::move(set), NormPair{NormKind::l2});
}

ProxSetup ProxSetup::entropy(Eigen::Index n) {
  if (n <= 0) throw ContractError("entropy setup needs n >= 1");
  return ProxSetup(Kind::entropy, Point::Constant(n, 1.0 / static_cast<double>(n)), Simplex{},
                   NormPair{NormKind::l1});
}

double ProxSetup::d(const Point& x) const {
  require_same_dim(center_, x, "prox-function");
  if (kind_ == Kind::euclidean) {
    const Eigen::VectorXd diff = x - center_;
    return 0.5 * kernels::squared_norm(view(diff));
  }
  double s = std::log(static_cast<double>(x.size()));
  for (Eigen::Index i = 0; i < x.size(); ++i) s += xlogx(x(i));
  return s;
}

DualVector ProxSetup::grad_d(const Point& x) const {
  require_same_dim(center_, x, "prox-function gradient");
  if (kind_ == Kind::euclidean) return x - center_;
  return x.unaryExpr([](double v) { return v > 0.0 ? std::log(v) + 1.0 : -kInf; });
}

double ProxSetup::bregman(const Point& x, const Point& y) const {
  require_same_dim(x, y, "bregman");
  if (kind_ == Kind::euclidean) {
    const Eigen::VectorXd diff = y - x;
    return 0.5 * kernels::squared_norm(view(diff));
  }
  double s = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (y(i) > 0.0) {
      if (x(i) <= 0.0) return kInf;
      s += y(i) * std::log(y(i) / x(i));
    }
    s -= y(i) - x(i);
  }
  return s;
}

ProxSetup ProxSetup::recentered(const Point& new_center) const {
  if (kind_ != Kind::euclidean)
    throw UnsupportedSetup("recentering is only defined for the Euclidean setup");
  return euclidean(new_center, set_);
}

double prox_objective(const ProxSetup& setup, const CompositeTerm& h, const ProxModel& model,
                      const Point& x) {
  return dual_pairing(model.linear, x) + setup.d(x) + model.composite_weight * h.evaluate(x) +
         model.constant;
}

ProxResult euclidean_prox(const ProxSetup& setup, const CompositeTerm& h,
                          const ProxModel& model) {
  check_model(setup, model);
  if (setup.kind() != ProxSetup::Kind::euclidean || is_simplex(setup.set()))
    throw UnsupportedSetup("euclidean_prox needs a Euclidean setup on all-space or a box");
  const Eigen::VectorXd v = setup.center() - model.linear;
  const double level = h.kind == CompositeTerm::Kind::l1 ? h.lambda * model.composite_weight : 0.0;
  ProxResult r;
  r.point.resize(v.size());
  if (const Box* b = as_box(setup.set()))
    kernels::soft_threshold_clip(view(v), level, view(b->lo), view(b->hi), view(r.point));
  else
    kernels::soft_threshold_clip(view(v), level, {}, {}, view(r.point));
  r.objective_value = prox_objective(setup, h, model, r.point);
  r.exact = true;
  return r;
}

ProxResult entropy_prox_simplex(const ProxModel& model) {
  const Eigen::Index n = model.linear.size();
  if (n == 0) throw ContractError("entropy prox: empty model");
  ProxResult r;
  r.point.resize(n);
  kernels::softmax_neg(view(model.linear), view(r.point));
  // Coordinates below the normal range would make log x and V[x](.) infinite.
  r.point = r.point.cwiseMax(std::numeric_limits<double>::min());
  r.point /= r.point.sum();
  const ProxSetup setup = ProxSetup::entropy(n);
  r.objective_value = prox_objective(setup, CompositeTerm::zero(), model, r.point);
  r.exact = true;
  return r;
}

ProxResult solve_prox(const ProxSetup& setup, const CompositeTerm& h, const ProxModel& model,
                      double delta_pc, double delta_pu_injection,
                      const ProxSolveOptions& options) {
  check_model(setup, model);
  if (!(delta_pc >= 0.0)) throw ContractError("solve_prox: delta_pc must be nonnegative");
  if (!(delta_pu_injection >= 0.0)) throw ContractError("solve_prox: negative injection");

  ProxResult r;
  if (setup.kind() == ProxSetup::Kind::entropy) {
    r = entropy_prox_simplex(model);
  } else if (is_simplex(setup.set())) {
    bool exact = false;
    r.point = simplex_threshold_refine(setup, h, model, delta_pc,
                                       options.max_iterations, exact);
    r.exact = exact;
  } else {
    r = euclidean_prox(setup, h, model);
  }

  if (delta_pu_injection > 0.0) {
    r.point = inject_error(setup, h, model, r.point, delta_pu_injection);
    r.exact = false;
  }
  r.delta_pc = delta_pc;
  r.delta_pu = delta_pu_injection;
  r.objective_value = prox_objective(setup, h, model, r.point);
  return r;
}

DualVector composite_subgradient(const ProxSetup& setup, const CompositeTerm& h,
                                 const ProxModel& model, const Point& x) {
  DualVector p = DualVector::Zero(x.size());
  if (h.kind != CompositeTerm::Kind::l1) return p;
  const double w = h.lambda * model.composite_weight;
  if (w == 0.0) return p;
  const DualVector smooth = model.linear + setup.grad_d(x);
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x(i) > 0.0) p(i) = w;
    else if (x(i) < 0.0) p(i) = -w;
    else p(i) = std::clamp(-smooth(i), -w, w);
  }
  return p;
}

double certificate_residual(const ProxSetup& setup, const CompositeTerm& h,
                            const ProxModel& model, const Point& x) {
  const DualVector G = model.linear + setup.grad_d(x) + composite_subgradient(setup, h, model, x);
  if (!G.allFinite()) return -kInf;
  if (is_simplex(setup.set())) return G.minCoeff() - dual_pairing(G, x);
  if (const Box* b = as_box(setup.set())) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      if (G(i) > 0.0) s += G(i) * (b->lo(i) - x(i));
      else if (G(i) < 0.0) s += G(i) * (b->hi(i) - x(i));
    }
    return s;
  }
  const double radius = std::get<AllSpace>(setup.set()).probe_radius;
  return dual_pairing(G, setup.center() - x) - radius * G.norm();
}

CertificateCheck verify_certificate(const ProxSetup& setup, const CompositeTerm& h,
                                    const ProxModel& model, const Point& x, double slack,
                                    std::span<const Point> probes, const Tolerance& tol) {
  const DualVector G = model.linear + setup.grad_d(x) + composite_subgradient(setup, h, model, x);
  CertificateCheck out;
  double worst = kInf;
  for (const Point& u : probes) worst = std::min(worst, dual_pairing(G, u - x));
  out.worst_violation = probes.empty() ? 0.0 : worst;
  out.ok = tol.geq(out.worst_violation, -slack);
  return out;
}

double lemma1_gap(const ProxSetup& setup, const CompositeTerm& h, const ProxModel& model,
                  const Point& x, const Point& y, double slack) {
  return prox_objective(setup, h, model, y) - prox_objective(setup, h, model, x) -
         setup.bregman(x, y) + slack;
}

double prox_min_value(const ProxSetup& setup, const CompositeTerm& h, const ProxModel& model) {
  check_model(setup, model);
  if (setup.kind() == ProxSetup::Kind::entropy) {
    const Eigen::VectorXd neg = -model.linear;
    const double lse = kernels::log_sum_exp(view(neg));
    // On the simplex the l1 term is the constant lambda.
    const double hval = h.kind == CompositeTerm::Kind::l1 ? h.lambda * model.composite_weight : 0.0;
    return std::log(static_cast<double>(model.linear.size())) - lse + hval + model.constant;
  }
  return solve_prox(setup, h, model, 0.0).objective_value;
}

}  // namespace uigm
