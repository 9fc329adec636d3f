#pragma once

#include <span>
#include <variant>
#include <vector>

#include "uigm/core.hpp"

namespace uigm {

// ---------------------------------------------------------------------------
// Feasible sets
// ---------------------------------------------------------------------------

/// Q = E. Certificates over an unbounded set are checked on the ball of
/// radius `probe_radius` around the prox center.
struct AllSpace {
  double probe_radius = 10.0;
};

/// Q = {x : lo <= x <= hi}.
struct Box {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;
};

/// Q = {x >= 0 : sum x = 1}.
struct Simplex {};

using SetDescriptor = std::variant<AllSpace, Box, Simplex>;

bool contains(const SetDescriptor& set, const Point& x, double tol = 1e-12);

// ---------------------------------------------------------------------------
// Composite term h
// ---------------------------------------------------------------------------

struct CompositeTerm {
  enum class Kind { zero, l1, indicator };

  Kind kind = Kind::zero;
  double lambda = 0.0;  ///< l1 weight

  static CompositeTerm zero() { return {}; }
  static CompositeTerm l1(double lambda);
  /// Indicator of the feasible set; zero on Q, the set itself does the work.
  static CompositeTerm indicator() { return {Kind::indicator, 0.0}; }

  double evaluate(const Point& x) const;
};

// ---------------------------------------------------------------------------
// Proximal setup
// ---------------------------------------------------------------------------

/// Norm, prox-function d, and feasible set.
///
/// euclidean: d(x) = 1/2 ||x - center||_2^2 on an all-space, box or simplex
///            set, 1-strongly convex w.r.t. the l2 norm.
/// entropy:   d(x) = ln n + sum x_i ln x_i on the simplex, 1-strongly convex
///            w.r.t. the l1 norm; center is the uniform vector.
class ProxSetup {
 public:
  enum class Kind { euclidean, entropy };

  static ProxSetup euclidean(Point center, SetDescriptor set = AllSpace{});
  static ProxSetup entropy(Eigen::Index n);

  Kind kind() const noexcept { return kind_; }
  const NormPair& norms() const noexcept { return norms_; }
  const SetDescriptor& set() const noexcept { return set_; }
  const Point& center() const noexcept { return center_; }
  Eigen::Index dim() const noexcept { return center_.size(); }

  double d(const Point& x) const;
  DualVector grad_d(const Point& x) const;
  /// V[x](y) = d(y) - d(x) - <grad d(x), y - x>
  double bregman(const Point& x, const Point& y) const;

  /// d(. - shift) for euclidean setups; entropy throws UnsupportedSetup.
  ProxSetup recentered(const Point& new_center) const;

 private:
  ProxSetup(Kind kind, Point center, SetDescriptor set, NormPair norms)
      : kind_(kind), center_(std::move(center)), set_(std::move(set)), norms_(norms) {}

  Kind kind_;
  Point center_;
  SetDescriptor set_;
  NormPair norms_;
};

/// Objective of the composite prox-mapping:
///   <linear, x> + d(x) + composite_weight * h(x) + constant.
struct ProxModel {
  DualVector linear;
  double composite_weight = 0.0;
  double constant = 0.0;
};

struct ProxResult {
  Point point;
  double delta_pc = 0.0;  ///< requested controlled error
  double delta_pu = 0.0;  ///< injected uncontrolled error
  double objective_value = 0.0;
  /// True when `point` is the exact minimizer (no injection, closed form or
  /// finished refinement).
  bool exact = false;
};

double prox_objective(const ProxSetup& setup, const CompositeTerm& h,
                      const ProxModel& model, const Point& x);

/// Closed-form Euclidean prox for all-space/box sets with h in {zero, l1}.
ProxResult euclidean_prox(const ProxSetup& setup, const CompositeTerm& h,
                          const ProxModel& model);

/// Closed-form entropy prox on the simplex: x_i = softmax(-linear)_i.
ProxResult entropy_prox_simplex(const ProxModel& model);

struct ProxSolveOptions {
  int max_iterations = 200;
};

/// Inexact composite prox-mapping. Dispatches to a closed form where one
/// exists; the Euclidean simplex case runs a threshold refinement loop until
/// the certificate residual is within delta_pc. With delta_pu_injection > 0
/// the exact answer is moved along the most violating direction until the
/// certificate residual equals -delta_pu_injection.
ProxResult solve_prox(const ProxSetup& setup, const CompositeTerm& h,
                      const ProxModel& model, double delta_pc,
                      double delta_pu_injection = 0.0,
                      const ProxSolveOptions& options = {});

/// Subgradient p of weight*h at x chosen to make g + grad d(x) + p as small
/// as possible where h is not differentiable.
DualVector composite_subgradient(const ProxSetup& setup, const CompositeTerm& h,
                                 const ProxModel& model, const Point& x);

/// min over the certificate domain of <g + grad d(x) + p, u - x>. The domain
/// is Q for box and simplex sets and the probe ball for all-space. A value of
/// -s means the prox-mapping certificate holds with slack s.
double certificate_residual(const ProxSetup& setup, const CompositeTerm& h,
                            const ProxModel& model, const Point& x);

struct CertificateCheck {
  bool ok = false;
  double worst_violation = 0.0;  ///< min over probes of the certificate LHS
};

CertificateCheck verify_certificate(const ProxSetup& setup, const CompositeTerm& h,
                                    const ProxModel& model, const Point& x,
                                    double slack, std::span<const Point> probes,
                                    const Tolerance& tol = kDefaultTolerance);

/// Psi(y) - Psi(x) - V[x](y) + slack, with Psi the prox objective.
double lemma1_gap(const ProxSetup& setup, const CompositeTerm& h,
                  const ProxModel& model, const Point& x, const Point& y,
                  double slack);

/// Exact min of the prox objective. The entropy case is evaluated in the log
/// domain, so it stays finite when the minimizer underflows.
double prox_min_value(const ProxSetup& setup, const CompositeTerm& h,
                      const ProxModel& model);

}  // namespace uigm
