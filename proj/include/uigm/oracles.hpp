#pragma once

#include <memory>

#include "uigm/oracle.hpp"

namespace uigm {

/// L(delta_c) = [ (1-nu)/(1+nu) / (2 delta_c) ]^((1-nu)/(1+nu)) * M^(2/(1+nu)).
/// The factor ((1-nu)/(1+nu))^((1-nu)/(1+nu)) is taken as 1 at nu = 1.
double hoelder_constant(double delta_c, const HoelderInfo& info);

/// f(x) = |<a,x> - b|^(1+nu) / (1+nu). Reports M = 2^(1-nu) ||a||_*^(1+nu).
/// At the kink (nu = 0, <a,x> = b) the returned subgradient is zero.
std::shared_ptr<const InexactOracle> make_power_objective(
    const DualVector& a, double b, double nu, const NormPair& norms = NormPair{});

/// f(x) = 1/2 <Qx, x> + <c, x> + r. M is the largest eigenvalue of Q, found by
/// power iteration; a negative eigenvalue raises DomainError.
std::shared_ptr<const InexactOracle> make_quadratic_objective(
    const Eigen::MatrixXd& Q, const DualVector& c, double r = 0.0);

/// Same family with diagonal Q given by its diagonal; O(n) per query.
std::shared_ptr<const InexactOracle> make_diagonal_quadratic(
    const Eigen::VectorXd& diag, const DualVector& c, double r = 0.0);

/// Largest eigenvalue of a symmetric matrix by power iteration (relative
/// change below `tol`). Throws DomainError if Q has an eigenvalue below
/// -tol * lambda_max.
double largest_eigenvalue_psd(const Eigen::MatrixXd& Q, double tol = 1e-10);

enum class NoiseMode {
  zero,
  /// Value shifted down by delta1, subgradient shifted by delta2 along a fixed
  /// unit direction.
  fixed_direction,
  /// Value lowered by delta1 where <g(x), x - anchor> >= 0, so overshoot
  /// past the anchor looks better; exact elsewhere. The value error stays in
  /// [-delta1, 0], which keeps the lower side of the oracle inequality.
  /// Subgradient shrunk by delta2 along its own direction.
  adversarial_sign,
};

struct NoiseSpec {
  double delta1_bar = 0.0;  ///< bound on |f_bar - f|
  double delta2_bar = 0.0;  ///< bound on ||g_bar - g||_*
  double diameter = 1.0;    ///< diameter of the region the wrapper is used on
  NoiseMode mode = NoiseMode::zero;
  /// Reference point for adversarial_sign; empty means the origin.
  Point anchor;

  double delta_u() const { return delta1_bar + delta2_bar * diameter; }
};

/// Deterministic noise on top of a noise-free oracle. The wrapped oracle
/// reports delta_u = delta1_bar + delta2_bar * diameter.
std::shared_ptr<const InexactOracle> with_noise(
    std::shared_ptr<const InexactOracle> base, const NoiseSpec& spec,
    const NormPair& norms = NormPair{});

NoiseMode parse_noise_mode(const std::string& name);
const char* to_string(NoiseMode mode);

}  // namespace uigm
