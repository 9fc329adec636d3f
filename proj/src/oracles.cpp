#include "uigm/oracles.hpp"

#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "uigm/kernels.hpp"

namespace uigm {

namespace {

std::span<const double> view(const Eigen::VectorXd& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}
std::span<double> view(Eigen::VectorXd& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

class PowerObjective final : public InexactOracle {
 public:
  PowerObjective(DualVector a, double b, double nu, const NormPair& norms)
      : a_(std::move(a)), b_(b), nu_(nu) {
    info_.nu = nu_;
    info_.M = std::pow(2.0, 1.0 - nu_) * std::pow(norms.dual(a_), 1.0 + nu_);
  }

  Eigen::Index dim() const override { return a_.size(); }

  OracleReply query(const Point& x, double /*delta_c*/) const override {
    const double t = dual_pairing(a_, x) - b_;
    const double at = std::abs(t);
    OracleReply r;
    r.value = std::pow(at, 1.0 + nu_) / (1.0 + nu_);
    double slope = 0.0;
    if (t != 0.0) slope = (t > 0 ? 1.0 : -1.0) * std::pow(at, nu_);
    r.subgrad = slope * a_;
    return r;
  }

  std::optional<HoelderInfo> smoothness() const override { return info_; }

  double reference_value(const Point& x) const override {
    const double t = std::abs(dual_pairing(a_, x) - b_);
    return std::pow(t, 1.0 + nu_) / (1.0 + nu_);
  }

 private:
  DualVector a_;
  double b_;
  double nu_;
  HoelderInfo info_;
};

class DenseQuadratic final : public InexactOracle {
 public:
  DenseQuadratic(const Eigen::MatrixXd& Q, DualVector c, double r)
      : n_(Q.rows()), c_(std::move(c)), r_(r) {
    if (Q.rows() != Q.cols()) throw ContractError("quadratic: Q must be square");
    if (Q.rows() != c_.size()) throw ContractError("quadratic: Q and c disagree in size");
    if (!Q.isApprox(Q.transpose(), 1e-12)) throw DomainError("quadratic: Q must be symmetric");
    rows_.resize(static_cast<std::size_t>(n_ * n_));
    for (Eigen::Index i = 0; i < n_; ++i)
      for (Eigen::Index j = 0; j < n_; ++j)
        rows_[static_cast<std::size_t>(i * n_ + j)] = Q(i, j);
    info_.nu = 1.0;
    info_.M = largest_eigenvalue_psd(Q);
  }

  Eigen::Index dim() const override { return n_; }

  OracleReply query(const Point& x, double /*delta_c*/) const override {
    require_same_dim(c_, x, "quadratic query");
    Eigen::VectorXd qx(n_);
    kernels::matvec(rows_, view(x), view(qx));
    OracleReply r;
    r.value = 0.5 * kernels::dot(view(qx), view(x)) + kernels::dot(view(c_), view(x)) + r_;
    r.subgrad = qx + c_;
    return r;
  }

  std::optional<HoelderInfo> smoothness() const override { return info_; }

  double reference_value(const Point& x) const override { return query(x, 1.0).value; }

 private:
  Eigen::Index n_;
  std::vector<double> rows_;
  DualVector c_;
  double r_;
  HoelderInfo info_;
};

class DiagonalQuadratic final : public InexactOracle {
 public:
  DiagonalQuadratic(Eigen::VectorXd diag, DualVector c, double r)
      : diag_(std::move(diag)), c_(std::move(c)), r_(r) {
    require_same_dim(diag_, c_, "diagonal quadratic");
    if (diag_.size() > 0 && diag_.minCoeff() < 0.0)
      throw DomainError("diagonal quadratic: negative curvature");
    info_.nu = 1.0;
    info_.M = diag_.size() > 0 ? diag_.maxCoeff() : 0.0;
  }

  Eigen::Index dim() const override { return diag_.size(); }

  OracleReply query(const Point& x, double /*delta_c*/) const override {
    require_same_dim(c_, x, "diagonal quadratic query");
    Eigen::VectorXd qx(x.size());
    kernels::hadamard(view(diag_), view(x), view(qx));
    OracleReply r;
    r.value = 0.5 * kernels::dot(view(qx), view(x)) + kernels::dot(view(c_), view(x)) + r_;
    r.subgrad = qx + c_;
    return r;
  }

  std::optional<HoelderInfo> smoothness() const override { return info_; }

  double reference_value(const Point& x) const override { return query(x, 1.0).value; }

 private:
  Eigen::VectorXd diag_;
  DualVector c_;
  double r_;
  HoelderInfo info_;
};

/// Unit vector in the dual norm pointing along `g`, or along the all-ones
/// direction when g vanishes.
DualVector dual_unit(const DualVector& g, const NormPair& norms) {
  const double ng = norms.dual(g);
  if (ng > 0.0) {
    if (norms.kind() == NormKind::l2) return g / ng;
    return g.unaryExpr([](double v) { return v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0); });
  }
  DualVector e = DualVector::Ones(g.size());
  return e / norms.dual(e);
}

class NoisyOracle final : public InexactOracle {
 public:
  NoisyOracle(std::shared_ptr<const InexactOracle> base, NoiseSpec spec,
              const NormPair& norms)
      : base_(std::move(base)), spec_(std::move(spec)), norms_(norms) {
    if (spec_.delta1_bar < 0 || spec_.delta2_bar < 0)
      throw ContractError("noise bounds must be nonnegative");
    if (!(spec_.diameter > 0)) throw ContractError("noise diameter must be positive");
    if (spec_.anchor.size() == 0) spec_.anchor = Point::Zero(base_->dim());
    require_same_dim(spec_.anchor, Point::Zero(base_->dim()), "noise anchor");
  }

  Eigen::Index dim() const override { return base_->dim(); }

  OracleReply query(const Point& x, double delta_c) const override {
    OracleReply r = base_->query(x, delta_c);
    switch (spec_.mode) {
      case NoiseMode::zero:
        break;
      case NoiseMode::fixed_direction: {
        r.value -= spec_.delta1_bar;
        if (spec_.delta2_bar > 0.0)
          r.subgrad += spec_.delta2_bar * dual_unit(DualVector::Zero(x.size()), norms_);
        break;
      }
      case NoiseMode::adversarial_sign: {
        const double progress = dual_pairing(r.subgrad, x - spec_.anchor);
        if (progress >= 0.0) r.value -= spec_.delta1_bar;
        if (spec_.delta2_bar > 0.0) r.subgrad -= spec_.delta2_bar * dual_unit(r.subgrad, norms_);
        break;
      }
    }
    return r;
  }

  double delta_u() const override { return base_->delta_u() + spec_.delta_u(); }
  std::optional<HoelderInfo> smoothness() const override { return base_->smoothness(); }
  double reference_value(const Point& x) const override { return base_->reference_value(x); }

 private:
  std::shared_ptr<const InexactOracle> base_;
  NoiseSpec spec_;
  NormPair norms_;
};

}  // namespace

double hoelder_constant(double delta_c, const HoelderInfo& info) {
  if (!(delta_c > 0.0)) throw DomainError("hoelder_constant: delta_c must be positive");
  if (!(info.nu >= 0.0 && info.nu <= 1.0)) throw DomainError("hoelder_constant: nu outside [0,1]");
  if (!(info.M > 0.0)) throw DomainError("hoelder_constant: M must be positive");
  const double e = (1.0 - info.nu) / (1.0 + info.nu);
  const double mpow = std::pow(info.M, 2.0 / (1.0 + info.nu));
  if (e == 0.0) return mpow;
  return std::pow(e / (2.0 * delta_c), e) * mpow;
}

std::shared_ptr<const InexactOracle> make_power_objective(const DualVector& a, double b,
                                                          double nu, const NormPair& norms) {
  if (!(nu >= 0.0 && nu <= 1.0)) throw DomainError("power objective: nu outside [0,1]");
  if (a.size() == 0 || a.isZero(0.0)) throw DomainError("power objective: a must be nonzero");
  return std::make_shared<PowerObjective>(a, b, nu, norms);
}

std::shared_ptr<const InexactOracle> make_quadratic_objective(const Eigen::MatrixXd& Q,
                                                              const DualVector& c, double r) {
  return std::make_shared<DenseQuadratic>(Q, c, r);
}

std::shared_ptr<const InexactOracle> make_diagonal_quadratic(const Eigen::VectorXd& diag,
                                                             const DualVector& c, double r) {
  return std::make_shared<DiagonalQuadratic>(diag, c, r);
}

double largest_eigenvalue_psd(const Eigen::MatrixXd& Q, double tol) {
  const Eigen::Index n = Q.rows();
  if (n == 0) return 0.0;

  // Dominant eigenvalue of `m` (by magnitude, with sign) via power iteration.
  auto dominant = [&](const Eigen::MatrixXd& m) {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = 1.0 + 1e-3 * static_cast<double>(i);
    v.normalize();
    double lambda = v.dot(m * v);
    for (int it = 0; it < 100000; ++it) {
      Eigen::VectorXd w = m * v;
      const double nw = w.norm();
      if (nw == 0.0) return 0.0;
      v = w / nw;
      const double next = v.dot(m * v);
      const bool done = std::abs(next - lambda) <= tol * std::max(1.0, std::abs(next));
      lambda = next;
      if (done) break;
    }
    return lambda;
  };

  const double top = dominant(Q);
  if (top < -tol) throw DomainError("quadratic: matrix is not positive semidefinite");
  // Shifted iteration finds the other end of the spectrum.
  const Eigen::MatrixXd shifted = top * Eigen::MatrixXd::Identity(n, n) - Q;
  const double spread = dominant(shifted);
  const double bottom = top - spread;
  if (bottom < -std::sqrt(tol) * std::max(1.0, top))
    throw DomainError("quadratic: matrix is not positive semidefinite");
  return std::max(top, bottom);
}

std::shared_ptr<const InexactOracle> with_noise(std::shared_ptr<const InexactOracle> base,
                                                const NoiseSpec& spec, const NormPair& norms) {
  if (!base) throw ContractError("with_noise: null base oracle");
  return std::make_shared<NoisyOracle>(std::move(base), spec, norms);
}

NoiseMode parse_noise_mode(const std::string& name) {
  if (name == "zero") return NoiseMode::zero;
  if (name == "fixed_direction") return NoiseMode::fixed_direction;
  if (name == "adversarial_sign") return NoiseMode::adversarial_sign;
  throw ConfigError("unknown noise mode '" + name + "'");
}

const char* to_string(NoiseMode mode) {
  switch (mode) {
    case NoiseMode::zero:
      return "zero";
    case NoiseMode::fixed_direction:
      return "fixed_direction";
    case NoiseMode::adversarial_sign:
      return "adversarial_sign";
  }
  return "zero";
}

// ---------------------------------------------------------------------------

OracleCheck check_oracle_inequality(const InexactOracle& oracle, const Point& x,
                                    const Point& y, double delta_c, double L,
                                    const NormPair& norms, const Tolerance& tol) {
  require_same_dim(x, y, "check_oracle_inequality");
  const OracleReply at_y = oracle.query(y, delta_c);
  const double fx = oracle.reference_value(x);
  const Point diff = x - y;
  const double gap = fx - at_y.value - dual_pairing(at_y.subgrad, diff);
  const double r = norms.primal(diff);
  const double envelope = 0.5 * L * r * r + delta_c + oracle.delta_u();
  OracleCheck out;
  out.lower_ok = tol.geq(gap, 0.0);
  out.upper_ok = tol.leq(gap, envelope);
  out.slack = envelope - gap;
  return out;
}

}  // namespace uigm
