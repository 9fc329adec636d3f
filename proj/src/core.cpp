#include "uigm/core.hpp"

#include <algorithm>
#include <cmath>
#include <span>

#include "uigm/kernels.hpp"

namespace uigm {

namespace {
std::span<const double> view(const Eigen::VectorXd& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}
}  // namespace

double Tolerance::slack(double a, double b) const noexcept {
  return abs + rel * std::max(std::abs(a), std::abs(b));
}

void require_same_dim(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                      const char* what) {
  if (a.size() != b.size()) {
    throw ContractError(std::string("dimension mismatch in ") + what + ": " +
                        std::to_string(a.size()) + " vs " +
                        std::to_string(b.size()));
  }
}

bool all_finite(const Eigen::VectorXd& v) { return v.allFinite(); }

double dual_pairing(const DualVector& s, const Point& x) {
  require_same_dim(s, x, "dual_pairing");
  return kernels::dot(view(s), view(x));
}

double NormPair::primal(const Point& x) const {
  switch (kind_) {
    case NormKind::l2:
      return std::sqrt(kernels::squared_norm(view(x)));
    case NormKind::l1:
      return kernels::abs_sum(view(x));
  }
  return 0.0;
}

double NormPair::dual(const DualVector& s) const {
  switch (kind_) {
    case NormKind::l2:
      return std::sqrt(kernels::squared_norm(view(s)));
    case NormKind::l1:
      return kernels::max_abs(view(s));
  }
  return 0.0;
}

double NormPair::pairing(const DualVector& s, const Point& x) const {
  return dual_pairing(s, x);
}

void SolverConfig::validate() const {
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  if (!(L0 > 0.0)) throw ConfigError("L0 must be positive");
  if (!(p >= 1.0 && p <= 2.0)) throw ConfigError("p must lie in [1, 2]");
  if (!(delta_pu >= 0.0)) throw ConfigError("delta_pu must be nonnegative");
  if (max_outer == 0) throw ConfigError("max_outer must be positive");
  if (max_inner <= 0) throw ConfigError("max_inner must be positive");
  auto positive = [](const std::optional<double>& v, const char* name) {
    if (v && !(*v > 0.0)) throw ConfigError(std::string(name) + " must be positive");
  };
  positive(D, "D");
  positive(d_bound, "d_bound");
  positive(mu, "mu");
  positive(Omega, "Omega");
  positive(R0_sq, "R0_sq");
}

}  // namespace uigm
