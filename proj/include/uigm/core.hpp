#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace uigm {

/// Element of the primal space E.
using Point = Eigen::VectorXd;
/// Element of the dual space E*. Kept as a distinct name so signatures say
/// which side of the pairing a vector lives on.
using DualVector = Eigen::VectorXd;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Precondition broken by the caller (dimension mismatch, bad argument).
class ContractError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class UnsupportedSetup : public Error {
 public:
  using Error::Error;
};

class ProxFailure : public Error {
 public:
  ProxFailure(const std::string& what, double best_residual)
      : Error(what), best_residual_(best_residual) {}
  double best_residual() const noexcept { return best_residual_; }

 private:
  double best_residual_;
};

class LineSearchDivergence : public Error {
 public:
  using Error::Error;
};

class InitializationDivergence : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Tolerances
// ---------------------------------------------------------------------------

/// Absolute + relative slack used for every inequality check in the library.
struct Tolerance {
  double abs = 1e-9;
  double rel = 1e-9;

  double slack(double a, double b) const noexcept;
  /// a <= b up to tolerance.
  bool leq(double a, double b) const noexcept { return a <= b + slack(a, b); }
  bool geq(double a, double b) const noexcept { return leq(b, a); }
};

inline constexpr Tolerance kDefaultTolerance{};

// ---------------------------------------------------------------------------
// Norms
// ---------------------------------------------------------------------------

enum class NormKind {
  l2,  ///< Euclidean primal norm, Euclidean dual norm.
  l1,  ///< l1 primal norm, l-infinity dual norm.
};

/// Primal norm, its dual, and the canonical pairing between E* and E.
class NormPair {
 public:
  explicit NormPair(NormKind kind = NormKind::l2) : kind_(kind) {}

  NormKind kind() const noexcept { return kind_; }
  double primal(const Point& x) const;
  double dual(const DualVector& s) const;
  double pairing(const DualVector& s, const Point& x) const;

 private:
  NormKind kind_;
};

/// <s, x>. Throws ContractError on dimension mismatch.
double dual_pairing(const DualVector& s, const Point& x);

void require_same_dim(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                      const char* what);
bool all_finite(const Eigen::VectorXd& v);

// ---------------------------------------------------------------------------
// Solver configuration
// ---------------------------------------------------------------------------

struct SolverConfig {
  double epsilon = 1e-6;
  double L0 = 1.0;
  double p = 2.0;
  double delta_pu = 0.0;
  std::size_t max_outer = 1000;
  int max_inner = 60;
  std::optional<double> D;        ///< Upper bound on d(x*); enables the primal-dual stop.
  std::optional<double> d_bound;  ///< Upper bound on d(x*) used only for the bound certificate.
  std::optional<double> mu;
  std::optional<double> Omega;
  std::optional<double> R0_sq;
  bool keep_trace = true;  ///< false keeps only the latest trace record

  /// Throws ConfigError when an invariant does not hold.
  void validate() const;
};

}  // namespace uigm
