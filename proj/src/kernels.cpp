#include "uigm/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "uigm/core.hpp"

namespace uigm::kernels {

namespace {

std::size_t block_count(std::size_t n) { return (n + kBlock - 1) / kBlock; }

// Runs `partial(lo, hi)` on every block in parallel and folds the partials in
// block order with `combine`.
template <class Partial, class Combine>
double blocked_reduce(std::size_t n, double init, Partial partial,
                      Combine combine) {
  const std::size_t nb = block_count(n);
  if (nb <= 1) return n == 0 ? init : combine(init, partial(0, n));
  std::vector<double> parts(nb);
  const auto nbl = static_cast<long>(nb);
#pragma omp parallel for schedule(static)
  for (long b = 0; b < nbl; ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kBlock;
    const std::size_t hi = std::min(n, lo + kBlock);
    parts[static_cast<std::size_t>(b)] = partial(lo, hi);
  }
  double acc = init;
  for (double v : parts) acc = combine(acc, v);
  return acc;
}

void check_len(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw ContractError(std::string("kernel length mismatch in ") + what);
}

constexpr auto plus = [](double a, double b) { return a + b; };
constexpr auto maxop = [](double a, double b) { return std::max(a, b); };

}  // namespace

double dot(std::span<const double> a, std::span<const double> b) {
  check_len(a.size(), b.size(), "dot");
  return blocked_reduce(a.size(), 0.0,
                        [&](std::size_t lo, std::size_t hi) {
                          double s = 0.0;
                          for (std::size_t i = lo; i < hi; ++i) s += a[i] * b[i];
                          return s;
                        },
                        plus);
}

double sum(std::span<const double> a) {
  return blocked_reduce(a.size(), 0.0,
                        [&](std::size_t lo, std::size_t hi) {
                          double s = 0.0;
                          for (std::size_t i = lo; i < hi; ++i) s += a[i];
                          return s;
                        },
                        plus);
}

double squared_norm(std::span<const double> a) { return dot(a, a); }

double abs_sum(std::span<const double> a) {
  return blocked_reduce(a.size(), 0.0,
                        [&](std::size_t lo, std::size_t hi) {
                          double s = 0.0;
                          for (std::size_t i = lo; i < hi; ++i) s += std::abs(a[i]);
                          return s;
                        },
                        plus);
}

double max_abs(std::span<const double> a) {
  return blocked_reduce(a.size(), 0.0,
                        [&](std::size_t lo, std::size_t hi) {
                          double m = 0.0;
                          for (std::size_t i = lo; i < hi; ++i)
                            m = std::max(m, std::abs(a[i]));
                          return m;
                        },
                        maxop);
}

double log_sum_exp(std::span<const double> a) {
  if (a.empty()) return -std::numeric_limits<double>::infinity();
  const double mx = blocked_reduce(
      a.size(), -std::numeric_limits<double>::infinity(),
      [&](std::size_t lo, std::size_t hi) {
        double m = -std::numeric_limits<double>::infinity();
        for (std::size_t i = lo; i < hi; ++i) m = std::max(m, a[i]);
        return m;
      },
      maxop);
  const double s = blocked_reduce(a.size(), 0.0,
                                  [&](std::size_t lo, std::size_t hi) {
                                    double t = 0.0;
                                    for (std::size_t i = lo; i < hi; ++i)
                                      t += std::exp(a[i] - mx);
                                    return t;
                                  },
                                  plus);
  return mx + std::log(s);
}

void axpby(double alpha, std::span<const double> a, double beta,
           std::span<const double> b, std::span<double> out) {
  check_len(a.size(), b.size(), "axpby");
  check_len(a.size(), out.size(), "axpby");
  const auto n = static_cast<long>(a.size());
#pragma omp parallel for schedule(static) if (n > static_cast<long>(kBlock))
  for (long i = 0; i < n; ++i) out[i] = alpha * a[i] + beta * b[i];
}

void soft_threshold_clip(std::span<const double> v, double level,
                         std::span<const double> lo, std::span<const double> hi,
                         std::span<double> out) {
  check_len(v.size(), out.size(), "soft_threshold_clip");
  if (!lo.empty()) check_len(v.size(), lo.size(), "soft_threshold_clip");
  if (!hi.empty()) check_len(v.size(), hi.size(), "soft_threshold_clip");
  const auto n = static_cast<long>(v.size());
#pragma omp parallel for schedule(static) if (n > static_cast<long>(kBlock))
  for (long i = 0; i < n; ++i) {
    double t = soft_threshold(v[i], level);
    if (!lo.empty()) t = std::max(t, lo[i]);
    if (!hi.empty()) t = std::min(t, hi[i]);
    out[i] = t;
  }
}

void softmax_neg(std::span<const double> v, std::span<double> out) {
  check_len(v.size(), out.size(), "softmax_neg");
  const auto n = static_cast<long>(v.size());
  double mn = std::numeric_limits<double>::infinity();
  for (double t : v) mn = std::min(mn, t);
#pragma omp parallel for schedule(static) if (n > static_cast<long>(kBlock))
  for (long i = 0; i < n; ++i) out[i] = std::exp(mn - v[i]);
  const double s = sum(std::span<const double>(out.data(), out.size()));
#pragma omp parallel for schedule(static) if (n > static_cast<long>(kBlock))
  for (long i = 0; i < n; ++i) out[i] /= s;
}

void matvec(std::span<const double> m, std::span<const double> x,
            std::span<double> out) {
  const std::size_t n = x.size();
  check_len(m.size(), n * n, "matvec");
  check_len(out.size(), n, "matvec");
  const auto nl = static_cast<long>(n);
#pragma omp parallel for schedule(static) if (nl >= 64)
  for (long r = 0; r < nl; ++r) {
    const double* row = m.data() + static_cast<std::size_t>(r) * n;
    double s = 0.0;
    for (std::size_t c = 0; c < n; ++c) s += row[c] * x[c];
    out[r] = s;
  }
}

void hadamard(std::span<const double> d, std::span<const double> x,
              std::span<double> out) {
  check_len(d.size(), x.size(), "hadamard");
  check_len(d.size(), out.size(), "hadamard");
  const auto n = static_cast<long>(d.size());
#pragma omp parallel for schedule(static) if (n > static_cast<long>(kBlock))
  for (long i = 0; i < n; ++i) out[i] = d[i] * x[i];
}

// ---------------------------------------------------------------------------
// Serial reference
// ---------------------------------------------------------------------------

namespace serial {

double dot(std::span<const double> a, std::span<const double> b) {
  check_len(a.size(), b.size(), "serial::dot");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double sum(std::span<const double> a) {
  double s = 0.0;
  for (double v : a) s += v;
  return s;
}

double squared_norm(std::span<const double> a) { return dot(a, a); }

double abs_sum(std::span<const double> a) {
  double s = 0.0;
  for (double v : a) s += std::abs(v);
  return s;
}

double max_abs(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

double log_sum_exp(std::span<const double> a) {
  if (a.empty()) return -std::numeric_limits<double>::infinity();
  double mx = a[0];
  for (double v : a) mx = std::max(mx, v);
  double s = 0.0;
  for (double v : a) s += std::exp(v - mx);
  return mx + std::log(s);
}

void axpby(double alpha, std::span<const double> a, double beta,
           std::span<const double> b, std::span<double> out) {
  check_len(a.size(), b.size(), "serial::axpby");
  check_len(a.size(), out.size(), "serial::axpby");
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = alpha * a[i] + beta * b[i];
}

void soft_threshold_clip(std::span<const double> v, double level,
                         std::span<const double> lo, std::span<const double> hi,
                         std::span<double> out) {
  check_len(v.size(), out.size(), "serial::soft_threshold_clip");
  for (std::size_t i = 0; i < v.size(); ++i) {
    double t = soft_threshold(v[i], level);
    if (!lo.empty()) t = std::max(t, lo[i]);
    if (!hi.empty()) t = std::min(t, hi[i]);
    out[i] = t;
  }
}

void softmax_neg(std::span<const double> v, std::span<double> out) {
  check_len(v.size(), out.size(), "serial::softmax_neg");
  double mn = std::numeric_limits<double>::infinity();
  for (double t : v) mn = std::min(mn, t);
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = std::exp(mn - v[i]);
    s += out[i];
  }
  for (double& o : out) o /= s;
}

void matvec(std::span<const double> m, std::span<const double> x,
            std::span<double> out) {
  const std::size_t n = x.size();
  check_len(m.size(), n * n, "serial::matvec");
  check_len(out.size(), n, "serial::matvec");
  for (std::size_t r = 0; r < n; ++r) {
    double s = 0.0;
    for (std::size_t c = 0; c < n; ++c) s += m[r * n + c] * x[c];
    out[r] = s;
  }
}

void hadamard(std::span<const double> d, std::span<const double> x,
              std::span<double> out) {
  check_len(d.size(), x.size(), "serial::hadamard");
  check_len(d.size(), out.size(), "serial::hadamard");
  for (std::size_t i = 0; i < d.size(); ++i) out[i] = d[i] * x[i];
}

}  // namespace serial
}  // namespace uigm::kernels
