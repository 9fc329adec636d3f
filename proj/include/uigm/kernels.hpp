#pragma once

// Dense vector kernels used on the solver's hot path.
//
// Every kernel has an OpenMP implementation (namespace uigm::kernels) and a
// plain serial reference (namespace uigm::kernels::serial) that the tests
// compare against. Reductions split the input into fixed-size blocks whose
// partial results are combined in block order, so the parallel result does
// not depend on the number of threads.

#include <cstddef>
#include <span>

namespace uigm::kernels {

/// Block length for deterministic reductions.
inline constexpr std::size_t kBlock = 2048;

double dot(std::span<const double> a, std::span<const double> b);
double sum(std::span<const double> a);
double squared_norm(std::span<const double> a);
double abs_sum(std::span<const double> a);
double max_abs(std::span<const double> a);
/// log(sum_i exp(a_i)), stabilized by the maximum.
double log_sum_exp(std::span<const double> a);

/// out = alpha * a + beta * b
void axpby(double alpha, std::span<const double> a, double beta,
           std::span<const double> b, std::span<double> out);
/// out_i = clamp(soft_threshold(v_i, level), lo_i, hi_i); empty lo/hi means unbounded.
void soft_threshold_clip(std::span<const double> v, double level,
                         std::span<const double> lo, std::span<const double> hi,
                         std::span<double> out);
/// out = softmax(-v)
void softmax_neg(std::span<const double> v, std::span<double> out);
/// out = M * x for a row-major n x n matrix.
void matvec(std::span<const double> m, std::span<const double> x,
            std::span<double> out);
/// out_i = d_i * x_i
void hadamard(std::span<const double> d, std::span<const double> x,
              std::span<double> out);

namespace serial {

double dot(std::span<const double> a, std::span<const double> b);
double sum(std::span<const double> a);
double squared_norm(std::span<const double> a);
double abs_sum(std::span<const double> a);
double max_abs(std::span<const double> a);
double log_sum_exp(std::span<const double> a);
void axpby(double alpha, std::span<const double> a, double beta,
           std::span<const double> b, std::span<double> out);
void soft_threshold_clip(std::span<const double> v, double level,
                         std::span<const double> lo, std::span<const double> hi,
                         std::span<double> out);
void softmax_neg(std::span<const double> v, std::span<double> out);
void matvec(std::span<const double> m, std::span<const double> x,
            std::span<double> out);
void hadamard(std::span<const double> d, std::span<const double> x,
              std::span<double> out);

}  // namespace serial

/// Scalar soft-threshold: sign(v) * max(|v| - level, 0).
inline double soft_threshold(double v, double level) {
  if (v > level) return v - level;
  if (v < -level) return v + level;
  return 0.0;
}

}  // namespace uigm::kernels
