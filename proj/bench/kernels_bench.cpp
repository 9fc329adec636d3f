#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "uigm/kernels.hpp"

namespace {

std::vector<double> random_vector(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = dist(rng);
  return v;
}

template <double (*Dot)(std::span<const double>, std::span<const double>)>
void BM_dot(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_vector(n, 1);
  const auto b = random_vector(n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(Dot(a, b));
  state.SetBytesProcessed(state.iterations() * static_cast<long>(2 * n * sizeof(double)));
}

template <double (*Lse)(std::span<const double>)>
void BM_log_sum_exp(benchmark::State& state) {
  const auto a = random_vector(static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(Lse(a));
}

template <void (*Softmax)(std::span<const double>, std::span<double>)>
void BM_softmax_neg(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto v = random_vector(n, 4);
  std::vector<double> out(n);
  for (auto _ : state) {
    Softmax(v, out);
    benchmark::DoNotOptimize(out.data());
  }
}

template <void (*Matvec)(std::span<const double>, std::span<const double>, std::span<double>)>
void BM_matvec(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto m = random_vector(n * n, 5);
  const auto x = random_vector(n, 6);
  std::vector<double> out(n);
  for (auto _ : state) {
    Matvec(m, x, out);
    benchmark::DoNotOptimize(out.data());
  }
}

}  // namespace

BENCHMARK(BM_dot<uigm::kernels::serial::dot>)->Name("dot/serial")->Range(1 << 10, 1 << 22);
BENCHMARK(BM_dot<uigm::kernels::dot>)->Name("dot/omp")->Range(1 << 10, 1 << 22);
BENCHMARK(BM_log_sum_exp<uigm::kernels::serial::log_sum_exp>)
    ->Name("log_sum_exp/serial")->Range(1 << 10, 1 << 20);
BENCHMARK(BM_log_sum_exp<uigm::kernels::log_sum_exp>)
    ->Name("log_sum_exp/omp")->Range(1 << 10, 1 << 20);
BENCHMARK(BM_softmax_neg<uigm::kernels::serial::softmax_neg>)
    ->Name("softmax_neg/serial")->Range(1 << 10, 1 << 20);
BENCHMARK(BM_softmax_neg<uigm::kernels::softmax_neg>)
    ->Name("softmax_neg/omp")->Range(1 << 10, 1 << 20);
BENCHMARK(BM_matvec<uigm::kernels::serial::matvec>)->Name("matvec/serial")->Range(64, 2048);
BENCHMARK(BM_matvec<uigm::kernels::matvec>)->Name("matvec/omp")->Range(64, 2048);

BENCHMARK_MAIN();
