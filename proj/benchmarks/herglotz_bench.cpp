#include <benchmark/benchmark.h>

#include <random>

#include "mif/herglotz.hpp"
#include "mif/reconstruct.hpp"

namespace {

using namespace mif;

// n interlacing pairs on the positive axis, steps in [0.1, 1].
HerglotzProductForm product_of_size(int n) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> step(0.1, 1.0);
  std::vector<double> a, b;
  double x = 0.05;
  for (int i = 0; i < n; ++i) {
    x += step(rng);
    a.push_back(x);
    x += step(rng);
    b.push_back(x);
  }
  return HerglotzProductForm(1.0, InterlacingPairs::anchored(Indexing::TwoSided, a, b));
}

void BM_EvalProduct(benchmark::State& state) {
  const auto f = product_of_size(static_cast<int>(state.range(0)));
  const complex z(0.3, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(eval_product(f, z));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_EvalProduct)->RangeMultiplier(4)->Range(4, 4096)->Complexity(benchmark::oN);

void BM_ProductToExpansion(benchmark::State& state) {
  const auto f = product_of_size(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(product_to_expansion(f));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ProductToExpansion)->RangeMultiplier(4)->Range(4, 1024)->Complexity();

void BM_ReconstructFull(benchmark::State& state) {
  const auto f = product_of_size(static_cast<int>(state.range(0)));
  const auto d = dataset_from_product(f, ValueAtZero{f.c()});
  for (auto _ : state) benchmark::DoNotOptimize(reconstruct_full(d));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ReconstructFull)->RangeMultiplier(4)->Range(4, 1024)->Complexity();

void BM_MixedReconstruct(benchmark::State& state) {
  const auto f = product_of_size(static_cast<int>(state.range(0)));
  auto d = dataset_from_product(f, ValueAtZero{f.c()});
  // Keep masses on every other index.
  const auto zeros = f.pairs().zeros();
  for (std::size_t i = 1; i < zeros.size(); i += 2) {
    const int n = d.first_index + static_cast<int>(i);
    d.masses.erase(n);
    d.known_second[n] = zeros[i];
  }
  for (auto _ : state) benchmark::DoNotOptimize(mixed_reconstruct(d));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_MixedReconstruct)->RangeMultiplier(4)->Range(4, 1024)->Complexity();

}  // namespace
