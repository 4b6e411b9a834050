#include <random>

#include <benchmark/benchmark.h>

#include "decstab/generator.hpp"
#include "decstab/matrix_analysis.hpp"

namespace {

decstab::Matrix random_matrix(std::uint64_t seed, decstab::Index n) {
  std::mt19937_64 rng(seed);
  decstab::Matrix m(n, n);
  for (decstab::Index i = 0; i < n; ++i) {
    for (decstab::Index j = 0; j < n; ++j) {
      m(i, j) = decstab::uniform(rng, -5.0, 5.0);
    }
  }
  return m;
}

void HMatrixCertificate(benchmark::State& state) {
  std::mt19937_64 rng(7);
  const auto a =
      decstab::random_hurwitz_h_matrix(rng, state.range(0), true);
  for (auto _ : state) {
    auto cert = decstab::h_matrix_certificate(a);
    benchmark::DoNotOptimize(cert);
  }
}
BENCHMARK(HMatrixCertificate)->RangeMultiplier(4)->Range(4, 256);

void MatrixMeasure1(benchmark::State& state) {
  const auto a = random_matrix(11, state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(decstab::matrix_measure_1(a));
  }
}
BENCHMARK(MatrixMeasure1)->RangeMultiplier(4)->Range(4, 256);

void SpectralReport(benchmark::State& state) {
  const auto a = random_matrix(13, state.range(0));
  for (auto _ : state) {
    auto rep = decstab::spectral_report(a);
    benchmark::DoNotOptimize(rep);
  }
}
BENCHMARK(SpectralReport)->RangeMultiplier(4)->Range(4, 64);

}  // namespace
