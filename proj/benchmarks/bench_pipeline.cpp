#include <benchmark/benchmark.h>

#include "decstab/generator.hpp"
#include "decstab/pipeline.hpp"

namespace {

void BuildDecomposition(benchmark::State& state) {
  decstab::GeneratorOptions opt;
  opt.n = state.range(0);
  opt.m = opt.n / 2;
  const auto plant = decstab::random_certified_plant(3, opt);
  for (auto _ : state) {
    auto dec = decstab::build_decomposition(plant);
    benchmark::DoNotOptimize(dec);
  }
}
BENCHMARK(BuildDecomposition)->RangeMultiplier(2)->Range(4, 64);

void ClosedLoopSteps(benchmark::State& state) {
  decstab::GeneratorOptions opt;
  opt.n = 6;
  opt.m = 2;
  const auto plant = decstab::random_certified_plant(5, opt);
  const auto analysis = decstab::analyze_plant(plant);
  const auto synth = decstab::synthesize_pipeline(analysis);
  const decstab::Vector x0 = decstab::Vector::Ones(6);
  const double dt = 1e-3;
  const double t_end = state.range(0) * dt;
  for (auto _ : state) {
    auto traj = decstab::simulate_closed_loop(plant, synth.synthesis.schedule,
                                              x0, 0.0, t_end, dt);
    benchmark::DoNotOptimize(traj);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(ClosedLoopSteps)->RangeMultiplier(4)->Range(256, 16384);

void FullPipeline(benchmark::State& state) {
  decstab::GeneratorOptions opt;
  opt.n = 4;
  opt.m = 2;
  const auto plant = decstab::random_certified_plant(9, opt);
  for (auto _ : state) {
    const auto analysis = decstab::analyze_plant(plant);
    const auto synth = decstab::synthesize_pipeline(analysis);
    const auto sim = decstab::simulate_pipeline(analysis, synth);
    benchmark::DoNotOptimize(sim);
  }
}
BENCHMARK(FullPipeline);

}  // namespace
