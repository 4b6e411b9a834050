#include "decstab/pipeline.hpp"

#include <doctest.h>

#include "decstab/generator.hpp"
#include "helpers.hpp"

using namespace decstab;
using namespace decstab::testing;

TEST_CASE("certified plants pass the whole pipeline") {
  std::mt19937_64 rng(501);
  for (int trial = 0; trial < 8; ++trial) {
    GeneratorOptions opt;
    opt.n = 2 + rng() % 5;
    opt.m = 1 + rng() % opt.n;
    const Plant p = random_certified_plant(rng(), opt);

    const AnalysisReport analysis = analyze_plant(p);
    REQUIRE(analysis.hypotheses_met);

    const SynthesisReport synth = synthesize_pipeline(analysis);
    CHECK(synth.key_condition_at_levels);
    CHECK(synth.synthesis.k_tilde.minCoeff() >= kGainFloor);
    CHECK(synth.synthesis.k_bar ==
          doctest::Approx(synth.synthesis.k_tilde.maxCoeff()));

    const SimulationReport sim = simulate_pipeline(analysis, synth);
    CHECK(sim.coppel.passed);
    if (sim.domination) CHECK(sim.domination->passed);
    CHECK(sim.margin_ok);
    CHECK(sim.key_condition_ok);
    REQUIRE(sim.fit.has_value());
    CHECK(sim.fit->rate < 0.0);
    CHECK(sim.final_ratio <= 1e-6);
    CHECK(sim.all_passed());
  }
}

TEST_CASE("square plant goes through the gamma = 0 path") {
  GeneratorOptions opt;
  opt.n = 3;
  opt.m = 3;
  const Plant p = random_certified_plant(77, opt);
  const AnalysisReport analysis = analyze_plant(p);
  REQUIRE(analysis.hypotheses_met);
  CHECK(analysis.dec.square_case);
  CHECK_FALSE(analysis.phase.has_zeros);

  const SynthesisReport synth = synthesize_pipeline(analysis);
  CHECK(synth.synthesis.gamma == 0.0);
  const SimulationReport sim = simulate_pipeline(analysis, synth);
  CHECK(sim.all_passed());
  CHECK(sim.x1_norm0 == 0.0);
}

TEST_CASE("ramp schedules hold the floor only after t_bar") {
  GeneratorOptions opt;
  opt.n = 4;
  opt.m = 2;
  const Plant p = random_certified_plant(909, opt);
  const AnalysisReport analysis = analyze_plant(p);
  SynthesisOptions sopt;
  sopt.kind = GainSchedule::Kind::kRamp;
  sopt.t_bar = 2.0;
  const SynthesisReport synth = synthesize_pipeline(analysis, sopt);
  CHECK(synth.synthesis.t_bar == 2.0);
  CHECK(synth.synthesis.schedule.at(0.0)(0) == doctest::Approx(0.0));
  const SimulationReport sim = simulate_pipeline(analysis, synth);
  CHECK(sim.all_passed());
}

TEST_CASE("hypothesis failures are refused with a named reason") {
  // CB = I has positive diagonal entries: not a Hurwitz H-matrix.
  const Plant id = validate_plant(Matrix::Zero(2, 2), Matrix::Identity(2, 2),
                                  Matrix::Identity(2, 2));
  const AnalysisReport a1 = analyze_plant(id);
  CHECK_FALSE(a1.cb_hurwitz_h);
  CHECK_FALSE(a1.hypotheses_met);
  CHECK_THROWS_WITH_AS(synthesize_pipeline(a1),
                       doctest::Contains("Hurwitz H-matrix"),
                       CertificateError);

  // Unstable zero dynamics: A11 = +1 in the reverse construction.
  Matrix a = Matrix::Zero(2, 2);
  a(0, 0) = 1.0;   // zero-dynamics block
  a(0, 1) = 0.5;
  a(1, 0) = 0.5;
  a(1, 1) = -1.0;
  const Matrix b = make_matrix({{0.0}, {-1.0}});  // CB = -1: Hurwitz H
  const Matrix c = make_matrix({{0.0, 1.0}});
  const AnalysisReport a2 = analyze_plant(validate_plant(a, b, c));
  CHECK(a2.cb_hurwitz_h);
  CHECK_FALSE(a2.phase.minimum_phase);
  CHECK_THROWS_WITH_AS(synthesize_pipeline(a2),
                       doctest::Contains("minimum phase"), CertificateError);
}

TEST_CASE("gain override below the floor is reported as failing") {
  GeneratorOptions opt;
  opt.n = 3;
  opt.m = 2;
  const Plant p = random_certified_plant(31337, opt);
  const AnalysisReport analysis = analyze_plant(p);
  const SynthesisReport synth = synthesize_pipeline(analysis);

  SimulationOptions sim_opt;
  sim_opt.gain_scale = 1e-3;  // far below every floor
  sim_opt.t_end = 10.0;       // fixed horizon; the run may grow
  try {
    const SimulationReport sim = simulate_pipeline(analysis, synth, sim_opt);
    CHECK_FALSE(sim.key_condition_ok);
    CHECK_FALSE(sim.all_passed());
    // The run still produced data for inspection.
    CHECK(sim.x.samples() > 0);
  } catch (const DivergenceError&) {
    // Equally acceptable: the underpowered loop can blow up within the
    // horizon; the caller is told where.
  }
}

TEST_CASE("zero initial state short-circuits the decay fit") {
  GeneratorOptions opt;
  opt.n = 3;
  opt.m = 1;
  const Plant p = random_certified_plant(2024, opt);
  const AnalysisReport analysis = analyze_plant(p);
  const SynthesisReport synth = synthesize_pipeline(analysis);
  SimulationOptions sim_opt;
  sim_opt.x0 = Vector::Zero(3);
  const SimulationReport sim = simulate_pipeline(analysis, synth, sim_opt);
  CHECK(sim.zero_initial_state);
  CHECK_FALSE(sim.fit.has_value());
  CHECK(sim.all_passed());
  CHECK(sim.x.norms_2.back() == 0.0);
}

TEST_CASE("transformed bookkeeping matches the scaling and transform") {
  GeneratorOptions opt;
  opt.n = 5;
  opt.m = 2;
  const Plant p = random_certified_plant(555, opt);
  const AnalysisReport analysis = analyze_plant(p);
  const SynthesisReport synth = synthesize_pipeline(analysis);
  SimulationOptions sim_opt;
  Vector x0(5);
  x0 << 1, -2, 0.5, 0, 3;
  sim_opt.x0 = x0;
  const SimulationReport sim = simulate_pipeline(analysis, synth, sim_opt);

  const Vector x2_0 = synth.scaled.d.asDiagonal() * (p.C * x0);
  CHECK(sim.x2_norm1.front() ==
        doctest::Approx(x2_0.lpNorm<1>()).epsilon(1e-12));
  CHECK(sim.x1_norm0 ==
        doctest::Approx((analysis.dec.N * x0).lpNorm<1>()).epsilon(1e-12));
  REQUIRE(sim.z.has_value());
  CHECK(sim.z->states.front()(0) ==
        doctest::Approx(sim.x2_norm1.front()).epsilon(1e-12));
}

TEST_CASE("user-fixed step and horizon are respected") {
  GeneratorOptions opt;
  opt.n = 2;
  opt.m = 1;
  const Plant p = random_certified_plant(8, opt);
  const AnalysisReport analysis = analyze_plant(p);
  const SynthesisReport synth = synthesize_pipeline(analysis);
  SimulationOptions sim_opt;
  sim_opt.t_end = 3.0;
  sim_opt.dt = 1e-2;
  const SimulationReport sim = simulate_pipeline(analysis, synth, sim_opt);
  CHECK(sim.x.times.back() == doctest::Approx(3.0));
  CHECK(sim.x.dt == doctest::Approx(1e-2));
  CHECK(sim.x.samples() == 301);
}
