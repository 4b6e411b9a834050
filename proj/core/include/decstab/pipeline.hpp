#pragma once

#include <optional>
#include <string>

#include "decstab/decomposition.hpp"
#include "decstab/gain_synthesis.hpp"
#include "decstab/simulation.hpp"

namespace decstab {

/// Stage 1: hypothesis checks. Always completes (verdicts may be negative);
/// only malformed plants throw.
struct AnalysisReport {
  Plant plant;
  HMatrixCertificate cb_certificate;
  bool cb_hurwitz_h = false;  // certificate + all-negative diagonal
  Decomposition dec;
  MinimumPhaseReport phase;
  bool hypotheses_met = false;
};

AnalysisReport analyze_plant(const Plant& p);

struct SynthesisOptions {
  double safety = 1.05;  // levels = safety * k_tilde
  GainSchedule::Kind kind = GainSchedule::Kind::kConstant;
  double t_bar = 0.0;       // ramp end when kind == kRamp
  double ramp_start = 0.0;  // common starting gain for ramps
};

/// Stage 2: certificate numbers and the schedule. Throws CertificateError
/// naming the failed hypothesis when stage 1 did not pass.
struct SynthesisReport {
  ScaledBlocks scaled;
  GainSynthesis synthesis;
  bool key_condition_at_levels = false;
};

SynthesisReport synthesize_pipeline(const AnalysisReport& analysis,
                                    const SynthesisOptions& opt = {});

struct SimulationOptions {
  Vector x0;          // empty -> ones(n)
  double t0 = 0.0;
  double t_end = -1.0;      // <= 0 -> sized from the closed-loop abscissa
  double dt = -1.0;         // <= 0 -> 1e-3 of the characteristic time
  double gain_scale = 1.0;  // diagnostic override, bypasses the floor
  int max_extensions = 3;   // horizon doublings while the decay target misses
};

/// Stage 3: closed-loop run, transformed-state bookkeeping, and every
/// documented inequality check.
struct SimulationReport {
  Trajectory x;                    // original coordinates
  std::optional<Trajectory> z;     // scalar comparison majorant
  std::vector<double> x2_norm1;    // ||x2(t)||_1 on the same grid
  double x1_norm0 = 0.0;
  std::optional<DecayFit> fit;     // absent for an identically zero run
  BoundCheck coppel;
  std::optional<BoundCheck> domination;
  double mu_sup = 0.0;  // sup of mu1 over t >= t_bar
  bool margin_ok = false;
  bool key_condition_ok = false;
  double final_ratio = 0.0;  // ||x(t_end)||_2 / ||x(0)||_2
  bool zero_initial_state = false;

  bool all_passed() const;
};

SimulationReport simulate_pipeline(const AnalysisReport& analysis,
                                   const SynthesisReport& synth,
                                   const SimulationOptions& opt = {});

/// Levels scaled by a constant factor (used by the gain override flag; the
/// result deliberately skips floor validation).
GainSchedule scale_gains(const GainSchedule& s, double factor);

}  // namespace decstab
