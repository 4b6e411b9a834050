#include "decstab/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace decstab {

AnalysisReport analyze_plant(const Plant& p) {
  AnalysisReport rep;
  rep.plant = p;
  const Matrix cb = p.C * p.B;
  rep.cb_certificate = h_matrix_certificate(cb);
  rep.cb_hurwitz_h = is_hurwitz_h_matrix(cb);
  rep.dec = build_decomposition(p);
  rep.phase = minimum_phase_report(rep.dec);
  rep.hypotheses_met = rep.cb_hurwitz_h && rep.phase.minimum_phase;
  return rep;
}

SynthesisReport synthesize_pipeline(const AnalysisReport& analysis,
                                    const SynthesisOptions& opt) {
  if (!analysis.cb_hurwitz_h) {
    throw CertificateError(
        "synthesize: hypothesis failed: CB is not a Hurwitz H-matrix");
  }
  if (!analysis.phase.minimum_phase) {
    throw CertificateError(
        "synthesize: hypothesis failed: plant is not minimum phase");
  }
  if (!(opt.safety > 1.0)) {
    throw DomainError("synthesize: safety factor must exceed 1");
  }

  SynthesisReport rep;
  rep.scaled = apply_scaling(analysis.dec, *analysis.cb_certificate.scaling_d);

  GainSynthesis& gs = rep.synthesis;
  if (analysis.dec.square_case) {
    // No zero dynamics: the coupling terms vanish and any envelope is
    // vacuous; gamma = 0 by convention.
    gs.bound = ExpBound{1.0, 1.0};
    gs.gamma = 0.0;
  } else {
    gs.bound = exp_bound(analysis.dec.A11);
    gs.gamma = coupling_gamma(gs.bound, rep.scaled.A21t, rep.scaled.A12t);
  }
  gs.k_tilde = gain_lower_bounds(rep.scaled.A22t, rep.scaled.CB_scaled,
                                 gs.gamma);
  gs.k_bar = gs.k_tilde.maxCoeff();
  gs.t_bar = (opt.kind == GainSchedule::Kind::kRamp) ? opt.t_bar : 0.0;

  ScheduleParams params;
  params.levels = opt.safety * gs.k_tilde;
  if (opt.kind == GainSchedule::Kind::kRamp) {
    params.start = Vector::Constant(gs.k_tilde.size(), opt.ramp_start);
  }
  gs.schedule = make_schedule(opt.kind, gs.k_tilde, gs.t_bar, params);

  rep.key_condition_at_levels = verify_key_condition(
      rep.scaled.A22t, rep.scaled.CB_scaled, params.levels, gs.gamma);
  return rep;
}

GainSchedule scale_gains(const GainSchedule& s, double factor) {
  using Kind = GainSchedule::Kind;
  switch (s.kind()) {
    case Kind::kConstant:
      return GainSchedule::constant(factor * s.levels(), s.t_bar());
    case Kind::kRamp:
      return GainSchedule::ramp(factor * s.start(), factor * s.levels(),
                                s.t_bar());
    case Kind::kCustom: {
      std::vector<Vector> values = s.knot_values();
      for (auto& v : values) v *= factor;
      return GainSchedule::custom(s.knot_times(), std::move(values),
                                  s.t_bar());
    }
    case Kind::kSinusoid:
      return GainSchedule::sinusoid(factor * s.offset(),
                                    factor * s.amplitude(), s.omega());
  }
  return s;
}

bool SimulationReport::all_passed() const {
  if (zero_initial_state) return true;
  const bool decay_ok = fit && fit->rate < 0.0;
  const bool domination_ok = !domination || domination->passed;
  return coppel.passed && domination_ok && margin_ok && key_condition_ok &&
         decay_ok;
}

SimulationReport simulate_pipeline(const AnalysisReport& analysis,
                                   const SynthesisReport& synth,
                                   const SimulationOptions& opt) {
  const Plant& p = analysis.plant;
  SimulationReport rep;

  GainSchedule schedule = synth.synthesis.schedule;
  if (opt.gain_scale != 1.0) {
    schedule = scale_gains(schedule, opt.gain_scale);
  }
  const double t_bar = schedule.t_bar();

  Vector x0 = opt.x0.size() > 0 ? opt.x0 : Vector::Ones(p.n);
  if (x0.size() != p.n) {
    throw DimensionError("simulate: x0 length must equal n");
  }

  const MatrixFn a_k = [&p, &schedule](double t) -> Matrix {
    return p.A + p.B * schedule.at(t).asDiagonal() * p.C;
  };

  // Step and horizon defaults hang off the settled closed loop: 1e-3 of the
  // characteristic time, with a norm cap so stiff fast modes stay inside the
  // RK4 stability region.
  const Matrix a_settled = a_k(t_bar);
  const double abscissa = spectral_report(a_settled).spectral_abscissa;
  const double char_time = 1.0 / std::max(std::abs(abscissa), 1e-3);
  double dt = opt.dt > 0.0
                  ? opt.dt
                  : std::min(1e-3 * char_time,
                             0.2 / std::max(induced_norm_1(a_settled), 1e-6));
  const bool auto_horizon = !(opt.t_end > opt.t0);
  double t_end = auto_horizon ? t_bar + 25.0 * char_time : opt.t_end;

  rep.zero_initial_state = x0.lpNorm<1>() == 0.0;

  const Matrix dct = synth.scaled.d.asDiagonal() * p.C;  // rows of D T
  const double a21n = induced_norm_1(synth.scaled.A21t);
  const double a12n = induced_norm_1(synth.scaled.A12t);
  const ScalarFn mu_of_t = [&](double t) -> double {
    return matrix_measure_1(synth.scaled.A22t +
                            synth.scaled.CB_scaled *
                                schedule.at(t).asDiagonal().toDenseMatrix());
  };

  for (int attempt = 0;; ++attempt) {
    rep.x = simulate_closed_loop(p, schedule, x0, opt.t0, t_end, dt);

    rep.x1_norm0 = analysis.dec.square_case
                       ? 0.0
                       : (analysis.dec.N * x0).lpNorm<1>();
    rep.x2_norm1.clear();
    rep.x2_norm1.reserve(rep.x.states.size());
    for (const Vector& x : rep.x.states) {
      rep.x2_norm1.push_back((dct * x).lpNorm<1>());
    }

    rep.coppel = coppel_envelope_check(rep.x, a_k);

    if (!rep.zero_initial_state && rep.x2_norm1.front() > 0.0) {
      rep.z = simulate_comparison_z(mu_of_t, synth.synthesis.bound, a21n,
                                    a12n, rep.x1_norm0,
                                    rep.x2_norm1.front(), rep.x.times);
      rep.domination = comparison_domination_check(rep.x2_norm1, *rep.z);
    } else {
      rep.z.reset();
      rep.domination.reset();
    }

    rep.mu_sup = -std::numeric_limits<double>::infinity();
    for (Index i = 0; i < rep.x.samples(); ++i) {
      if (rep.x.times[i] >= t_bar) {
        rep.mu_sup = std::max(rep.mu_sup, mu_of_t(rep.x.times[i]));
      }
    }
    rep.margin_ok = comparison_margin_check(-rep.mu_sup, synth.synthesis.gamma);
    rep.key_condition_ok =
        verify_key_condition(synth.scaled.A22t, synth.scaled.CB_scaled,
                             schedule.at(t_bar), synth.synthesis.gamma);

    rep.final_ratio = rep.x.norms_2.front() > 0.0
                          ? rep.x.norms_2.back() / rep.x.norms_2.front()
                          : 0.0;

    if (rep.zero_initial_state) {
      rep.fit.reset();
      break;
    }
    // Fit over the settled tail, clipped where the norm hits the fit floor
    // (samples past that point carry no information).
    double t_hi = rep.x.times.back();
    for (Index i = rep.x.samples() - 1; i >= 0; --i) {
      if (rep.x.norms_2[i] > 1e-12) {
        t_hi = rep.x.times[i];
        break;
      }
    }
    const double fit_lo = t_bar + 0.25 * (t_hi - t_bar);
    try {
      rep.fit = fit_decay_rate(rep.x, fit_lo, t_hi);
    } catch (const FitError&) {
      rep.fit.reset();
    }

    // A longer horizon only helps a decaying run, and only sharpens the fit
    // while the window has not already been clipped by the floor.
    const bool decaying = rep.fit && rep.fit->rate < 0.0;
    const bool floor_hit = t_hi < rep.x.times.back() * (1.0 - 1e-6);
    const bool want_more =
        auto_horizon && attempt < opt.max_extensions && decaying &&
        (rep.final_ratio > 1e-6 ||
         (rep.fit->r_squared <= 0.992 && !floor_hit));
    if (!want_more) break;
    t_end = opt.t0 + 2.0 * (t_end - opt.t0);
  }
  return rep;
}

}  // namespace decstab
