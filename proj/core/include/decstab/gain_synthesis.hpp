#pragma once

#include "decstab/decomposition.hpp"
#include "decstab/gain_schedule.hpp"

namespace decstab {

/// Smallest admissible per-channel gain floor when the closed form yields a
/// non-positive bound (any positive gain then satisfies the column
/// inequality).
inline constexpr double kGainFloor = 1e-6;

/// Certified transient envelope ||e^{A11 t}|| <= M11 e^{-beta11 t} in the
/// induced 1-norm, valid for all t >= 0.
struct ExpBound {
  double M11 = 1.0;
  double beta11 = 1.0;
};

/// beta11 = 0.9 |spectral abscissa|; M11 = sup over a sampled grid of
/// ||e^{A11 t}|| e^{beta11 t}, inflated 10% and re-verified on a finer grid.
/// The sup is finite because beta11 undercuts the true decay rate.
/// Throws DomainError when A11 is not Hurwitz.
ExpBound exp_bound(const Matrix& a11);

/// gamma = M11 ||A21t|| ||A12t|| / beta11, induced 1-norms throughout.
/// Empty coupling blocks (square plants) give gamma = 0.
double coupling_gamma(const ExpBound& eb, const Matrix& a21t,
                      const Matrix& a12t);

/// Per-channel lower bounds
///   k_j = (sum_{i!=j} |a_ij| + a_jj + gamma) / -(b_jj + sum_{i!=j} |b_ij|)
/// over the scaled blocks, floored at kGainFloor. Requires every column of
/// cb_scaled strictly dominant with a negative diagonal (CertificateError
/// otherwise). The per-column inequality is re-asserted slightly above the
/// bound before returning.
Vector gain_lower_bounds(const Matrix& a22t, const Matrix& cb_scaled,
                         double gamma);

/// Decides max_j (k_j b_jj + a_jj + k_j sum_{i!=j}|b_ij| + sum_{i!=j}|a_ij|)
/// < -gamma. The left side upper-bounds the 1-norm measure of
/// a22t + cb_scaled K; both quantities are computed and their ordering is
/// asserted.
bool verify_key_condition(const Matrix& a22t, const Matrix& cb_scaled,
                          const Vector& k, double gamma);

/// The full certificate produced for a plant: decay data for the zero
/// dynamics, the coupling constant, per-channel floors, and the schedule
/// chosen on top of them.
struct GainSynthesis {
  double gamma = 0.0;
  ExpBound bound;
  Vector k_tilde;
  double k_bar = 0.0;  // max_j k_tilde_j
  double t_bar = 0.0;
  GainSchedule schedule;
};

}  // namespace decstab
