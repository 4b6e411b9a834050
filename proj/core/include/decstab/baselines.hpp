#pragma once

#include "decstab/decomposition.hpp"
#include "decstab/gain_schedule.hpp"
#include "decstab/simulation.hpp"

namespace decstab {

/// Multiplier magnitudes must clear the unit circle by this much before a
/// periodic system is declared stable.
inline constexpr double kFloquetTol = 1e-6;

/// Periodic scalar output gain
///   order 2: k(t) = k1 + k2 w   sin(w t)
///   order 3: k(t) = k1 + k2 w^2 sin(w t)
/// effective for sufficiently fast w on plants static output feedback cannot
/// stabilize.
struct PeriodicGain {
  double k1 = 0.0;
  double k2 = 0.0;
  double omega = 1.0;
  int order = 2;
};

GainSchedule moreau_gain(const PeriodicGain& pg);

struct FloquetReport {
  Matrix monodromy;
  ComplexVector multipliers;
  bool stable = false;  // all |multiplier| < 1 - kFloquetTol
};

/// Monodromy matrix of dx/dt = A(t) x over one period via the matrix ODE
/// dX/dt = A(t) X, X(0) = I (RK4, step shrunk to divide the period).
FloquetReport floquet_report(const MatrixFn& a_of_t, double period, double dt);

/// K(t) = B^-1 (Q(t) - A) C^-1, defined for square invertible B and C; the
/// closed loop A + B K(t) C then equals Q(t) identically. The result is
/// generally a full (non-diagonal) matrix gain.
MatrixFn trivial_unstructured_gain(const Plant& p, const MatrixFn& q_of_t);

/// Sum of absolute off-diagonal entries; a gain counts as diagonal when this
/// stays below 1e-9.
double off_diagonal_mass(const Matrix& k);

}  // namespace decstab
