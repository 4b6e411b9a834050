#pragma once

#include <functional>
#include <string>
#include <vector>

#include "decstab/decomposition.hpp"
#include "decstab/gain_schedule.hpp"
#include "decstab/gain_synthesis.hpp"

namespace decstab {

/// Multiplier c in the (1 + c*dt) slack every discrete inequality check
/// allows for integration and quadrature error.
inline constexpr double kSlackPerDt = 10.0;

/// Absolute norm floor below which trailing samples are ignored by the
/// inequality checks (fully decayed states carry no information).
inline constexpr double kNormFloor = 1e-250;

struct Trajectory {
  std::vector<double> times;
  std::vector<Vector> states;
  std::vector<double> norms_1;
  std::vector<double> norms_2;
  double dt = 0.0;  // realized uniform step
  std::string plant_id;

  Index samples() const { return static_cast<Index>(times.size()); }
};

/// Fixed-step classical RK4 on dx/dt = A(t) x. The step is shrunk to divide
/// the span exactly; every step is recorded. Throws DivergenceError when the
/// state norm passes 1e300.
Trajectory simulate_ltv(const MatrixFn& a_of_t, const Vector& x0, double t0,
                        double t_end, double dt, std::string id = {});

/// Closed loop dx/dt = (A + B K(t) C) x with diagonal K from the schedule.
Trajectory simulate_closed_loop(const Plant& p, const GainSchedule& schedule,
                                const Vector& x0, double t0, double t_end,
                                double dt);

/// Result of a per-sample inequality sweep.
struct BoundCheck {
  bool passed = true;
  std::ptrdiff_t first_violation = -1;  // sample index, -1 if none
  double worst_margin = 0.0;  // most negative log-domain slack observed
  explicit operator bool() const { return passed; }
};

/// Two-sided matrix-measure envelope for solutions of dx/dt = A(t) x:
///   ||x(t0)|| e^{-int mu1(-A)} <= ||x(t)||_1 <= ||x(t0)|| e^{int mu1(A)}
/// with trapezoid quadrature on the trajectory grid and (1 + c*dt) slack.
BoundCheck coppel_envelope_check(const Trajectory& traj,
                                 const MatrixFn& a_of_t);

/// One-norm decay bound for column-diagonal dominant Hurwitz A(t):
///   ||x(t)||_1 <= ||x(t0)||_1 e^{int alpha_c}, alpha_c(t) = mu1(A(t)) < 0.
/// Throws DomainError naming the first sample where the dominance/negativity
/// precondition fails.
BoundCheck column_dominant_decay_check(const Trajectory& traj,
                                       const MatrixFn& a_of_t);

/// Scalar majorant z(t) for the 1-norm of the lower transformed state:
///   dz = mu(t) z + a21_norm * x1_norm0 * M11 e^{-beta11 t}
///        + M11 a21_norm a12_norm * w,    dw = -beta11 w + z, w(0) = 0,
/// the auxiliary w carrying the exponential convolution kernel exactly.
/// Integrated with RK4 on the supplied grid; z0 must be positive.
Trajectory simulate_comparison_z(const ScalarFn& mu_of_t, const ExpBound& eb,
                                 double a21_norm, double a12_norm,
                                 double x1_norm0, double z0,
                                 const std::vector<double>& grid);

/// z(t) must dominate the recorded ||x2(t)||_1 on the shared grid within the
/// discretization slack. Throws DomainError on grid mismatch or when z(0)
/// does not match the initial norm.
BoundCheck comparison_domination_check(const std::vector<double>& x2_norm1,
                                       const Trajectory& z_traj);

struct DecayFit {
  double rate = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double window_start = 0.0;
  double window_end = 0.0;
  Index samples_used = 0;
};

/// Least-squares line through (t, log ||x(t)||_2) over the window, ignoring
/// samples below the 1e-12 norm floor. Needs at least 10 usable samples.
DecayFit fit_decay_rate(const Trajectory& traj, double window_start,
                        double window_end);

/// Strict margin -gamma_bound + kernel_integral < 0 under which the scalar
/// comparison system with a(t) <= -gamma_bound and L1 kernel mass
/// kernel_integral converges.
bool comparison_margin_check(double gamma_bound, double kernel_integral);

}  // namespace decstab
