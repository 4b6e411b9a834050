#pragma once

#include <vector>

#include "decstab/types.hpp"

namespace decstab {

/// Evaluable per-channel gain profile k_j(t). Schedules are immutable values;
/// evaluation is reentrant.
class GainSchedule {
 public:
  enum class Kind { kConstant, kRamp, kCustom, kSinusoid };

  GainSchedule() = default;

  /// k_j(t) = levels_j for all t.
  static GainSchedule constant(Vector levels, double t_bar = 0.0);

  /// Linear rise from start to levels on [0, t_bar], held at levels after.
  static GainSchedule ramp(Vector start, Vector levels, double t_bar);

  /// Piecewise-linear interpolation of (times, values) knots; held constant
  /// outside the knot range. times must be strictly increasing.
  static GainSchedule custom(std::vector<double> times,
                             std::vector<Vector> values, double t_bar);

  /// Scalar k(t) = offset + amplitude * sin(omega t).
  static GainSchedule sinusoid(double offset, double amplitude, double omega);

  Kind kind() const { return kind_; }
  Index channels() const;
  double t_bar() const { return t_bar_; }

  Vector at(double t) const;
  double scalar_at(double t) const;  // single-channel convenience

  /// Largest |k_j(t)| over a sampled interval (for gain-magnitude reporting).
  double sup_abs(double t0, double t1, int samples = 2001) const;

  // Introspection for serialization.
  const Vector& levels() const { return levels_; }
  const Vector& start() const { return start_; }
  const std::vector<double>& knot_times() const { return knot_times_; }
  const std::vector<Vector>& knot_values() const { return knot_values_; }
  double offset() const { return offset_; }
  double amplitude() const { return amplitude_; }
  double omega() const { return omega_; }

 private:
  Kind kind_ = Kind::kConstant;
  double t_bar_ = 0.0;
  Vector levels_;  // constant/ramp target
  Vector start_;   // ramp origin
  std::vector<double> knot_times_;
  std::vector<Vector> knot_values_;
  double offset_ = 0.0, amplitude_ = 0.0, omega_ = 1.0;
};

/// Parameters for make_schedule; only the fields of the requested kind are
/// read.
struct ScheduleParams {
  Vector levels;
  Vector start;
  std::vector<double> times;
  std::vector<Vector> values;
};

/// Builds a schedule and validates the floor k_j(t) >= k_tilde_j for all
/// t >= t_bar. Throws ScheduleError listing the violating (channel, time).
GainSchedule make_schedule(GainSchedule::Kind kind, const Vector& k_tilde,
                           double t_bar, const ScheduleParams& params);

/// Floor check used by make_schedule and by schedule-file loading.
void validate_schedule_floor(const GainSchedule& s, const Vector& k_tilde);

}  // namespace decstab
