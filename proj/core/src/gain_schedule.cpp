#include "decstab/gain_schedule.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace decstab {

GainSchedule GainSchedule::constant(Vector levels, double t_bar) {
  GainSchedule s;
  s.kind_ = Kind::kConstant;
  s.levels_ = std::move(levels);
  s.t_bar_ = t_bar;
  return s;
}

GainSchedule GainSchedule::ramp(Vector start, Vector levels, double t_bar) {
  if (start.size() != levels.size()) {
    throw DimensionError("GainSchedule::ramp: start/levels length mismatch");
  }
  if (!(t_bar > 0.0)) {
    throw DomainError("GainSchedule::ramp: ramp end t_bar must be positive");
  }
  GainSchedule s;
  s.kind_ = Kind::kRamp;
  s.start_ = std::move(start);
  s.levels_ = std::move(levels);
  s.t_bar_ = t_bar;
  return s;
}

GainSchedule GainSchedule::custom(std::vector<double> times,
                                  std::vector<Vector> values, double t_bar) {
  if (times.size() != values.size() || times.empty()) {
    throw DomainError("GainSchedule::custom: need matching non-empty samples");
  }
  const Index m = values.front().size();
  for (size_t i = 0; i < times.size(); ++i) {
    if (values[i].size() != m) {
      throw DimensionError("GainSchedule::custom: ragged sample vectors");
    }
    if (i > 0 && !(times[i] > times[i - 1])) {
      throw DomainError("GainSchedule::custom: times must strictly increase");
    }
  }
  GainSchedule s;
  s.kind_ = Kind::kCustom;
  s.knot_times_ = std::move(times);
  s.knot_values_ = std::move(values);
  s.t_bar_ = t_bar;
  return s;
}

GainSchedule GainSchedule::sinusoid(double offset, double amplitude,
                                    double omega) {
  if (!(omega > 0.0)) {
    throw DomainError("GainSchedule::sinusoid: omega must be positive");
  }
  GainSchedule s;
  s.kind_ = Kind::kSinusoid;
  s.offset_ = offset;
  s.amplitude_ = amplitude;
  s.omega_ = omega;
  s.t_bar_ = 0.0;
  return s;
}

Index GainSchedule::channels() const {
  switch (kind_) {
    case Kind::kConstant:
    case Kind::kRamp:
      return levels_.size();
    case Kind::kCustom:
      return knot_values_.empty() ? 0 : knot_values_.front().size();
    case Kind::kSinusoid:
      return 1;
  }
  return 0;
}

Vector GainSchedule::at(double t) const {
  switch (kind_) {
    case Kind::kConstant:
      return levels_;
    case Kind::kRamp: {
      if (t <= 0.0) return start_;
      if (t >= t_bar_) return levels_;
      const double a = t / t_bar_;
      return start_ + a * (levels_ - start_);
    }
    case Kind::kCustom: {
      if (t <= knot_times_.front()) return knot_values_.front();
      if (t >= knot_times_.back()) return knot_values_.back();
      const auto it =
          std::upper_bound(knot_times_.begin(), knot_times_.end(), t);
      const size_t hi = static_cast<size_t>(it - knot_times_.begin());
      const size_t lo = hi - 1;
      const double a =
          (t - knot_times_[lo]) / (knot_times_[hi] - knot_times_[lo]);
      return knot_values_[lo] + a * (knot_values_[hi] - knot_values_[lo]);
    }
    case Kind::kSinusoid: {
      Vector v(1);
      v(0) = offset_ + amplitude_ * std::sin(omega_ * t);
      return v;
    }
  }
  return Vector();
}

double GainSchedule::scalar_at(double t) const {
  if (channels() != 1) {
    throw DimensionError("GainSchedule::scalar_at: schedule is not scalar");
  }
  return at(t)(0);
}

double GainSchedule::sup_abs(double t0, double t1, int samples) const {
  double sup = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double t = t0 + (t1 - t0) * i / (samples - 1);
    sup = std::max(sup, at(t).cwiseAbs().maxCoeff());
  }
  return sup;
}

void validate_schedule_floor(const GainSchedule& s, const Vector& k_tilde) {
  if (s.channels() != k_tilde.size()) {
    throw DimensionError(
        "validate_schedule_floor: schedule channel count does not match "
        "k_tilde");
  }
  const double t_bar = s.t_bar();
  // The floor can only be violated at evaluation extremes: schedule kinds are
  // piecewise linear, so check t_bar, all knots past t_bar, and the held tail.
  std::vector<double> probe{t_bar};
  if (s.kind() == GainSchedule::Kind::kCustom) {
    for (double kt : s.knot_times()) {
      if (kt > t_bar) probe.push_back(kt);
    }
    probe.push_back(std::max(t_bar, s.knot_times().back()) + 1.0);
  } else if (s.kind() == GainSchedule::Kind::kSinusoid) {
    // Sample one full period past t_bar.
    for (int i = 0; i <= 256; ++i) {
      probe.push_back(t_bar + i * (2.0 * M_PI / s.omega()) / 256.0);
    }
  } else {
    probe.push_back(t_bar + 1.0);
  }

  std::ostringstream bad;
  bool ok = true;
  for (double t : probe) {
    const Vector k = s.at(t);
    for (Index j = 0; j < k.size(); ++j) {
      if (k(j) < k_tilde(j)) {
        if (!ok) bad << ", ";
        bad << "(channel " << j << ", t=" << t << ")";
        ok = false;
      }
    }
  }
  if (!ok) {
    throw ScheduleError("gain schedule dips below its floor after t_bar at " +
                        bad.str());
  }
}

GainSchedule make_schedule(GainSchedule::Kind kind, const Vector& k_tilde,
                           double t_bar, const ScheduleParams& params) {
  GainSchedule s;
  switch (kind) {
    case GainSchedule::Kind::kConstant:
      s = GainSchedule::constant(params.levels, t_bar);
      break;
    case GainSchedule::Kind::kRamp: {
      Vector start = params.start.size() == k_tilde.size()
                         ? params.start
                         : Vector::Zero(k_tilde.size());
      s = GainSchedule::ramp(std::move(start), params.levels, t_bar);
      break;
    }
    case GainSchedule::Kind::kCustom:
      s = GainSchedule::custom(params.times, params.values, t_bar);
      break;
    case GainSchedule::Kind::kSinusoid:
      throw DomainError(
          "make_schedule: sinusoid schedules come from the periodic baseline, "
          "not from gain synthesis");
  }
  validate_schedule_floor(s, k_tilde);
  return s;
}

}  // namespace decstab
