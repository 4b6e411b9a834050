#include "decstab/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "decstab/rk4.hpp"

namespace decstab {
namespace {

constexpr double kOverflow = 1e300;

void push_sample(Trajectory& traj, double t, const Vector& x) {
  traj.times.push_back(t);
  traj.states.push_back(x);
  traj.norms_1.push_back(x.lpNorm<1>());
  traj.norms_2.push_back(x.norm());
}

int step_count(double t0, double t_end, double dt) {
  if (!(dt > 0.0)) throw DomainError("simulate: dt must be positive");
  if (!(t_end > t0)) throw DomainError("simulate: need t_end > t0");
  return std::max(1, static_cast<int>(std::ceil((t_end - t0) / dt - 1e-9)));
}

}  // namespace

Trajectory simulate_ltv(const MatrixFn& a_of_t, const Vector& x0, double t0,
                        double t_end, double dt, std::string id) {
  const int steps = step_count(t0, t_end, dt);
  const double h = (t_end - t0) / steps;

  Trajectory traj;
  traj.dt = h;
  traj.plant_id = std::move(id);
  traj.times.reserve(steps + 1);
  traj.states.reserve(steps + 1);

  const auto rhs = [&](double t, const Vector& x) -> Vector {
    return a_of_t(t) * x;
  };

  Vector x = x0;
  push_sample(traj, t0, x);
  for (int i = 0; i < steps; ++i) {
    const double t = t0 + i * h;
    x = rk4_step(rhs, t, h, x);
    if (!x.allFinite() || x.cwiseAbs().maxCoeff() > kOverflow) {
      throw DivergenceError(
          "simulate_ltv: state overflow at t=" + std::to_string(t + h), t + h);
    }
    push_sample(traj, t0 + (i + 1) * h, x);
  }
  return traj;
}

Trajectory simulate_closed_loop(const Plant& p, const GainSchedule& schedule,
                                const Vector& x0, double t0, double t_end,
                                double dt) {
  if (schedule.channels() != p.m) {
    throw DimensionError(
        "simulate_closed_loop: schedule channels do not match plant inputs");
  }
  if (x0.size() != p.n) {
    throw DimensionError("simulate_closed_loop: x0 length must equal n");
  }
  const MatrixFn a_k = [&p, schedule](double t) -> Matrix {
    return p.A + p.B * schedule.at(t).asDiagonal() * p.C;
  };
  return simulate_ltv(a_k, x0, t0, t_end, dt,
                      p.name.empty() ? "closed_loop" : p.name);
}

BoundCheck coppel_envelope_check(const Trajectory& traj,
                                 const MatrixFn& a_of_t) {
  BoundCheck check;
  if (traj.samples() == 0) return check;
  const double n0 = traj.norms_1.front();
  if (n0 <= 0.0) {
    // Zero initial state: the sandwich collapses to x == 0.
    for (Index i = 0; i < traj.samples(); ++i) {
      if (traj.norms_1[i] > 0.0) {
        check.passed = false;
        check.first_violation = i;
        return check;
      }
    }
    return check;
  }

  const double log_n0 = std::log(n0);
  const double slack = std::log1p(kSlackPerDt * traj.dt);

  double int_up = 0.0;   // int mu1(A)
  double int_low = 0.0;  // int mu1(-A)
  double mu_up_prev = matrix_measure_1(a_of_t(traj.times.front()));
  double mu_low_prev = matrix_measure_1(-a_of_t(traj.times.front()));
  check.worst_margin = std::numeric_limits<double>::infinity();

  for (Index i = 0; i < traj.samples(); ++i) {
    if (i > 0) {
      const double h = traj.times[i] - traj.times[i - 1];
      const double mu_up = matrix_measure_1(a_of_t(traj.times[i]));
      const double mu_low = matrix_measure_1(-a_of_t(traj.times[i]));
      int_up += 0.5 * h * (mu_up_prev + mu_up);
      int_low += 0.5 * h * (mu_low_prev + mu_low);
      mu_up_prev = mu_up;
      mu_low_prev = mu_low;
    }
    const double value = traj.norms_1[i];
    const double log_ub = log_n0 + int_up + slack;
    const double log_lb = log_n0 - int_low - slack;
    double margin;
    if (value <= 0.0 || value < kNormFloor) {
      // Underflowed samples only violate a bound that is itself above the
      // floor.
      margin = (log_lb <= std::log(kNormFloor))
                   ? 0.0
                   : -std::numeric_limits<double>::infinity();
    } else {
      const double lv = std::log(value);
      margin = std::min(log_ub - lv, lv - log_lb);
    }
    if (margin < check.worst_margin) check.worst_margin = margin;
    if (margin < 0.0) {
      check.passed = false;
      if (check.first_violation < 0) check.first_violation = i;
    }
  }
  return check;
}

BoundCheck column_dominant_decay_check(const Trajectory& traj,
                                       const MatrixFn& a_of_t) {
  BoundCheck check;
  if (traj.samples() == 0) return check;

  const double n0 = traj.norms_1.front();
  const double slack = std::log1p(kSlackPerDt * traj.dt);
  check.worst_margin = std::numeric_limits<double>::infinity();

  double int_alpha = 0.0;
  double alpha_prev = 0.0;
  for (Index i = 0; i < traj.samples(); ++i) {
    const Matrix a = a_of_t(traj.times[i]);
    const double alpha = matrix_measure_1(a);
    const Vector ones = Vector::Ones(a.rows());
    if (!(alpha < 0.0) ||
        !generalized_dominance_check(a, ones, Dominance::kColumn)) {
      throw DomainError(
          "column_dominant_decay_check: dominance precondition fails at "
          "sample " +
          std::to_string(i) + " (t=" + std::to_string(traj.times[i]) + ")");
    }
    if (i > 0) {
      const double h = traj.times[i] - traj.times[i - 1];
      int_alpha += 0.5 * h * (alpha_prev + alpha);
    }
    alpha_prev = alpha;

    const double value = traj.norms_1[i];
    if (n0 <= 0.0) {
      if (value > 0.0) {
        check.passed = false;
        if (check.first_violation < 0) check.first_violation = i;
      }
      continue;
    }
    const double log_ub = std::log(n0) + int_alpha + slack;
    const double margin = (value <= 0.0 || value < kNormFloor)
                              ? 0.0
                              : log_ub - std::log(value);
    if (margin < check.worst_margin) check.worst_margin = margin;
    if (margin < 0.0) {
      check.passed = false;
      if (check.first_violation < 0) check.first_violation = i;
    }
  }
  return check;
}

Trajectory simulate_comparison_z(const ScalarFn& mu_of_t, const ExpBound& eb,
                                 double a21_norm, double a12_norm,
                                 double x1_norm0, double z0,
                                 const std::vector<double>& grid) {
  if (!(z0 > 0.0)) {
    throw DomainError("simulate_comparison_z: z0 must be positive");
  }
  if (grid.size() < 2) {
    throw DomainError("simulate_comparison_z: grid needs at least two points");
  }
  const double forcing = a21_norm * x1_norm0 * eb.M11;
  const double kernel = eb.M11 * a21_norm * a12_norm;

  const auto rhs = [&](double t, const Eigen::Vector2d& s) -> Eigen::Vector2d {
    Eigen::Vector2d d;
    d(0) = mu_of_t(t) * s(0) + forcing * std::exp(-eb.beta11 * t) +
           kernel * s(1);
    d(1) = -eb.beta11 * s(1) + s(0);
    return d;
  };

  Trajectory traj;
  traj.plant_id = "comparison_z";
  traj.dt = grid[1] - grid[0];
  Eigen::Vector2d s(z0, 0.0);
  for (size_t i = 0; i < grid.size(); ++i) {
    if (i > 0) {
      const double h = grid[i] - grid[i - 1];
      s = rk4_step(rhs, grid[i - 1], h, s);
      if (!s.allFinite() || s.cwiseAbs().maxCoeff() > kOverflow) {
        throw DivergenceError(
            "simulate_comparison_z: overflow at t=" + std::to_string(grid[i]),
            grid[i]);
      }
    }
    Vector z(1);
    z(0) = s(0);
    push_sample(traj, grid[i], z);
  }
  return traj;
}

BoundCheck comparison_domination_check(const std::vector<double>& x2_norm1,
                                       const Trajectory& z_traj) {
  if (static_cast<Index>(x2_norm1.size()) != z_traj.samples()) {
    throw DomainError("comparison_domination_check: grids differ in length");
  }
  if (x2_norm1.empty()) return BoundCheck{};
  const double z0 = z_traj.states.front()(0);
  if (std::abs(z0 - x2_norm1.front()) >
      1e-9 * std::max(1.0, std::abs(z0))) {
    throw DomainError(
        "comparison_domination_check: z(0) does not match ||x2(0)||_1");
  }

  BoundCheck check;
  check.worst_margin = std::numeric_limits<double>::infinity();
  const double slack = 1.0 + kSlackPerDt * z_traj.dt;
  for (size_t i = 0; i < x2_norm1.size(); ++i) {
    const double z = z_traj.states[i](0);
    const double v = x2_norm1[i];
    if (v < kNormFloor && z > -kNormFloor) continue;
    const double margin = z * slack - v;
    const double rel = margin / std::max({std::abs(z), std::abs(v), 1e-30});
    if (rel < check.worst_margin) check.worst_margin = rel;
    if (margin < 0.0) {
      check.passed = false;
      if (check.first_violation < 0) {
        check.first_violation = static_cast<std::ptrdiff_t>(i);
      }
    }
  }
  return check;
}

DecayFit fit_decay_rate(const Trajectory& traj, double window_start,
                        double window_end) {
  constexpr double kFitFloor = 1e-12;
  std::vector<double> ts, ys;
  for (Index i = 0; i < traj.samples(); ++i) {
    const double t = traj.times[i];
    if (t < window_start || t > window_end) continue;
    if (traj.norms_2[i] <= kFitFloor) continue;
    ts.push_back(t);
    ys.push_back(std::log(traj.norms_2[i]));
  }
  if (ts.size() < 10) {
    throw FitError("fit_decay_rate: fewer than 10 usable samples in window [" +
                   std::to_string(window_start) + ", " +
                   std::to_string(window_end) + "]");
  }
  const double n = static_cast<double>(ts.size());
  double mt = 0.0, my = 0.0;
  for (size_t i = 0; i < ts.size(); ++i) {
    mt += ts[i];
    my += ys[i];
  }
  mt /= n;
  my /= n;
  double stt = 0.0, sty = 0.0, syy = 0.0;
  for (size_t i = 0; i < ts.size(); ++i) {
    const double dt_ = ts[i] - mt;
    const double dy = ys[i] - my;
    stt += dt_ * dt_;
    sty += dt_ * dy;
    syy += dy * dy;
  }
  DecayFit fit;
  fit.window_start = window_start;
  fit.window_end = window_end;
  fit.samples_used = static_cast<Index>(ts.size());
  fit.rate = sty / stt;
  fit.intercept = my - fit.rate * mt;
  if (syy <= 1e-30) {
    fit.r_squared = 1.0;  // constant signal, perfectly fit by a flat line
  } else {
    fit.r_squared = (sty * sty) / (stt * syy);
  }
  return fit;
}

bool comparison_margin_check(double gamma_bound, double kernel_integral) {
  return -gamma_bound + kernel_integral < 0.0;
}

}  // namespace decstab
