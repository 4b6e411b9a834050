#pragma once

namespace decstab {

/// One classical 4th-order Runge-Kutta step for dx/dt = f(t, x).
/// State needs vector-space arithmetic (Eigen vectors/matrices qualify).
template <class State, class Rhs>
State rk4_step(const Rhs& f, double t, double h, const State& x) {
  const State k1 = f(t, x);
  const State k2 = f(t + 0.5 * h, State(x + (0.5 * h) * k1));
  const State k3 = f(t + 0.5 * h, State(x + (0.5 * h) * k2));
  const State k4 = f(t + h, State(x + h * k3));
  return State(x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
}

}  // namespace decstab
