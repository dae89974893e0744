#pragma once

#include <cmath>
#include <stdexcept>

namespace irhm {

// One classical fourth-order Runge-Kutta step of dy/dt = rhs(t, y).
template <typename State, typename Rhs>
State rk4_step(const Rhs& rhs, double t, const State& y, double dt) {
  const State k1 = rhs(t, y);
  const State k2 = rhs(t + 0.5 * dt, State(y + (0.5 * dt) * k1));
  const State k3 = rhs(t + 0.5 * dt, State(y + (0.5 * dt) * k2));
  const State k4 = rhs(t + dt, State(y + dt * k3));
  return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Advances y from t0 to t1 in equal steps no longer than max_dt.
template <typename State, typename Rhs>
State rk4_advance(const Rhs& rhs, double t0, double t1, State y, double max_dt) {
  if (!(max_dt > 0.0)) throw std::invalid_argument("rk4: step must be positive");
  if (t1 <= t0) return y;
  const auto steps = static_cast<long>(std::ceil((t1 - t0) / max_dt - 1e-12));
  const double dt = (t1 - t0) / static_cast<double>(steps);
  for (long k = 0; k < steps; ++k) y = rk4_step(rhs, t0 + static_cast<double>(k) * dt, y, dt);
  return y;
}

}  // namespace irhm
