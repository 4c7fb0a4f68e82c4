// Copyright 2026 The lindblad-mitigation Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LMIT_ODE_HPP
#define LMIT_ODE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

#include "lmit/operator.hpp"

namespace lmit {

enum class IntegratorMethod { RK4, RK45 };

struct IntegratorConfig {
  IntegratorMethod method = IntegratorMethod::RK4;
  /// Fixed step for RK4. Zero selects the engine default min(1e-3, 0.01 / (||H|| + a)).
  double dt = 0.0;
  double rtol = 1e-8;
  double atol = 1e-10;
  std::size_t max_steps = 50'000'000;

  void validate() const {
    if (dt < 0.0 || !std::isfinite(dt)) throw ValueError("integrator dt must be positive");
    if (!(rtol > 0.0) || !(atol > 0.0)) throw ValueError("integrator tolerances must be positive");
    if (max_steps == 0) throw ValueError("integrator max_steps must be positive");
  }
};

struct IntegrationStats {
  std::size_t steps = 0;
  std::size_t rejected = 0;
  std::size_t rhs_evaluations = 0;
};

namespace detail {

inline void check_finite(const Matrix& y, double t) {
  if (!y.allFinite())
    throw IntegrationError("non-finite value encountered in state at t = " + std::to_string(t));
}

}  // namespace detail

/// Classic fixed-step RK4 on [t0, t1]. `f(t, y, dydt)` writes the derivative into dydt.
/// `on_step(t, h)` is called after each accepted step starting at t.
template <class Rhs, class OnStep>
Matrix integrate_rk4(Rhs&& f, Matrix y, double t0, double t1, double dt, std::size_t max_steps,
                     IntegrationStats& stats, OnStep&& on_step) {
  const double span = t1 - t0;
  if (span <= 0.0) return y;
  const auto n = static_cast<std::size_t>(std::ceil(span / dt - 1e-9));
  const std::size_t steps = std::max<std::size_t>(n, 1);
  if (steps > max_steps)
    throw IntegrationError("RK4 needs " + std::to_string(steps) + " steps, budget is " +
                           std::to_string(max_steps));
  const double h = span / static_cast<double>(steps);
  Matrix k1(y.rows(), y.cols()), k2(k1), k3(k1), k4(k1), tmp(k1);
  for (std::size_t s = 0; s < steps; ++s) {
    const double t = t0 + static_cast<double>(s) * h;
    f(t, y, k1);
    tmp = y + (0.5 * h) * k1;
    f(t + 0.5 * h, tmp, k2);
    tmp = y + (0.5 * h) * k2;
    f(t + 0.5 * h, tmp, k3);
    tmp = y + h * k3;
    f(t + h, tmp, k4);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    detail::check_finite(y, t + h);
    stats.steps += 1;
    stats.rhs_evaluations += 4;
    on_step(t, h);
  }
  return y;
}

/// Dormand-Prince 5(4) with FSAL and standard step-size control.
template <class Rhs, class OnStep>
Matrix integrate_rk45(Rhs&& f, Matrix y, double t0, double t1, double rtol, double atol,
                      std::size_t max_steps, IntegrationStats& stats, OnStep&& on_step) {
  if (t1 - t0 <= 0.0) return y;
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                   a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                   a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                   b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  const auto rows = y.rows();
  const auto cols = y.cols();
  Matrix k1(rows, cols), k2(k1), k3(k1), k4(k1), k5(k1), k6(k1), k7(k1), tmp(k1), ynew(k1),
      err(k1);
  double t = t0;
  f(t, y, k1);
  stats.rhs_evaluations += 1;

  const double scale0 = atol + rtol * y.cwiseAbs().maxCoeff();
  const double d1 = k1.cwiseAbs().maxCoeff();
  double h = d1 > 0 ? 0.01 * scale0 / d1 : 1e-3;
  h = std::clamp(h, 1e-10, t1 - t0);
  h = std::max(h, 1e-6 * (t1 - t0));

  std::size_t attempts = 0;
  while (t < t1) {
    if (++attempts > max_steps)
      throw IntegrationError("RK45 step budget exhausted at t = " + std::to_string(t));
    if (t + h > t1) h = t1 - t;
    tmp = y + h * (a21 * k1);
    f(t + c2 * h, tmp, k2);
    tmp = y + h * (a31 * k1 + a32 * k2);
    f(t + c3 * h, tmp, k3);
    tmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
    f(t + c4 * h, tmp, k4);
    tmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    f(t + c5 * h, tmp, k5);
    tmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    f(t + h, tmp, k6);
    ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    f(t + h, ynew, k7);
    stats.rhs_evaluations += 6;
    err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    double acc = 0.0;
    for (Eigen::Index j = 0; j < cols; ++j)
      for (Eigen::Index i = 0; i < rows; ++i) {
        const double sc = atol + rtol * std::max(std::abs(y(i, j)), std::abs(ynew(i, j)));
        const double q = std::abs(err(i, j)) / sc;
        acc += q * q;
      }
    const double enorm = std::sqrt(acc / static_cast<double>(rows * cols));
    if (!std::isfinite(enorm))
      throw IntegrationError("non-finite error estimate at t = " + std::to_string(t));

    if (enorm <= 1.0) {
      on_step(t, h);
      t += h;
      y.swap(ynew);
      k1.swap(k7);
      stats.steps += 1;
      detail::check_finite(y, t);
      const double factor = enorm == 0.0 ? 5.0 : std::min(5.0, 0.9 * std::pow(enorm, -0.2));
      h *= factor;
    } else {
      stats.rejected += 1;
      h *= std::max(0.2, 0.9 * std::pow(enorm, -0.2));
      if (h < 1e-14 * std::max(1.0, std::abs(t)))
        throw IntegrationError("RK45 step size underflow at t = " + std::to_string(t));
    }
  }
  return y;
}

}  // namespace lmit

#endif  // LMIT_ODE_HPP
