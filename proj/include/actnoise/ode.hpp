// Copyright 2026 The actnoise Authors
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

#pragma once

#include <cstdint>
#include <limits>

#include "actnoise/common.hpp"
#include "actnoise/types.hpp"

namespace actnoise {

// ---------------------------------------------------------------------------
// Integrator configuration shared by the density-matrix and moment
// propagators.  The adaptive path is an embedded Dormand-Prince 5(4) pair;
// the fixed path is classic RK4 with a caller-chosen substep.
// ---------------------------------------------------------------------------
struct IntegratorOptions {
  double rtol = 1e-8;
  double atol = 1e-10;
  bool fixed_step = false;
  double fixed_dt = 0.0;  // required when fixed_step is set
  double initial_dt = 0.0;  // 0: heuristic from the first interval
  std::int64_t max_steps = 50000000;

  void validate() const {
    if (!(rtol >= 0.0) || !(atol >= 0.0) || (rtol == 0.0 && atol == 0.0))
      throw StructuralError("IntegratorOptions: need rtol > 0 or atol > 0");
    if (fixed_step && !(fixed_dt > 0.0))
      throw StructuralError("IntegratorOptions: fixed_step requires fixed_dt > 0");
    if (max_steps < 1) throw StructuralError("IntegratorOptions: max_steps must be >= 1");
  }
};

namespace detail {

// Scaled max-norm of the embedded error estimate.  Entries may be complex;
// the scale uses the modulus, so an oscillating coherence whose real part
// crosses zero still carries a sensible relative scale.  A zero scale (only
// possible with atol == 0) paired with a nonzero error reports infinity,
// forcing a step rejection rather than silent acceptance.
template <class State>
double weighted_error_norm(const State& err, const State& y0, const State& y1,
                           double atol, double rtol) {
  const auto* e = err.data();
  const auto* a = y0.data();
  const auto* b = y1.data();
  double worst = 0.0;
  for (Eigen::Index i = 0; i < err.size(); ++i) {
    const double ea = std::abs(e[i]);
    const double sc = atol + rtol * std::max(std::abs(a[i]), std::abs(b[i]));
    if (sc <= 0.0) {
      if (ea > 0.0) return std::numeric_limits<double>::infinity();
      continue;
    }
    if (ea / sc > worst) worst = ea / sc;
  }
  return worst;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Adaptive Dormand-Prince 5(4) over one interval [t0, t1].
//
// System requirements:
//   void rhs(double t, const State& y, State& dy) const;
//   void postprocess(State& y) const;   // applied to each accepted state
//
// h_hint carries the step size across consecutive intervals of a grid so the
// controller does not restart cold at every output time.  steps_used
// accumulates accepted+rejected attempts against opts.max_steps.
// ---------------------------------------------------------------------------
template <class State, class System>
void integrate_interval(const System& sys, State& y, double t0, double t1,
                        const IntegratorOptions& opts, double& h_hint,
                        std::int64_t& steps_used) {
  const double span = t1 - t0;
  if (!(span > 0.0)) throw IntegrationError("integrate_interval: empty interval", t0);

  // Butcher tableau (Dormand & Prince 1980).
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                   a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                   a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                   b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  // 5th-order minus embedded 4th-order weights (error estimator).
  constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                   e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                   e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

  State k1 = y, k2 = y, k3 = y, k4 = y, k5 = y, k6 = y, k7 = y, ytmp = y, ynew = y, err = y;

  double t = t0;
  double h = opts.initial_dt > 0.0 ? opts.initial_dt : (h_hint > 0.0 ? h_hint : span / 16.0);
  if (h > span) h = span;

  while (t < t1) {
    if (h > t1 - t) h = t1 - t;
    if (!(h > 0.0) || t + h == t)
      throw IntegrationError("adaptive step size underflow", t);
    if (++steps_used > opts.max_steps)
      throw IntegrationError("adaptive integrator exceeded max_steps", t);

    sys.rhs(t, y, k1);
    ytmp = y + (h * a21) * k1;
    sys.rhs(t + c2 * h, ytmp, k2);
    ytmp = y + (h * a31) * k1 + (h * a32) * k2;
    sys.rhs(t + c3 * h, ytmp, k3);
    ytmp = y + (h * a41) * k1 + (h * a42) * k2 + (h * a43) * k3;
    sys.rhs(t + c4 * h, ytmp, k4);
    ytmp = y + (h * a51) * k1 + (h * a52) * k2 + (h * a53) * k3 + (h * a54) * k4;
    sys.rhs(t + c5 * h, ytmp, k5);
    ytmp = y + (h * a61) * k1 + (h * a62) * k2 + (h * a63) * k3 + (h * a64) * k4 +
           (h * a65) * k5;
    sys.rhs(t + h, ytmp, k6);
    ynew = y + (h * b1) * k1 + (h * b3) * k3 + (h * b4) * k4 + (h * b5) * k5 + (h * b6) * k6;
    sys.rhs(t + h, ynew, k7);
    err = (h * e1) * k1 + (h * e3) * k3 + (h * e4) * k4 + (h * e5) * k5 + (h * e6) * k6 +
          (h * e7) * k7;

    const double enorm = detail::weighted_error_norm(err, y, ynew, opts.atol, opts.rtol);
    if (enorm <= 1.0) {
      t += h;
      y = ynew;
      sys.postprocess(y);
      double factor = 5.0;
      if (enorm > 0.0) factor = std::min(5.0, std::max(0.2, 0.9 * std::pow(enorm, -0.2)));
      h *= factor;
    } else {
      h *= std::max(0.2, std::min(0.9, 0.9 * std::pow(enorm, -0.2)));
    }
  }
  h_hint = h;
}

// Classic fixed-step RK4 over one interval, with at least one substep and a
// substep no larger than dt_target.
template <class State, class System>
void rk4_interval(const System& sys, State& y, double t0, double t1, double dt_target,
                  std::int64_t& steps_used, std::int64_t max_steps) {
  const double span = t1 - t0;
  if (!(span > 0.0)) throw IntegrationError("rk4_interval: empty interval", t0);
  const int n = std::max(1, static_cast<int>(std::ceil(span / dt_target - 1e-12)));
  const double h = span / n;
  State k1 = y, k2 = y, k3 = y, k4 = y, ytmp = y;
  for (int i = 0; i < n; ++i) {
    if (++steps_used > max_steps)
      throw IntegrationError("fixed-step integrator exceeded max_steps", t0 + i * h);
    const double t = t0 + i * h;
    sys.rhs(t, y, k1);
    ytmp = y + (0.5 * h) * k1;
    sys.rhs(t + 0.5 * h, ytmp, k2);
    ytmp = y + (0.5 * h) * k2;
    sys.rhs(t + 0.5 * h, ytmp, k3);
    ytmp = y + h * k3;
    sys.rhs(t + h, ytmp, k4);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    sys.postprocess(y);
  }
}

// Dispatch helper used by the propagators: walks a TimeGrid segment by
// segment so every grid time is hit exactly, invoking `record(index, y)`
// after each segment (index 0 is the initial state).
template <class State, class System, class Record>
void integrate_over_grid(const System& sys, State& y, const TimeGrid& grid,
                         const IntegratorOptions& opts, Record&& record) {
  opts.validate();
  record(std::size_t{0}, y);
  double h_hint = 0.0;
  std::int64_t steps_used = 0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (opts.fixed_step)
      rk4_interval(sys, y, grid[i - 1], grid[i], opts.fixed_dt, steps_used, opts.max_steps);
    else
      integrate_interval(sys, y, grid[i - 1], grid[i], opts, h_hint, steps_used);
    record(i, y);
  }
}

}  // namespace actnoise
