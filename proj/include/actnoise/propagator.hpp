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

#include <vector>

#include "actnoise/ode.hpp"
#include "actnoise/types.hpp"

namespace actnoise {

// ---------------------------------------------------------------------------
// Master equation
//
//   d rho / dt = -i [H(t), rho] - gamma [H(t), [H(t), rho]]
//
// The double commutator expands to -gamma (H^2 rho - 2 H rho H + rho H^2):
// pure dephasing in the instantaneous eigenbasis of H at rate
// gamma * (E_k - E_l)^2 per coherence, with no population transfer and no
// stationary-state change for states diagonal in that basis.
// ---------------------------------------------------------------------------

/// Action-noise dissipator -gamma (H^2 rho - 2 H rho H + rho H^2).
inline Matrix dissipator(const Matrix& h, const Matrix& rho, double gamma) {
  if (h.rows() != h.cols() || rho.rows() != rho.cols() || h.rows() != rho.rows())
    throw StructuralError("dissipator: dimension mismatch");
  const Matrix a = h * rho;   // H rho
  const Matrix b = h * a;     // H^2 rho
  // rho H^2 = (H^2 rho)^dagger for Hermitian h, rho; propagation keeps states
  // Hermitian to rounding, so the adjoint form saves two products.
  return -gamma * (b + b.adjoint() - 2.0 * (a * h));
}

/// Full right-hand side -i[H, rho] + dissipator.
inline Matrix master_rhs(const Matrix& h, const Matrix& rho, double gamma) {
  if (h.rows() != h.cols() || rho.rows() != rho.cols() || h.rows() != rho.rows())
    throw StructuralError("master_rhs: dimension mismatch");
  const Matrix a = h * rho;
  Matrix out = -kImag * (a - a.adjoint().eval());
  if (gamma != 0.0) {
    const Matrix b = h * a;
    out -= gamma * (b + b.adjoint().eval() - 2.0 * (a * h));
  }
  return out;
}

namespace detail {

struct MasterSystem {
  const HamiltonianTrajectory* traj;
  double gamma;

  void rhs(double t, const Matrix& rho, Matrix& out) const {
    const Matrix h = traj->hamiltonian(t);
    const Matrix a = h * rho;
    out = -kImag * (a - a.adjoint().eval());
    if (gamma != 0.0) {
      const Matrix b = h * a;
      out -= gamma * (b + b.adjoint().eval() - 2.0 * (a * h));
    }
  }

  // Hermiticity is an invariant of the flow; re-symmetrizing each accepted
  // step stops rounding drift from accumulating over long runs.  The trace is
  // deliberately NOT renormalized: trace drift is a real error signal and is
  // audited by the DensityOperator constructor at every grid time.
  void postprocess(Matrix& rho) const { rho = (0.5 * (rho + rho.adjoint())).eval(); }
};

}  // namespace detail

/// Propagates rho0 through the master equation, returning the state at every
/// grid time (index 0 is rho0 itself).  Throws IntegrationError (with the
/// failure time) if the tolerance cannot be met, StructuralError if the
/// integrated state stops being a density operator.
inline std::vector<DensityOperator> propagate(const HamiltonianTrajectory& traj,
                                              const DensityOperator& rho0,
                                              const NoiseConfig& noise,
                                              const TimeGrid& grid,
                                              const IntegratorOptions& opts = {}) {
  if (rho0.dim() != traj.dim())
    throw StructuralError("propagate: state and Hamiltonian dimensions differ");
  if (grid.t_f() > traj.t_f() * (1.0 + 1e-12))
    throw StructuralError("propagate: grid extends past the trajectory horizon");

  const detail::MasterSystem sys{&traj, noise.gamma};
  Matrix y = rho0.matrix();
  std::vector<DensityOperator> out;
  out.reserve(grid.size());
  integrate_over_grid(sys, y, grid, opts,
                      [&](std::size_t, const Matrix& state) { out.emplace_back(state); });
  return out;
}

}  // namespace actnoise
