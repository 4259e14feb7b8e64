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

#include "actnoise/eigensystem.hpp"
#include "actnoise/types.hpp"

namespace actnoise {

// ---------------------------------------------------------------------------
// Stochastic unraveling of the dephasing master equation.
//
// Each trajectory applies, per grid interval, the unitary generated by the
// midpoint Hamiltonian over a jittered duration
//
//   tau = dt + sqrt(2 gamma) dW,      dW ~ N(0, dt).
//
// Averaging exp(-iH tau) rho exp(+iH tau) over dW multiplies each eigenbasis
// coherence by exp(-i dE dt) * exp(-gamma dE^2 dt) (Gaussian characteristic
// function), which is exactly the frozen-H master-equation step: the ensemble
// mean converges to propagate() with no factor ambiguity.  The variance
// 2*gamma*dt is what makes the match exact; a plain variance of gamma*dt
// would reproduce only half the dissipator.
//
// Validity of the midpoint freezing requires max|dE| * sqrt(gamma*dt) << 1
// and dt small against the control timescale; drive the grid accordingly.
// ---------------------------------------------------------------------------

namespace detail {

// Midpoint eigendecompositions are identical for every trajectory of an
// ensemble; hoisting them out of the per-trajectory loop leaves only scaled
// matrix products in the hot path.
struct UnravelPlan {
  std::vector<Matrix> vectors;
  std::vector<Eigen::VectorXd> values;
  std::vector<double> dts;

  static UnravelPlan build(const HamiltonianTrajectory& traj, const TimeGrid& grid) {
    UnravelPlan plan;
    const std::size_t n = grid.size() - 1;
    plan.vectors.reserve(n);
    plan.values.reserve(n);
    plan.dts.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double mid = 0.5 * (grid[i] + grid[i + 1]);
      const EigenSystem es = instantaneous_eigensystem(traj.hamiltonian(mid));
      plan.vectors.push_back(es.vectors);
      plan.values.push_back(es.values);
      plan.dts.push_back(grid[i + 1] - grid[i]);
    }
    return plan;
  }
};

inline Matrix run_unraveled(const UnravelPlan& plan, Matrix rho, double gamma,
                            std::uint64_t seed) {
  GaussianSampler gauss(seed);
  const double amp = std::sqrt(2.0 * gamma);
  const Eigen::Index dim = rho.rows();
  Eigen::VectorXcd phases(dim);
  Matrix u(dim, dim);
  for (std::size_t i = 0; i < plan.dts.size(); ++i) {
    const double dt = plan.dts[i];
    double tau = dt;
    if (gamma > 0.0) tau += amp * std::sqrt(dt) * gauss();
    for (Eigen::Index j = 0; j < dim; ++j)
      phases(j) = std::exp(Complex(0.0, -plan.values[i](j) * tau));
    u.noalias() = plan.vectors[i] * phases.asDiagonal() * plan.vectors[i].adjoint();
    rho = u * rho * u.adjoint();
    rho = (0.5 * (rho + rho.adjoint())).eval();
  }
  return rho;
}

}  // namespace detail

/// One stochastic trajectory; returns the state at the final grid time.
/// Identical (seed, grid) pairs give bitwise-identical results.
inline DensityOperator stochastic_trajectory(const HamiltonianTrajectory& traj,
                                             const DensityOperator& rho0,
                                             const NoiseConfig& noise, const TimeGrid& grid,
                                             std::uint64_t seed) {
  if (rho0.dim() != traj.dim())
    throw StructuralError("stochastic_trajectory: state and Hamiltonian dimensions differ");
  if (grid.t_f() > traj.t_f() * (1.0 + 1e-12))
    throw StructuralError("stochastic_trajectory: grid extends past the trajectory horizon");
  const detail::UnravelPlan plan = detail::UnravelPlan::build(traj, grid);
  return DensityOperator(detail::run_unraveled(plan, rho0.matrix(), noise.gamma, seed));
}

/// Ensemble mean over n_trajectories unravelings, trajectory i seeded with
/// seed ^ i.  Trajectories are summed in fixed blocks of 64 and the block
/// sums combined in order, so the result is bitwise independent of the thread
/// count.
inline DensityOperator stochastic_ensemble_mean(const HamiltonianTrajectory& traj,
                                                const DensityOperator& rho0,
                                                const NoiseConfig& noise,
                                                const TimeGrid& grid, std::uint64_t seed,
                                                std::size_t n_trajectories,
                                                unsigned threads = 0) {
  if (n_trajectories < 1)
    throw StructuralError("stochastic_ensemble_mean: need at least one trajectory");
  if (rho0.dim() != traj.dim())
    throw StructuralError("stochastic_ensemble_mean: dimension mismatch");
  if (grid.t_f() > traj.t_f() * (1.0 + 1e-12))
    throw StructuralError("stochastic_ensemble_mean: grid extends past the horizon");

  const detail::UnravelPlan plan = detail::UnravelPlan::build(traj, grid);
  constexpr std::size_t kBlock = 64;
  const std::size_t n_blocks = (n_trajectories + kBlock - 1) / kBlock;
  std::vector<Matrix> block_sums(n_blocks);

  parallel_for(n_blocks, threads, [&](std::size_t b) {
    Matrix acc = Matrix::Zero(traj.dim(), traj.dim());
    const std::size_t lo = b * kBlock;
    const std::size_t hi = std::min(n_trajectories, lo + kBlock);
    for (std::size_t i = lo; i < hi; ++i)
      acc += detail::run_unraveled(plan, rho0.matrix(), noise.gamma,
                                   seed ^ static_cast<std::uint64_t>(i));
    block_sums[b] = std::move(acc);
  });

  Matrix total = Matrix::Zero(traj.dim(), traj.dim());
  for (const Matrix& s : block_sums) total += s;
  total /= static_cast<double>(n_trajectories);
  return DensityOperator((0.5 * (total + total.adjoint())).eval());
}

}  // namespace actnoise
