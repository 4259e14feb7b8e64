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

#include <unsupported/Eigen/KroneckerProduct>

#include <limits>
#include <string>
#include <vector>

#include "actnoise/eigensystem.hpp"
#include "actnoise/types.hpp"

namespace actnoise {

/// Uhlmann fidelity F(rho, sigma) = tr sqrt( sqrt(rho) sigma sqrt(rho) ),
/// in [0, 1]; 1 iff the states coincide.
inline double uhlmann_fidelity(const DensityOperator& rho, const DensityOperator& sigma) {
  if (rho.dim() != sigma.dim())
    throw StructuralError("uhlmann_fidelity: dimension mismatch");
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix());
  if (es.info() != Eigen::Success)
    throw StructuralError("uhlmann_fidelity: eigensolver failed");
  Eigen::VectorXd roots = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Matrix sq = es.eigenvectors() * roots.asDiagonal() * es.eigenvectors().adjoint();
  Matrix inner = sq * sigma.matrix() * sq;
  inner = 0.5 * (inner + inner.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> es2(inner);
  if (es2.info() != Eigen::Success)
    throw StructuralError("uhlmann_fidelity: inner eigensolver failed");
  const double f = es2.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return std::min(1.0, f);
}

/// Trace distance (1/2) ||rho - sigma||_1.
inline double trace_distance(const DensityOperator& rho, const DensityOperator& sigma) {
  if (rho.dim() != sigma.dim()) throw StructuralError("trace_distance: dimension mismatch");
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix() - sigma.matrix(),
                                           Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

/// Instantaneous adiabaticity parameter for the level k of H(t):
///   mu_k(t) = sum_{l != k} |<k| dH/dt |l>| / (E_l - E_k)^2.
/// Throws DomainError when the spectrum at t is (near-)degenerate against
/// level k, where the measure is undefined.
inline double adiabatic_mu(const HamiltonianTrajectory& traj, double t, Eigen::Index k = 0) {
  if (k < 0 || k >= traj.dim()) throw StructuralError("adiabatic_mu: level out of range");
  const Matrix h = traj.hamiltonian(t);
  const EigenSystem es = instantaneous_eigensystem(h);
  const double scale = std::max(1e-300, es.values.cwiseAbs().maxCoeff());
  const Matrix dh = traj.derivative(t);
  double mu = 0.0;
  for (Eigen::Index l = 0; l < traj.dim(); ++l) {
    if (l == k) continue;
    const double gap = es.values(l) - es.values(k);
    if (std::abs(gap) <= 1e-10 * scale)
      throw DomainError("adiabatic_mu: degenerate gap at t=" + format_double(t));
    const Complex elem = es.vectors.col(k).dot(dh * es.vectors.col(l));
    mu += std::abs(elem) / (gap * gap);
  }
  return mu;
}

/// Time-averaged distance between the full generator and its unitary part in
/// the vectorized (column-stacking) representation:
///   G_D = (1/t_f) int ( ||Hsuper + Dsuper||_2 - ||Hsuper||_2 ) dt,
/// spectral norms, trapezoidal rule on the grid.  Both superoperators are
/// normal and commute here, so the norm difference reduces per time to
/// max_kl |i dE + gamma dE^2| - max_kl |dE|; the generic SVD evaluation is
/// kept so the metric stays meaningful for arbitrary generators.
inline double generator_distance(const HamiltonianTrajectory& traj, const NoiseConfig& noise,
                                 const TimeGrid& grid) {
  if (grid.t_f() > traj.t_f() * (1.0 + 1e-12))
    throw StructuralError("generator_distance: grid extends past the trajectory horizon");
  const Eigen::Index d = traj.dim();
  const Matrix id = Matrix::Identity(d, d);
  std::vector<double> integrand(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Matrix h = traj.hamiltonian(grid[i]);
    const Matrix h2 = h * h;
    const Matrix hsuper =
        -kImag * (Eigen::kroneckerProduct(id, h) - Eigen::kroneckerProduct(h.transpose(), id))
                     .eval();
    const Matrix dsuper =
        -noise.gamma *
        (Eigen::kroneckerProduct(id, h2) + Eigen::kroneckerProduct(h2.transpose(), id) -
         2.0 * Eigen::kroneckerProduct(h.transpose(), h))
            .eval();
    const double full = Eigen::JacobiSVD<Matrix>(hsuper + dsuper).singularValues()(0);
    const double bare = Eigen::JacobiSVD<Matrix>(hsuper).singularValues()(0);
    integrand[i] = full - bare;
  }
  double acc = 0.0;
  for (std::size_t i = 1; i < grid.size(); ++i)
    acc += 0.5 * (integrand[i] + integrand[i - 1]) * (grid[i] - grid[i - 1]);
  return acc / grid.t_f();
}

/// l1 coherence of rho in the given eigenbasis: C = 2 sum_{i<j} |rho_ij|.
inline double coherence_l1(const DensityOperator& rho, const EigenSystem& es) {
  const Matrix r = es.vectors.adjoint() * rho.matrix() * es.vectors;
  double c = 0.0;
  for (Eigen::Index i = 0; i < r.rows(); ++i)
    for (Eigen::Index j = i + 1; j < r.cols(); ++j) c += 2.0 * std::abs(r(i, j));
  return c;
}

/// Time average of coherence_l1 along a state series, trapezoidal rule.
/// The eigenbases must be the gauge-smoothed series of the driving
/// Hamiltonian on the same grid.
inline double average_coherence(const std::vector<DensityOperator>& states,
                                const std::vector<EigenSystem>& bases,
                                const TimeGrid& grid) {
  if (states.size() != grid.size() || bases.size() != grid.size())
    throw StructuralError("average_coherence: series/grid length mismatch");
  std::vector<double> c(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) c[i] = coherence_l1(states[i], bases[i]);
  double acc = 0.0;
  for (std::size_t i = 1; i < c.size(); ++i)
    acc += 0.5 * (c[i] + c[i - 1]) * (grid[i] - grid[i - 1]);
  return acc / grid.t_f();
}

inline double average_coherence(const std::vector<DensityOperator>& states,
                                const HamiltonianTrajectory& traj, const TimeGrid& grid) {
  return average_coherence(states, eigensystem_series(traj, grid), grid);
}

/// Relative decoherence C_R = (Cbar_ideal - Cbar_noisy) / Cbar_ideal.
/// Expected in [0, 1]; values outside are reported as-is (not clamped) so
/// violations of the expectation stay visible.  Undefined for zero ideal
/// coherence.
inline double relative_decoherence(double c_bar_ideal, double c_bar_noisy) {
  if (!(c_bar_ideal > 0.0))
    throw DomainError("relative_decoherence: undefined for c_bar_ideal <= 0");
  return (c_bar_ideal - c_bar_noisy) / c_bar_ideal;
}

/// Time-averaged noise-sensitivity parameter
///   M = (1/t_f) int sum_{k != l} (E_k - E_l)^2 dt   (ordered pairs),
/// trapezoidal rule on the grid.
inline double m_parameter(const HamiltonianTrajectory& traj, const TimeGrid& grid) {
  if (grid.t_f() > traj.t_f() * (1.0 + 1e-12))
    throw StructuralError("m_parameter: grid extends past the trajectory horizon");
  std::vector<double> integrand(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(traj.hamiltonian(grid[i]),
                                             Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
      throw StructuralError("m_parameter: eigensolver failed");
    double sum = 0.0;
    for (Eigen::Index k = 0; k < traj.dim(); ++k)
      for (Eigen::Index l = k + 1; l < traj.dim(); ++l) {
        const double de = es.eigenvalues()(k) - es.eigenvalues()(l);
        sum += 2.0 * de * de;
      }
    integrand[i] = sum;
  }
  double acc = 0.0;
  for (std::size_t i = 1; i < grid.size(); ++i)
    acc += 0.5 * (integrand[i] + integrand[i - 1]) * (grid[i] - grid[i - 1]);
  return acc / grid.t_f();
}

// ---------------------------------------------------------------------------
// One row of sweep/scan output.  NaN marks fields that do not apply to the
// system (e.g. coherence measures for the Gaussian-moment oscillator path).
// ---------------------------------------------------------------------------
struct DiagnosticsReport {
  std::string system;    // "TLS" | "HO"
  std::string protocol;  // "ARP" | "SP" | "ConstantMu" | "ErmakovSP"
  double t_f = std::numeric_limits<double>::quiet_NaN();
  double gamma = std::numeric_limits<double>::quiet_NaN();
  double knob = std::numeric_limits<double>::quiet_NaN();
  double fidelity = std::numeric_limits<double>::quiet_NaN();
  double mu_max = std::numeric_limits<double>::quiet_NaN();
  double generator_distance = std::numeric_limits<double>::quiet_NaN();
  double c_bar_ideal = std::numeric_limits<double>::quiet_NaN();
  double c_bar_noisy = std::numeric_limits<double>::quiet_NaN();
  double relative_decoherence = std::numeric_limits<double>::quiet_NaN();
  double m_parameter = std::numeric_limits<double>::quiet_NaN();
  double mc_trace_distance = std::numeric_limits<double>::quiet_NaN();
  std::string error;  // empty on success

  static std::string csv_header() {
    return "system,protocol,t_f,gamma,knob,fidelity,mu_max,generator_distance,"
           "c_bar_ideal,c_bar_noisy,relative_decoherence,m_parameter,"
           "mc_trace_distance,error";
  }

  std::string csv_row() const {
    std::string err = error;
    for (char& ch : err)
      if (ch == ',' || ch == '\n') ch = ';';
    std::string row = system + ',' + protocol + ',' + format_double(t_f) + ',' +
                      format_double(gamma) + ',' + format_double(knob) + ',' +
                      format_double(fidelity) + ',' + format_double(mu_max) + ',' +
                      format_double(generator_distance) + ',' + format_double(c_bar_ideal) +
                      ',' + format_double(c_bar_noisy) + ',' +
                      format_double(relative_decoherence) + ',' + format_double(m_parameter) +
                      ',' + format_double(mc_trace_distance) + ',' + err;
    return row;
  }
};

}  // namespace actnoise
