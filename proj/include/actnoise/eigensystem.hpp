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

#include "actnoise/types.hpp"

namespace actnoise {

// ---------------------------------------------------------------------------
// Instantaneous eigensystem with a continuous gauge.
//
// Eigen returns eigenvectors with arbitrary global phases; any quantity built
// from a finite-difference of eigenvectors along a trajectory (adiabaticity
// diagnostics, eigenbasis equations of motion) is garbage unless the phases
// are pinned.  Two rules are used:
//   * no reference vectors: rotate each column so its largest-modulus
//     component is real and positive;
//   * with reference vectors (the previous grid point): rotate so the overlap
//     with the reference column is real and positive.  If that overlap is
//     numerically zero (level crossing / ordering swap) the rule falls back
//     to the largest-component convention for that column.
// ---------------------------------------------------------------------------

struct EigenSystem {
  Eigen::VectorXd values;  // ascending
  Matrix vectors;          // orthonormal columns, gauge-fixed
  bool degenerate = false;  // some gap below 1e-12 * spectral scale
};

inline EigenSystem instantaneous_eigensystem(const Matrix& h,
                                             const Matrix* previous = nullptr) {
  if (h.rows() != h.cols() || h.rows() < 1)
    throw StructuralError("instantaneous_eigensystem: matrix must be square");
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw StructuralError("instantaneous_eigensystem: matrix is not Hermitian");
  if (previous && (previous->rows() != h.rows() || previous->cols() != h.cols()))
    throw StructuralError("instantaneous_eigensystem: reference gauge has wrong shape");

  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  if (solver.info() != Eigen::Success)
    throw StructuralError("instantaneous_eigensystem: eigensolver failed to converge");

  EigenSystem es;
  es.values = solver.eigenvalues();
  es.vectors = solver.eigenvectors();

  const Eigen::Index n = h.rows();
  for (Eigen::Index k = 0; k < n; ++k) {
    Complex phase(0.0, 0.0);
    if (previous) {
      const Complex overlap = previous->col(k).dot(es.vectors.col(k));
      if (std::abs(overlap) > 1e-8) phase = overlap / std::abs(overlap);
    }
    if (phase == Complex(0.0, 0.0)) {
      Eigen::Index imax = 0;
      es.vectors.col(k).cwiseAbs().maxCoeff(&imax);
      const Complex lead = es.vectors(imax, k);
      phase = lead / std::abs(lead);
    }
    es.vectors.col(k) *= std::conj(phase);
  }

  const double spectral = std::max(1e-300, es.values.cwiseAbs().maxCoeff());
  for (Eigen::Index k = 1; k < n; ++k)
    if (es.values(k) - es.values(k - 1) <= 1e-12 * spectral) es.degenerate = true;
  return es;
}

struct EigenbasisDecomposition {
  Eigen::VectorXd populations;  // diagonal of V^dag rho V
  Matrix coherences;            // off-diagonal part, diagonal zeroed
};

/// Populations and coherences of rho in the given instantaneous eigenbasis.
inline EigenbasisDecomposition eigenbasis_populations_coherences(
    const DensityOperator& rho, const EigenSystem& es) {
  if (rho.dim() != es.vectors.rows())
    throw StructuralError("eigenbasis_populations_coherences: dimension mismatch");
  EigenbasisDecomposition dec;
  const Matrix r = es.vectors.adjoint() * rho.matrix() * es.vectors;
  dec.populations = r.diagonal().real();
  dec.coherences = r;
  dec.coherences.diagonal().setZero();
  if (std::abs(dec.populations.sum() - 1.0) > 1e-10)
    throw StructuralError("eigenbasis_populations_coherences: populations sum to " +
                          format_double(dec.populations.sum()) +
                          "; basis is not unitary within tolerance");
  return dec;
}

/// Gauge-smoothed eigensystem along a grid: each point uses the previous one
/// as phase reference, giving eigenvector series that are termwise continuous
/// wherever the spectrum is gapped.
inline std::vector<EigenSystem> eigensystem_series(const HamiltonianTrajectory& traj,
                                                   const TimeGrid& grid) {
  std::vector<EigenSystem> out;
  out.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Matrix h = traj.hamiltonian(grid[i]);
    out.push_back(instantaneous_eigensystem(h, out.empty() ? nullptr : &out.back().vectors));
  }
  return out;
}

}  // namespace actnoise
