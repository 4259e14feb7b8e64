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

#include <algorithm>
#include <utility>

#include "actnoise/common.hpp"

namespace actnoise {

// ---------------------------------------------------------------------------
// NoiseConfig: single dephasing-strength parameter gamma, in seconds.
// gamma = 0 recovers closed unitary dynamics.  Hamiltonians carry rad/s, so
// gamma * H^2 has units rad^2/s, matching the rad/s of the commutator term.
// ---------------------------------------------------------------------------
struct NoiseConfig {
  double gamma = 0.0;

  NoiseConfig() = default;
  explicit NoiseConfig(double g) : gamma(g) {
    if (!(g >= 0.0) || !std::isfinite(g))
      throw StructuralError("NoiseConfig: gamma must be finite and >= 0, got " +
                            format_double(g));
  }
};

// ---------------------------------------------------------------------------
// TimeGrid: strictly increasing times from 0 to t_f.  n_steps() counts the
// intervals, so a grid holds n_steps()+1 points.
// ---------------------------------------------------------------------------
class TimeGrid {
 public:
  static TimeGrid uniform(double t_f, int n_steps) {
    if (!(t_f > 0.0) || !std::isfinite(t_f))
      throw StructuralError("TimeGrid: t_f must be finite and > 0");
    if (n_steps < 1) throw StructuralError("TimeGrid: n_steps must be >= 1");
    std::vector<double> ts(static_cast<std::size_t>(n_steps) + 1);
    for (int i = 0; i <= n_steps; ++i)
      ts[static_cast<std::size_t>(i)] = t_f * static_cast<double>(i) / n_steps;
    ts.front() = 0.0;
    ts.back() = t_f;
    return TimeGrid(std::move(ts));
  }

  static TimeGrid from_times(std::vector<double> ts) { return TimeGrid(std::move(ts)); }

  std::size_t size() const { return times_.size(); }
  int n_steps() const { return static_cast<int>(times_.size()) - 1; }
  double operator[](std::size_t i) const { return times_[i]; }
  double t_f() const { return times_.back(); }
  const std::vector<double>& times() const { return times_; }

 private:
  explicit TimeGrid(std::vector<double> ts) : times_(std::move(ts)) {
    if (times_.size() < 2) throw StructuralError("TimeGrid: need at least two times");
    if (times_.front() != 0.0) throw StructuralError("TimeGrid: times must start at 0");
    for (std::size_t i = 1; i < times_.size(); ++i) {
      if (!(times_[i] > times_[i - 1]))
        throw StructuralError("TimeGrid: times must be strictly increasing (index " +
                              std::to_string(i) + ")");
      if (!std::isfinite(times_[i])) throw StructuralError("TimeGrid: non-finite time");
    }
  }

  std::vector<double> times_;
};

// ---------------------------------------------------------------------------
// DensityOperator: Hermitian, unit-trace, positive-semidefinite matrix.
// Validation tolerances: Hermiticity 1e-12, trace 1e-10, eigenvalues down to
// -1e-10.  Construction is the single audit point; propagation routines
// return through it, so a drifting integrator is caught immediately.
// ---------------------------------------------------------------------------
class DensityOperator {
 public:
  static constexpr double kHermTol = 1e-12;
  static constexpr double kTraceTol = 1e-10;
  static constexpr double kEigTol = 1e-10;

  explicit DensityOperator(Matrix rho) : m_(std::move(rho)) {
    if (m_.rows() != m_.cols() || m_.rows() < 1)
      throw StructuralError("DensityOperator: matrix must be square");
    const double scale = std::max(1.0, m_.cwiseAbs().maxCoeff());
    if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > kHermTol * scale)
      throw StructuralError("DensityOperator: matrix is not Hermitian");
    const Complex tr = m_.trace();
    if (std::abs(tr - 1.0) > kTraceTol)
      throw StructuralError("DensityOperator: trace deviates from 1 by " +
                            format_double(std::abs(tr - 1.0)));
    Eigen::SelfAdjointEigenSolver<Matrix> es(m_, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
      throw StructuralError("DensityOperator: eigenvalue check failed to converge");
    if (es.eigenvalues().minCoeff() < -kEigTol)
      throw StructuralError("DensityOperator: negative eigenvalue " +
                            format_double(es.eigenvalues().minCoeff()));
  }

  /// Pure state |psi><psi| from a (not necessarily normalized) ket.
  static DensityOperator pure(const Eigen::VectorXcd& psi) {
    const double n2 = psi.squaredNorm();
    if (!(n2 > 0.0)) throw StructuralError("DensityOperator::pure: zero ket");
    return DensityOperator((psi * psi.adjoint()) / n2);
  }

  /// |k><k| in the computational basis.
  static DensityOperator basis_state(Eigen::Index dim, Eigen::Index k) {
    if (k < 0 || k >= dim) throw StructuralError("DensityOperator::basis_state: bad index");
    return DensityOperator(basis_projector(dim, k));
  }

  static DensityOperator maximally_mixed(Eigen::Index dim) {
    return DensityOperator(Matrix::Identity(dim, dim) / static_cast<double>(dim));
  }

  Eigen::Index dim() const { return m_.rows(); }
  const Matrix& matrix() const { return m_; }
  double purity() const { return (m_ * m_).trace().real(); }

 private:
  Matrix m_;
};

// ---------------------------------------------------------------------------
// HamiltonianTrajectory: Hermitian H(t) on [0, t_f], with an optional analytic
// derivative dH/dt.  When no derivative is supplied, a central finite
// difference with step t_f * 1e-6 is substituted and flagged in the metadata
// so diagnostics can tell analytic from approximated derivatives.
//
// Hermiticity is checked on a probe set at construction (endpoints plus
// interior samples); per-call re-validation would dominate the cost of the
// tight integrator loops.
// ---------------------------------------------------------------------------
class HamiltonianTrajectory {
 public:
  using MatrixFn = std::function<Matrix(double)>;

  HamiltonianTrajectory(Eigen::Index dim, double t_f, MatrixFn h, MatrixFn dh = nullptr)
      : dim_(dim), t_f_(t_f), h_(std::move(h)), dh_(std::move(dh)) {
    if (dim_ < 2) throw StructuralError("HamiltonianTrajectory: dim must be >= 2");
    if (!(t_f_ > 0.0) || !std::isfinite(t_f_))
      throw StructuralError("HamiltonianTrajectory: t_f must be finite and > 0");
    if (!h_) throw StructuralError("HamiltonianTrajectory: h(t) is required");
    fd_derivative_ = !static_cast<bool>(dh_);
    constexpr double probe[] = {0.0, 0.137, 0.5, 0.789, 1.0};
    for (double s : probe) {
      const Matrix hm = h_(s * t_f_);
      if (hm.rows() != dim_ || hm.cols() != dim_)
        throw StructuralError("HamiltonianTrajectory: h(t) has wrong dimensions");
      const double scale = std::max(1.0, hm.cwiseAbs().maxCoeff());
      if ((hm - hm.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw StructuralError("HamiltonianTrajectory: h(t) not Hermitian at t=" +
                              format_double(s * t_f_));
    }
  }

  Eigen::Index dim() const { return dim_; }
  double t_f() const { return t_f_; }
  bool derivative_is_finite_difference() const { return fd_derivative_; }

  Matrix hamiltonian(double t) const { return h_(t); }

  /// dH/dt; analytic when provided, otherwise a central difference clipped to
  /// the trajectory domain.
  Matrix derivative(double t) const {
    if (dh_) return dh_(t);
    const double eps = t_f_ * 1e-6;
    const double lo = std::max(0.0, t - eps);
    const double hi = std::min(t_f_, t + eps);
    return (h_(hi) - h_(lo)) / (hi - lo);
  }

 private:
  Eigen::Index dim_;
  double t_f_;
  MatrixFn h_;
  MatrixFn dh_;
  bool fd_derivative_ = false;
};

}  // namespace actnoise
