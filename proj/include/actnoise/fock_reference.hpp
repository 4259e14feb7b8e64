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

#include <cmath>
#include <vector>

#include "actnoise/oscillator.hpp"
#include "actnoise/propagator.hpp"

namespace actnoise {

// ---------------------------------------------------------------------------
// Truncated-Fock-basis reference for the oscillator.
//
// The Gaussian-moment path integrates five coupled moment ODEs; this module
// provides an independent cross-check that knows nothing about that closure:
// it builds q and p as finite ladder-basis matrices, propagates the full
// density operator with the generic master-equation propagator, and reads
// the moments back as traces.  Agreement between the two paths validates
// both the moment equations and the propagator on a genuinely
// time-dependent, non-commuting Hamiltonian.
// ---------------------------------------------------------------------------

/// Position operator in the `levels`-dimensional ladder basis of the
/// reference frequency (mass = 1): q = (a + a^dag) / sqrt(2 omega_ref).
inline Matrix fock_position(int levels, double omega_ref) {
  if (levels < 2) throw StructuralError("fock_position: need at least 2 levels");
  if (!(omega_ref > 0.0)) throw StructuralError("fock_position: omega_ref must be positive");
  Matrix q = Matrix::Zero(levels, levels);
  const double scale = 1.0 / std::sqrt(2.0 * omega_ref);
  for (int n = 1; n < levels; ++n) {
    q(n - 1, n) = scale * std::sqrt(static_cast<double>(n));
    q(n, n - 1) = q(n - 1, n);
  }
  return q;
}

/// Momentum operator: p = i sqrt(omega_ref / 2) (a^dag - a).
inline Matrix fock_momentum(int levels, double omega_ref) {
  if (levels < 2) throw StructuralError("fock_momentum: need at least 2 levels");
  if (!(omega_ref > 0.0)) throw StructuralError("fock_momentum: omega_ref must be positive");
  Matrix p = Matrix::Zero(levels, levels);
  const double scale = std::sqrt(omega_ref / 2.0);
  for (int n = 1; n < levels; ++n) {
    const double root = std::sqrt(static_cast<double>(n));
    p(n - 1, n) = Complex(0.0, -scale * root);
    p(n, n - 1) = Complex(0.0, scale * root);
  }
  return p;
}

/// Coherent state of the reference-frequency ladder displaced to phase-space
/// point (q0, p0): alpha = sqrt(omega_ref/2) (q0 + i p0 / omega_ref).  The
/// truncated amplitude vector is renormalized, so the returned state is an
/// exact unit-trace density operator of the finite basis.
inline DensityOperator fock_coherent_state(int levels, double omega_ref, double q0, double p0) {
  if (levels < 2) throw StructuralError("fock_coherent_state: need at least 2 levels");
  if (!(omega_ref > 0.0))
    throw StructuralError("fock_coherent_state: omega_ref must be positive");
  const Complex alpha = std::sqrt(omega_ref / 2.0) * Complex(q0, p0 / omega_ref);
  Eigen::VectorXcd psi(levels);
  psi(0) = 1.0;
  for (int n = 1; n < levels; ++n) psi(n) = psi(n - 1) * alpha / std::sqrt(static_cast<double>(n));
  psi.normalize();
  return DensityOperator::pure(psi);
}

/// H(t) = p^2/2 + omega^2(t) q^2/2 over the protocol's horizon, expressed in
/// the reference ladder basis.
inline HamiltonianTrajectory fock_hamiltonian(const FrequencyProtocol& proto, int levels,
                                              double omega_ref) {
  const Matrix q = fock_position(levels, omega_ref);
  const Matrix p = fock_momentum(levels, omega_ref);
  const Matrix q2 = q * q;
  const Matrix p2 = p * p;
  auto h = [proto, q2, p2](double t) -> Matrix { return 0.5 * p2 + 0.5 * proto.omega_sq(t) * q2; };
  auto dh = [proto, q2](double t) -> Matrix { return 0.5 * proto.domega_sq(t) * q2; };
  return HamiltonianTrajectory(levels, proto.t_f(), std::move(h), std::move(dh));
}

/// First and central second moments read off a density operator.
struct FockMoments {
  double q = 0.0;
  double p = 0.0;
  double cov_qq = 0.0;
  double cov_pp = 0.0;
  double cov_qp = 0.0;  // symmetrized: <{q,p}>/2 - <q><p>
};

inline FockMoments fock_moments(const DensityOperator& rho, const Matrix& q, const Matrix& p) {
  auto expect = [&rho](const Matrix& op) { return (rho.matrix() * op).trace().real(); };
  FockMoments m;
  m.q = expect(q);
  m.p = expect(p);
  m.cov_qq = expect(q * q) - m.q * m.q;
  m.cov_pp = expect(p * p) - m.p * m.p;
  m.cov_qp = 0.5 * expect(q * p + p * q) - m.q * m.p;
  return m;
}

struct FockReferenceOptions {
  int levels = 60;
  double omega_ref = 0.0;        // 0: use the protocol's initial frequency
  double tail_tolerance = 1e-7;  // max admissible population in the top two levels
  IntegratorOptions integrator{1e-11, 1e-14};
};

/// Propagate the displaced ground state (q0, p0) of the protocol's initial
/// frequency through the noisy master equation in the truncated basis and
/// return the moments at every grid time.  Throws DomainError if population
/// leaks into the top of the ladder beyond `tail_tolerance`, which would mean
/// the truncation (not the physics) is shaping the answer.
inline std::vector<FockMoments> propagate_fock_reference(const FrequencyProtocol& proto,
                                                         double q0, double p0,
                                                         const NoiseConfig& noise,
                                                         const TimeGrid& grid,
                                                         const FockReferenceOptions& opts = {}) {
  const double omega_ref = opts.omega_ref > 0.0 ? opts.omega_ref
                                                : std::sqrt(proto.omega_sq(0.0));
  const Matrix q = fock_position(opts.levels, omega_ref);
  const Matrix p = fock_momentum(opts.levels, omega_ref);
  const HamiltonianTrajectory traj = fock_hamiltonian(proto, opts.levels, omega_ref);
  const DensityOperator rho0 = fock_coherent_state(opts.levels, omega_ref, q0, p0);

  const auto states = propagate(traj, rho0, noise, grid, opts.integrator);
  std::vector<FockMoments> out;
  out.reserve(states.size());
  for (const DensityOperator& rho : states) {
    const double tail = rho.matrix()(opts.levels - 1, opts.levels - 1).real() +
                        rho.matrix()(opts.levels - 2, opts.levels - 2).real();
    if (!(tail <= opts.tail_tolerance))
      throw DomainError("propagate_fock_reference: top-of-ladder population " +
                        format_double(tail) + " exceeds tail tolerance " +
                        format_double(opts.tail_tolerance) +
                        "; increase levels or shorten the horizon");
    out.push_back(fock_moments(rho, q, p));
  }
  return out;
}

}  // namespace actnoise
