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

#include <iostream>
#include <memory>
#include <optional>

#include "actnoise/propagator.hpp"
#include "actnoise/types.hpp"

namespace actnoise {

// ---------------------------------------------------------------------------
// Two-level control protocols
//
//   H(t) = (delta(t)/2) sigma_z + (omega(t)/2) sigma_x,
//
// gap dE(t) = sqrt(delta^2 + omega^2), adiabaticity parameter
//
//   mu(t) = |delta * domega/dt - omega * ddelta/dt| / (2 (delta^2+omega^2)^{3/2}).
//
// Both protocols steer |0> (the upper eigenstate at t=0, where
// H(0) = (delta0/2) sigma_z) into |1> at t = t_f.
//
// ARP: delta = delta0 cos(w t), omega = delta0 sin(w t), w = (1+2n) pi / t_f.
// The gap is constantly delta0 and mu = (1+2n) pi / (2 delta0 t_f).
//
// SP ("shortcut protocol"): built from a dynamical invariant
// I(t) = (1/2) n(t).sigma with n = (sin th cos al, sin th sin al, cos th).
// Requiring dn/dt = B x n with B = (omega, 0, delta) inverts to
//
//   omega = -dth/dt / sin(al),   delta = dal/dt - dth/dt cot(th) cot(al).
//
// The state rides the +1/2 eigenvector of I, so boundary conditions on
// (th, al) make the transfer exact regardless of speed; the knob deforms al
// in the interior, trading gap size against angle speed without touching the
// endpoints.
// ---------------------------------------------------------------------------

/// Angle trajectory with analytic first and second derivatives.
struct SmoothAngle {
  std::function<double(double)> value;
  std::function<double(double)> rate;
  std::function<double(double)> accel;
};

/// Control coefficient functions (values and rates) for a TLS protocol.
struct TlsControls {
  std::function<double(double)> delta;
  std::function<double(double)> omega;
  std::function<double(double)> ddelta;
  std::function<double(double)> domega;
};

/// Inverts the invariant angles (theta, alpha) into control coefficients.
/// Defined where sin(theta) and sin(alpha) are nonzero; callers own the
/// endpoint limits.  With theta = pi t/t_f and alpha = -pi/2 this recovers
/// the flat pi pulse omega = pi/t_f, delta = 0.
inline TlsControls auxiliary_angles(const SmoothAngle& theta, const SmoothAngle& alpha) {
  if (!theta.value || !theta.rate || !theta.accel || !alpha.value || !alpha.rate ||
      !alpha.accel)
    throw StructuralError("auxiliary_angles: angle functions must all be set");
  TlsControls c;
  c.omega = [theta, alpha](double t) {
    return -theta.rate(t) / std::sin(alpha.value(t));
  };
  c.delta = [theta, alpha](double t) {
    const double th = theta.value(t), al = alpha.value(t);
    return alpha.rate(t) -
           theta.rate(t) * (std::cos(th) / std::sin(th)) * (std::cos(al) / std::sin(al));
  };
  c.domega = [theta, alpha](double t) {
    const double al = alpha.value(t), sa = std::sin(al);
    return -theta.accel(t) / sa + theta.rate(t) * alpha.rate(t) * std::cos(al) / (sa * sa);
  };
  c.ddelta = [theta, alpha](double t) {
    const double th = theta.value(t), al = alpha.value(t);
    const double st = std::sin(th), ct = std::cos(th) / st;
    const double sa = std::sin(al), ca = std::cos(al) / sa;
    const double dth = theta.rate(t), dal = alpha.rate(t);
    return alpha.accel(t) - theta.accel(t) * ct * ca + dth * dth * ca / (st * st) +
           dth * dal * ct / (sa * sa);
  };
  return c;
}

enum class TlsKind { Arp, Sp };

inline const char* to_string(TlsKind k) { return k == TlsKind::Arp ? "ARP" : "SP"; }

class TlsProtocol {
 public:
  TlsKind kind() const { return kind_; }
  double delta0() const { return delta0_; }
  double t_f() const { return t_f_; }
  double knob() const { return knob_; }
  int winding() const { return winding_; }

  double delta(double t) const { return controls_.delta(t); }
  double omega(double t) const { return controls_.omega(t); }
  double ddelta(double t) const { return controls_.ddelta(t); }
  double domega(double t) const { return controls_.domega(t); }
  double gap(double t) const { return std::hypot(delta(t), omega(t)); }

  /// Instantaneous adiabaticity parameter.
  double mu(double t) const {
    const double d = delta(t), o = omega(t);
    const double g2 = d * d + o * o;
    if (!(g2 > 0.0)) throw DomainError("TlsProtocol::mu: zero gap at t=" + format_double(t));
    return std::abs(d * domega(t) - o * ddelta(t)) / (2.0 * g2 * std::sqrt(g2));
  }

  /// Max of mu over a uniform sample of [0, t_f].
  double mu_max(int samples = 2001) const {
    if (samples < 2) throw StructuralError("TlsProtocol::mu_max: samples must be >= 2");
    double m = 0.0;
    for (int i = 0; i <= samples - 1; ++i)
      m = std::max(m, mu(t_f_ * static_cast<double>(i) / (samples - 1)));
    return m;
  }

  HamiltonianTrajectory hamiltonian_trajectory() const {
    const TlsControls c = controls_;
    const Matrix sz = sigma_z(), sx = sigma_x();
    return HamiltonianTrajectory(
        2, t_f_,
        [c, sz, sx](double t) -> Matrix { return 0.5 * (c.delta(t) * sz + c.omega(t) * sx); },
        [c, sz, sx](double t) -> Matrix {
          return 0.5 * (c.ddelta(t) * sz + c.domega(t) * sx);
        });
  }

  static DensityOperator initial_state() { return DensityOperator::basis_state(2, 0); }
  static DensityOperator target_state() { return DensityOperator::basis_state(2, 1); }

  /// Tabulated text form: '#'-prefixed header, then whitespace-separated rows
  /// (t, delta, omega).
  void write_table(std::ostream& os, int rows = 501) const {
    if (rows < 2) throw StructuralError("TlsProtocol::write_table: rows must be >= 2");
    os << "# tls-protocol v1\n";
    os << "# kind=" << to_string(kind_) << " delta0=" << format_double(delta0_)
       << " t_f=" << format_double(t_f_);
    if (kind_ == TlsKind::Sp)
      os << " knob=" << format_double(knob_);
    else
      os << " winding=" << winding_;
    os << "\n# columns: t delta omega\n";
    for (int i = 0; i < rows; ++i) {
      const double t = t_f_ * static_cast<double>(i) / (rows - 1);
      os << format_double(t) << ' ' << format_double(delta(t)) << ' '
         << format_double(omega(t)) << '\n';
    }
  }

 private:
  friend TlsProtocol arp_protocol(double, double, int);
  friend TlsProtocol sp_protocol(double, double, double);

  TlsProtocol(TlsKind kind, double delta0, double t_f, double knob, int winding,
              TlsControls controls)
      : kind_(kind),
        delta0_(delta0),
        t_f_(t_f),
        knob_(knob),
        winding_(winding),
        controls_(std::move(controls)) {}

  TlsKind kind_;
  double delta0_;
  double t_f_;
  double knob_;
  int winding_;
  TlsControls controls_;
};

namespace detail {

inline void check_tls_args(double delta0, double t_f) {
  if (!(delta0 > 0.0) || !std::isfinite(delta0))
    throw StructuralError("TLS protocol: delta0 must be finite and > 0");
  if (!(t_f > 0.0) || !std::isfinite(t_f))
    throw StructuralError("TLS protocol: t_f must be finite and > 0");
}

// Quintic smoothstep and derivatives: q(0)=0, q(1)=1, q'=q''=0 at both ends.
inline double smooth01(double s) { return s * s * s * (10.0 + s * (-15.0 + 6.0 * s)); }
inline double smooth01_d1(double s) {
  const double u = 1.0 - s;
  return 30.0 * s * s * u * u;
}
inline double smooth01_d2(double s) { return 60.0 * s * (1.0 - s) * (1.0 - 2.0 * s); }

// SP auxiliary tilt p(s) = alpha(s) + pi/2 and derivatives in s.
struct SpTilt {
  double a;     // boundary slope delta0 * t_f / 4
  double knob;  // interior deformation amplitude

  double p(double s) const {
    const double u = 1.0 - s;
    return a * s * u + knob * s * s * u * u;
  }
  double d1(double s) const {
    const double u = 1.0 - s;
    return a * (1.0 - 2.0 * s) + 2.0 * knob * s * u * (1.0 - 2.0 * s);
  }
  double d2(double s) const {
    const double w = 1.0 - 2.0 * s;
    return -2.0 * a + 2.0 * knob * (w * w - 2.0 * s * (1.0 - s));
  }
};

}  // namespace detail

/// Adiabatic rapid passage with winding number n >= 0 (n half-turns beyond
/// the first); the gap is constantly delta0.
inline TlsProtocol arp_protocol(double delta0, double t_f, int n = 0) {
  detail::check_tls_args(delta0, t_f);
  if (n < 0) throw StructuralError("arp_protocol: winding must be >= 0");
  const double w = (1.0 + 2.0 * n) * M_PI / t_f;
  TlsControls c;
  c.delta = [delta0, w](double t) { return delta0 * std::cos(w * t); };
  c.omega = [delta0, w](double t) { return delta0 * std::sin(w * t); };
  c.ddelta = [delta0, w](double t) { return -delta0 * w * std::sin(w * t); };
  c.domega = [delta0, w](double t) { return delta0 * w * std::cos(w * t); };
  return TlsProtocol(TlsKind::Arp, delta0, t_f, 0.0, n, std::move(c));
}

/// Margin kept between max|alpha + pi/2| and the cot(alpha) singularity.
inline constexpr double kSpSingularMargin = 0.05;

/// Invariant-based shortcut protocol.
///
/// theta(t) = pi * smooth01(t/t_f); alpha(t) = -pi/2 + p(t) with
/// p(s) = (delta0 t_f/4) s(1-s) + knob s^2 (1-s)^2.  The s(1-s) slope is
/// fixed by the endpoint limits: theta's cubic contact gives
/// dth/dt cot(th) -> 3/t, so delta(0) = 4 p'(0)/t_f, and p'(0) = delta0 t_f/4
/// lands delta(0) = delta0 (and delta(t_f) = -delta0 by symmetry) with
/// omega(0) = omega(t_f) = 0.  Increasing the knob inflates the midcourse gap.
///
/// Throws ProtocolError naming the first singular time if |p| approaches
/// pi/2 (omega = dth/dt / cos p diverges there), and if the construction
/// self-test (noise-free transfer |0> -> |1>) misses fidelity 1 - 1e-6.
inline TlsProtocol sp_protocol(double delta0, double t_f, double knob) {
  detail::check_tls_args(delta0, t_f);
  if (!std::isfinite(knob)) throw StructuralError("sp_protocol: knob must be finite");

  const detail::SpTilt tilt{delta0 * t_f / 4.0, knob};

  // Reject knobs that drive cos(p) through zero anywhere on the protocol.
  constexpr int kScan = 4001;
  for (int i = 0; i <= kScan; ++i) {
    const double s = static_cast<double>(i) / kScan;
    if (std::abs(tilt.p(s)) >= M_PI / 2.0 - kSpSingularMargin)
      throw ProtocolError("sp_protocol: control singular (|alpha + pi/2| reaches pi/2) "
                          "first at t=" +
                          format_double(s * t_f) + " for knob=" + format_double(knob));
  }

  const SmoothAngle theta{
      [t_f](double t) { return M_PI * detail::smooth01(t / t_f); },
      [t_f](double t) { return M_PI * detail::smooth01_d1(t / t_f) / t_f; },
      [t_f](double t) { return M_PI * detail::smooth01_d2(t / t_f) / (t_f * t_f); }};
  const SmoothAngle alpha{
      [t_f, tilt](double t) { return -M_PI / 2.0 + tilt.p(t / t_f); },
      [t_f, tilt](double t) { return tilt.d1(t / t_f) / t_f; },
      [t_f, tilt](double t) { return tilt.d2(t / t_f) / (t_f * t_f); }};
  const TlsControls raw = auxiliary_angles(theta, alpha);

  // Exact endpoint limits (the raw map hits 0 * inf at sin(theta) = 0):
  // delta(0) = delta0, delta(t_f) = -delta0, omega = 0 and domega = 0 at both
  // ends, and ddelta(0) = ddelta(t_f) = (5 knob - 6.5 a) / t_f^2 from the
  // series expansion of the inverse map around the endpoints.
  const double edge = 1e-9 * t_f;
  const double ddelta_end = (5.0 * knob - 6.5 * tilt.a) / (t_f * t_f);
  TlsControls c;
  c.delta = [raw, delta0, t_f, edge](double t) {
    if (t <= edge) return delta0;
    if (t >= t_f - edge) return -delta0;
    return raw.delta(t);
  };
  c.omega = [raw, t_f, edge](double t) {
    if (t <= edge || t >= t_f - edge) return 0.0;
    return raw.omega(t);
  };
  c.ddelta = [raw, ddelta_end, t_f, edge](double t) {
    if (t <= edge || t >= t_f - edge) return ddelta_end;
    return raw.ddelta(t);
  };
  c.domega = [raw, t_f, edge](double t) {
    if (t <= edge || t >= t_f - edge) return 0.0;
    return raw.domega(t);
  };

  TlsProtocol proto(TlsKind::Sp, delta0, t_f, knob, 0, std::move(c));

  // Construction self-test: the invariant construction must transfer
  // |0> -> |1> exactly in the noise-free limit.
  IntegratorOptions opts;
  opts.rtol = 1e-10;
  opts.atol = 1e-12;
  const auto states = propagate(proto.hamiltonian_trajectory(), TlsProtocol::initial_state(),
                                NoiseConfig(0.0), TimeGrid::uniform(t_f, 1), opts);
  const double overlap = states.back().matrix()(1, 1).real();
  const double infidelity = 1.0 - std::sqrt(std::max(0.0, overlap));
  if (!(infidelity <= 1e-6))
    throw ProtocolError("sp_protocol: self-test transfer infidelity " +
                        format_double(infidelity) + " exceeds 1e-6");
  return proto;
}

/// Largest knob interval (conservatively margined) on which sp_protocol
/// constructs for these (delta0, t_f); useful as a default scan range.
inline std::pair<double, double> sp_knob_range(double delta0, double t_f) {
  detail::check_tls_args(delta0, t_f);
  const double a = delta0 * t_f / 4.0;
  const double cap = M_PI / 2.0 - 2.0 * kSpSingularMargin;
  auto admissible = [&](double knob) {
    const detail::SpTilt tilt{a, knob};
    double worst = 0.0;
    for (int i = 0; i <= 800; ++i)
      worst = std::max(worst, std::abs(tilt.p(static_cast<double>(i) / 800)));
    return worst < cap;
  };
  if (!admissible(0.0))
    throw DomainError("sp_knob_range: no admissible knob (delta0 * t_f too large)");
  double hi_ok = 0.0, hi_bad = 1.0;
  while (admissible(hi_bad)) {
    hi_ok = hi_bad;
    hi_bad *= 2.0;
    if (hi_bad > 1e9) break;
  }
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (hi_ok + hi_bad);
    (admissible(mid) ? hi_ok : hi_bad) = mid;
  }
  double lo_ok = 0.0, lo_bad = -1.0;
  while (admissible(lo_bad)) {
    lo_ok = lo_bad;
    lo_bad *= 2.0;
    if (lo_bad < -1e9) break;
  }
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo_ok + lo_bad);
    (admissible(mid) ? lo_ok : lo_bad) = mid;
  }
  return {lo_ok, hi_ok};
}

}  // namespace actnoise
