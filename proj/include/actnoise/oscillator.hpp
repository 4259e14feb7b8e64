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
#include <vector>

#include "actnoise/ode.hpp"
#include "actnoise/types.hpp"

namespace actnoise {

// ---------------------------------------------------------------------------
// Harmonic oscillator under action noise (mass m = 1, hbar = 1)
//
//   H(t) = p^2/2 + omega^2(t) q^2/2.
//
// The dephasing dissipator -gamma [H,[H,rho]] closes on the first and second
// moments, so Gaussian states stay Gaussian and the dynamics reduces to five
// coupled ODEs for (q, p, <q^2>, <p^2>, <{q,p}>):
//
//   d<q>     = <p> - g w2 <q>
//   d<p>     = -w2 <q> - g w2 <p>
//   d<q^2>   = <{q,p}> + 2 g (<p^2> - w2 <q^2>)
//   d<p^2>   = -w2 <{q,p}> + 2 g w2 (w2 <q^2> - <p^2>)
//   d<{q,p}> = 2 <p^2> - 2 w2 <q^2> - 4 g w2 <{q,p}>
//
// with w2 = omega^2(t), g = gamma.  Raw second moments are integrated (the
// system above is closed and linear); central moments are converted at the
// boundaries of the propagation.
// ---------------------------------------------------------------------------

class GaussianState {
 public:
  GaussianState(double mean_q, double mean_p, const Eigen::Matrix2d& cov)
      : q_(mean_q), p_(mean_p), cov_(cov) {
    if (!std::isfinite(q_) || !std::isfinite(p_) || !cov_.allFinite())
      throw StructuralError("GaussianState: non-finite moment");
    if (std::abs(cov_(0, 1) - cov_(1, 0)) > 1e-12 * std::max(1.0, cov_.cwiseAbs().maxCoeff()))
      throw StructuralError("GaussianState: covariance must be symmetric");
    if (!(cov_(0, 0) > 0.0) || !(cov_(1, 1) > 0.0))
      throw StructuralError("GaussianState: covariance diagonal must be positive");
    if (cov_.determinant() < 0.25 - 1e-9)
      throw StructuralError("GaussianState: det(cov) = " +
                            format_double(cov_.determinant()) +
                            " violates the uncertainty bound 1/4");
  }

  /// Ground state of frequency omega: cov = diag(1/(2 omega), omega/2).
  static GaussianState ground(double omega) { return displaced_ground(omega, 0.0, 0.0); }

  static GaussianState displaced_ground(double omega, double mean_q, double mean_p) {
    if (!(omega > 0.0)) throw StructuralError("GaussianState: omega must be > 0");
    Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
    cov(0, 0) = 0.5 / omega;
    cov(1, 1) = 0.5 * omega;
    return GaussianState(mean_q, mean_p, cov);
  }

  /// Squeezed vacuum of frequency omega: q variance scaled by exp(-2r).
  static GaussianState squeezed_vacuum(double omega, double r) {
    if (!(omega > 0.0)) throw StructuralError("GaussianState: omega must be > 0");
    Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
    cov(0, 0) = 0.5 * std::exp(-2.0 * r) / omega;
    cov(1, 1) = 0.5 * std::exp(2.0 * r) * omega;
    return GaussianState(0.0, 0.0, cov);
  }

  double mean_q() const { return q_; }
  double mean_p() const { return p_; }
  const Eigen::Matrix2d& cov() const { return cov_; }
  double det_cov() const { return cov_.determinant(); }

  /// <H> for a frequency-omega oscillator.
  double energy(double omega) const {
    return 0.5 * (cov_(1, 1) + p_ * p_) + 0.5 * omega * omega * (cov_(0, 0) + q_ * q_);
  }

 private:
  double q_, p_;
  Eigen::Matrix2d cov_;
};

enum class HoKind { ConstantMu, ErmakovSp };

inline const char* to_string(HoKind k) {
  return k == HoKind::ConstantMu ? "ConstantMu" : "ErmakovSP";
}

class FrequencyProtocol {
 public:
  HoKind kind() const { return kind_; }
  double omega0() const { return omega0_; }
  double omega_f() const { return omega_f_; }
  double t_f() const { return t_f_; }

  double omega_sq(double t) const { return w2_(t); }
  double domega_sq(double t) const { return dw2_(t); }

  /// True when omega^2(t) dips below zero somewhere (transiently inverted
  /// potential; possible for aggressive Ermakov shortcuts).
  bool has_inverted_span() const { return inverted_; }

  /// Adiabaticity parameter |d(omega^2)/dt| / (2 omega^3); requires a real
  /// positive frequency at t.
  double mu(double t) const {
    const double w2 = w2_(t);
    if (!(w2 > 0.0))
      throw DomainError("FrequencyProtocol::mu: omega^2 <= 0 at t=" + format_double(t));
    return std::abs(dw2_(t)) / (2.0 * w2 * std::sqrt(w2));
  }

  /// Max of mu over a uniform sample; NaN when the protocol has an inverted
  /// span (mu is undefined there), so sweeps can record rather than abort.
  double mu_max(int samples = 2001) const {
    if (samples < 2) throw StructuralError("FrequencyProtocol::mu_max: samples must be >= 2");
    if (inverted_) return std::numeric_limits<double>::quiet_NaN();
    double m = 0.0;
    for (int i = 0; i < samples; ++i)
      m = std::max(m, mu(t_f_ * static_cast<double>(i) / (samples - 1)));
    return m;
  }

  /// Tabulated text form: '#'-prefixed header, rows (t, omega_sq).
  void write_table(std::ostream& os, int rows = 501) const {
    if (rows < 2) throw StructuralError("FrequencyProtocol::write_table: rows must be >= 2");
    os << "# frequency-protocol v1\n";
    os << "# kind=" << to_string(kind_) << " omega0=" << format_double(omega0_)
       << " omega_f=" << format_double(omega_f_) << " t_f=" << format_double(t_f_) << "\n";
    os << "# columns: t omega_sq\n";
    for (int i = 0; i < rows; ++i) {
      const double t = t_f_ * static_cast<double>(i) / (rows - 1);
      os << format_double(t) << ' ' << format_double(omega_sq(t)) << '\n';
    }
  }

 private:
  friend FrequencyProtocol constant_mu_ramp(double, double, double);
  friend FrequencyProtocol ermakov_sp(double, double, double);

  using Fn = std::function<double(double)>;
  FrequencyProtocol(HoKind kind, double w0, double wf, double t_f, Fn w2, Fn dw2,
                    bool inverted)
      : kind_(kind),
        omega0_(w0),
        omega_f_(wf),
        t_f_(t_f),
        w2_(std::move(w2)),
        dw2_(std::move(dw2)),
        inverted_(inverted) {}

  HoKind kind_;
  double omega0_, omega_f_, t_f_;
  Fn w2_, dw2_;
  bool inverted_;
};

namespace detail {

inline void check_ho_args(double w0, double wf, double t_f) {
  if (!(w0 > 0.0) || !(wf > 0.0) || !std::isfinite(w0) || !std::isfinite(wf))
    throw StructuralError("frequency protocol: omega0, omega_f must be finite and > 0");
  if (!(t_f > 0.0) || !std::isfinite(t_f))
    throw StructuralError("frequency protocol: t_f must be finite and > 0");
}

}  // namespace detail

/// Frequency ramp with constant adiabaticity parameter
/// mu = |omega_f - omega0| / (omega0 omega_f t_f):
/// omega(t) = omega0 omega_f t_f / (omega_f t_f - (omega_f - omega0) t).
inline FrequencyProtocol constant_mu_ramp(double omega0, double omega_f, double t_f) {
  detail::check_ho_args(omega0, omega_f, t_f);
  const double a = omega0 * omega_f * t_f;  // numerator
  const double b = omega_f * t_f;           // denominator at t=0
  const double c = omega_f - omega0;        // denominator slope
  auto w2 = [a, b, c](double t) {
    const double d = b - c * t;
    return a * a / (d * d);
  };
  auto dw2 = [a, b, c](double t) {
    const double d = b - c * t;
    return 2.0 * a * a * c / (d * d * d);
  };
  return FrequencyProtocol(HoKind::ConstantMu, omega0, omega_f, t_f, w2, dw2, false);
}

/// Ermakov-invariant shortcut: the scaling function
/// b(s) = 1 + (sqrt(omega0/omega_f) - 1) * smooth01(s), s = t/t_f, satisfies
/// b(0)=1, b(t_f)=sqrt(omega0/omega_f) with vanishing first and second
/// derivatives at both ends, and
///   omega^2(t) = omega0^2 / b^4 - (d2b/dt2) / b
/// solves the Ermakov equation identically, mapping the omega0 ground state
/// exactly onto the omega_f ground state at t_f in the noise-free limit.
/// omega^2 may dip negative for fast ramps; the protocol is constructed
/// anyway and flagged via has_inverted_span().
inline FrequencyProtocol ermakov_sp(double omega0, double omega_f, double t_f) {
  detail::check_ho_args(omega0, omega_f, t_f);
  const double bf = std::sqrt(omega0 / omega_f);
  const double db = bf - 1.0;
  const double w02 = omega0 * omega0;
  // smooth01 and derivatives in s (see tls.hpp for the quintic smoothstep).
  auto b_of = [db](double s) { return 1.0 + db * s * s * s * (10.0 + s * (-15.0 + 6.0 * s)); };
  auto b1_of = [db](double s) {
    const double u = 1.0 - s;
    return db * 30.0 * s * s * u * u;
  };
  auto b2_of = [db](double s) { return db * 60.0 * s * (1.0 - s) * (1.0 - 2.0 * s); };
  auto b3_of = [db](double s) { return db * (60.0 - 360.0 * s + 360.0 * s * s); };

  auto w2 = [=](double t) {
    const double s = t / t_f;
    const double b = b_of(s);
    const double b4 = b * b * b * b;
    return w02 / b4 - b2_of(s) / (t_f * t_f) / b;
  };
  auto dw2 = [=](double t) {
    const double s = t / t_f;
    const double b = b_of(s);
    const double bd1 = b1_of(s) / t_f;
    const double bd2 = b2_of(s) / (t_f * t_f);
    const double bd3 = b3_of(s) / (t_f * t_f * t_f);
    const double b5 = b * b * b * b * b;
    return -4.0 * w02 * bd1 / b5 - (bd3 * b - bd2 * bd1) / (b * b);
  };

  bool inverted = false;
  for (int i = 0; i <= 4000; ++i)
    if (w2(t_f * static_cast<double>(i) / 4000) <= 0.0) {
      inverted = true;
      break;
    }
  return FrequencyProtocol(HoKind::ErmakovSp, omega0, omega_f, t_f, w2, dw2, inverted);
}

namespace detail {

using MomentVector = Eigen::Matrix<double, 5, 1>;  // q, p, <q^2>, <p^2>, <{q,p}>

struct MomentSystem {
  const FrequencyProtocol* proto;
  double gamma;

  void rhs(double t, const MomentVector& y, MomentVector& dy) const {
    const double w2 = proto->omega_sq(t);
    const double g = gamma;
    dy(0) = y(1) - g * w2 * y(0);
    dy(1) = -w2 * y(0) - g * w2 * y(1);
    dy(2) = y(4) + 2.0 * g * (y(3) - w2 * y(2));
    dy(3) = -w2 * y(4) + 2.0 * g * w2 * (w2 * y(2) - y(3));
    dy(4) = 2.0 * y(3) - 2.0 * w2 * y(2) - 4.0 * g * w2 * y(4);
  }
  void postprocess(MomentVector&) const {}
};

inline MomentVector raw_moments(const GaussianState& s) {
  MomentVector y;
  y(0) = s.mean_q();
  y(1) = s.mean_p();
  y(2) = s.cov()(0, 0) + s.mean_q() * s.mean_q();
  y(3) = s.cov()(1, 1) + s.mean_p() * s.mean_p();
  y(4) = 2.0 * s.cov()(0, 1) + 2.0 * s.mean_q() * s.mean_p();
  return y;
}

inline GaussianState state_from_raw(const MomentVector& y) {
  Eigen::Matrix2d cov;
  cov(0, 0) = y(2) - y(0) * y(0);
  cov(1, 1) = y(3) - y(1) * y(1);
  cov(0, 1) = cov(1, 0) = 0.5 * y(4) - y(0) * y(1);
  return GaussianState(y(0), y(1), cov);
}

}  // namespace detail

/// Default tolerances for the moment system: tighter than the generic
/// density-matrix defaults because the system is only 5-dimensional and the
/// uncertainty audit det(cov) >= 1/4 - 1e-9 needs headroom.
inline IntegratorOptions moment_integrator_defaults() {
  IntegratorOptions opts;
  opts.rtol = 1e-10;
  opts.atol = 1e-13;
  return opts;
}

/// Propagates a Gaussian state through the moment equations, returning the
/// state at every grid time (index 0 is the initial state).  The uncertainty
/// bound det(cov) >= 1/4 is re-audited at every grid time by the
/// GaussianState constructor.
inline std::vector<GaussianState> propagate_moments(const FrequencyProtocol& proto,
                                                    const GaussianState& s0,
                                                    const NoiseConfig& noise,
                                                    const TimeGrid& grid,
                                                    const IntegratorOptions& opts =
                                                        moment_integrator_defaults()) {
  if (grid.t_f() > proto.t_f() * (1.0 + 1e-12))
    throw StructuralError("propagate_moments: grid extends past the protocol horizon");
  const detail::MomentSystem sys{&proto, noise.gamma};
  detail::MomentVector y = detail::raw_moments(s0);
  std::vector<GaussianState> out;
  out.reserve(grid.size());
  integrate_over_grid(sys, y, grid, opts, [&](std::size_t, const detail::MomentVector& v) {
    out.push_back(detail::state_from_raw(v));
  });
  return out;
}

/// Uhlmann fidelity between two single-mode Gaussian states,
///   F = exp(-delta^T (S1+S2)^{-1} delta / 4)
///       / sqrt( sqrt(det(S1+S2) + L) - sqrt(L) ),
/// with L = (4 det S1 - 1)(4 det S2 - 1) / 4.  For two pure ground states of
/// frequencies w1, w2 this reduces to sqrt(2 sqrt(w1 w2) / (w1 + w2)).
inline double gaussian_fidelity(const GaussianState& s1, const GaussianState& s2) {
  const Eigen::Matrix2d sum = s1.cov() + s2.cov();
  Eigen::Vector2d delta(s2.mean_q() - s1.mean_q(), s2.mean_p() - s1.mean_p());
  const double dsum = sum.determinant();
  if (!(dsum > 0.0)) throw DomainError("gaussian_fidelity: singular covariance sum");
  const double lambda =
      std::max(0.0, (4.0 * s1.det_cov() - 1.0) * (4.0 * s2.det_cov() - 1.0) / 4.0);
  const double denom_sq = std::sqrt(dsum + lambda) - std::sqrt(lambda);
  if (!(denom_sq > 0.0)) throw DomainError("gaussian_fidelity: degenerate denominator");
  const double quad = delta.dot(sum.inverse() * delta);
  const double f = std::exp(-0.25 * quad) / std::sqrt(denom_sq);
  return std::min(1.0, f);
}

/// CSV writer for a propagated moment series: columns
/// t,q,p,qq,pp,qp_sym where qq/pp/qp_sym are the central covariance entries.
inline void write_moments_csv(std::ostream& os, const TimeGrid& grid,
                              const std::vector<GaussianState>& states) {
  if (grid.size() != states.size())
    throw StructuralError("write_moments_csv: grid/states length mismatch");
  os << "t,q,p,qq,pp,qp_sym\n";
  for (std::size_t i = 0; i < states.size(); ++i) {
    const GaussianState& s = states[i];
    os << format_double(grid[i]) << ',' << format_double(s.mean_q()) << ','
       << format_double(s.mean_p()) << ',' << format_double(s.cov()(0, 0)) << ','
       << format_double(s.cov()(1, 1)) << ',' << format_double(s.cov()(0, 1)) << '\n';
  }
}

}  // namespace actnoise
