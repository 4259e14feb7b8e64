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
#include <cmath>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "actnoise/metrics.hpp"
#include "actnoise/propagator.hpp"
#include "actnoise/tls.hpp"

namespace actnoise {

// ---------------------------------------------------------------------------
// Scan of the SP family over its shape knob.
//
// The knob deforms the control tilt away from the flat profile, trading the
// time-averaged squared gap M against the adiabaticity measure mu.  Over the
// admissible knob interval, M(knob) is U-shaped with a single interior
// minimum while mu_max(knob) decreases essentially monotonically, so the
// family splits into two sub-ranges that realize the two fidelity-vs-M
// branches: left of the M minimum, mu grows together with M (the
// higher-mu branch); right of it, mu keeps falling while M grows (the
// lower-mu branch).  Because mu decreases with the knob on *both* sides,
// the sign of d(mu)/d(knob) alone cannot separate the branches; points are
// classified by the sign of d(mu)/dM over the local knob window instead,
// which is the property the branch names actually refer to.
// ---------------------------------------------------------------------------

enum class Branch { LowerMu, HigherMu };

inline const char* to_string(Branch b) { return b == Branch::LowerMu ? "LowerMu" : "HigherMu"; }

/// One scanned SP protocol.  When construction or propagation fails, `ok` is
/// false, `error` carries the reason and the numeric fields are NaN.
struct ScanResult {
  double knob = 0.0;
  double m_param = std::numeric_limits<double>::quiet_NaN();   // rad^2/s^2
  double mu_max = std::numeric_limits<double>::quiet_NaN();
  double fidelity = std::numeric_limits<double>::quiet_NaN();  // noisy terminal fidelity
  Branch branch = Branch::LowerMu;
  bool ok = true;
  std::string error;
};

struct ScanOptions {
  int grid_points = 1200;       // propagation/metric grid resolution
  IntegratorOptions integrator;
  int mu_samples = 2001;        // sampling for mu_max
  unsigned threads = 0;         // 0: all available cores
};

/// Time-averaged squared-gap measure of a TLS protocol,
///   M = (1/t_f) int sum_{k != l} (E_k - E_l)^2 dt = (2/t_f) int gap^2 dt,
/// evaluated from the analytic gap by the trapezoidal rule.  Agrees with
/// m_parameter() on the Hamiltonian trajectory to quadrature accuracy.
inline double tls_m_parameter(const TlsProtocol& proto, int samples = 4001) {
  if (samples < 2) throw StructuralError("tls_m_parameter: need at least 2 samples");
  const double t_f = proto.t_f();
  const double dt = t_f / (samples - 1);
  double sum = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double g = proto.gap(i * dt);
    const double w = (i == 0 || i == samples - 1) ? 0.5 : 1.0;
    sum += w * 2.0 * g * g;
  }
  return sum * dt / t_f;
}

namespace detail {

// M(knob) for the SP family at fixed (delta0, t_f); used by the searches
// below.  Construction includes the family's validity self-test, so every
// probed knob is a genuinely admissible protocol.
inline double sp_m_at(double delta0, double t_f, double knob) {
  return tls_m_parameter(sp_protocol(delta0, t_f, knob));
}

}  // namespace detail

/// Knob sub-interval [argmin M, upper admissible bound] on which M(knob) is
/// increasing, i.e. the lower-mu branch.  The interior minimum is located by
/// golden-section search over the admissible interval.
inline std::pair<double, double> sp_monotone_knob_range(double delta0, double t_f) {
  const auto [lo, hi] = sp_knob_range(delta0, t_f);
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = detail::sp_m_at(delta0, t_f, c);
  double fd = detail::sp_m_at(delta0, t_f, d);
  // Stop once the bracket is narrow relative to the interval; the branch
  // boundary does not need to be sharper than the scan grids that use it.
  const double tol = 1e-6 * (hi - lo);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = detail::sp_m_at(delta0, t_f, c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = detail::sp_m_at(delta0, t_f, d);
    }
  }
  const double argmin = 0.5 * (a + b);
  // Guard against a boundary minimum (no U shape): then the whole interval
  // is already monotone.
  if (argmin >= hi) return {lo, hi};
  return {argmin, hi};
}

/// Evaluate the SP family on a knob grid: for each knob, construct the
/// protocol, propagate the noisy master equation, and record terminal
/// fidelity, mu_max and M.  Construction failures are captured per point
/// (ok = false) instead of aborting the scan.  Points are evaluated in
/// parallel; the returned rows are sorted by M (failed rows last, by knob),
/// and branches are classified on the knob-ordered sequence as described in
/// the header comment.
inline std::vector<ScanResult> scan_sp_family(double delta0, double t_f,
                                              const NoiseConfig& noise,
                                              std::vector<double> knob_grid,
                                              const ScanOptions& opts = {}) {
  if (knob_grid.empty()) throw StructuralError("scan_sp_family: empty knob grid");
  if (opts.grid_points < 2) throw StructuralError("scan_sp_family: grid_points must be >= 2");
  std::sort(knob_grid.begin(), knob_grid.end());

  std::vector<ScanResult> rows(knob_grid.size());
  parallel_for(knob_grid.size(), opts.threads, [&](std::size_t i) {
    ScanResult& r = rows[i];
    r.knob = knob_grid[i];
    try {
      const TlsProtocol proto = sp_protocol(delta0, t_f, r.knob);
      const TimeGrid grid = TimeGrid::uniform(t_f, opts.grid_points);
      const auto states = propagate(proto.hamiltonian_trajectory(), TlsProtocol::initial_state(),
                                    noise, grid, opts.integrator);
      r.fidelity = uhlmann_fidelity(states.back(), TlsProtocol::target_state());
      r.mu_max = proto.mu_max(opts.mu_samples);
      r.m_param = tls_m_parameter(proto);
    } catch (const std::exception& e) {
      r.ok = false;
      r.error = e.what();
    }
  });

  // Branch classification on the knob-ordered subsequence of valid points.
  std::vector<std::size_t> valid;
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (rows[i].ok) valid.push_back(i);
  if (valid.size() >= 2) {
    // Segment label between consecutive valid points: higher-mu iff mu and M
    // move together there.
    std::vector<Branch> seg(valid.size() - 1);
    for (std::size_t s = 0; s + 1 < valid.size(); ++s) {
      const ScanResult& p = rows[valid[s]];
      const ScanResult& q = rows[valid[s + 1]];
      const double dmu_dm = (q.mu_max - p.mu_max) * (q.m_param - p.m_param);
      seg[s] = dmu_dm > 0.0 ? Branch::HigherMu : Branch::LowerMu;
    }
    // Point label: its adjacent segments where they agree; on disagreement
    // keep the left segment so a branch extends up to and including the
    // turning point.
    for (std::size_t v = 0; v < valid.size(); ++v) {
      Branch label;
      if (v == 0)
        label = seg.front();
      else if (v == valid.size() - 1)
        label = seg.back();
      else
        label = seg[v - 1];  // agreement or left-continuation tie-break
      rows[valid[v]].branch = label;
    }
  }

  std::stable_sort(rows.begin(), rows.end(), [](const ScanResult& a, const ScanResult& b) {
    if (a.ok != b.ok) return a.ok;  // failed rows last
    if (a.ok) return a.m_param < b.m_param;
    return a.knob < b.knob;
  });
  return rows;
}

/// Invert the monotone knob -> M map on the lower-mu branch by bisection.
/// Returns an SP protocol whose M is within `tolerance` of `m_target`.
/// Targets outside the achievable range raise DomainError naming the range.
inline TlsProtocol find_protocol_for_m(double delta0, double t_f, double m_target,
                                       double tolerance) {
  if (!(tolerance > 0.0) || !std::isfinite(tolerance))
    throw StructuralError("find_protocol_for_m: tolerance must be positive and finite");
  if (!std::isfinite(m_target))
    throw StructuralError("find_protocol_for_m: m_target must be finite");

  auto [lo, hi] = sp_monotone_knob_range(delta0, t_f);
  double m_lo = detail::sp_m_at(delta0, t_f, lo);
  double m_hi = detail::sp_m_at(delta0, t_f, hi);
  if (m_target < m_lo || m_target > m_hi)
    throw DomainError("find_protocol_for_m: target M = " + format_double(m_target) +
                      " outside the achievable range [" + format_double(m_lo) + ", " +
                      format_double(m_hi) + "]");

  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double m_mid = detail::sp_m_at(delta0, t_f, mid);
    if (std::abs(m_mid - m_target) <= tolerance) return sp_protocol(delta0, t_f, mid);
    if (m_mid < m_target)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= 0.0 || 0.5 * (lo + hi) == lo || 0.5 * (lo + hi) == hi) break;
  }
  throw DomainError("find_protocol_for_m: bisection exhausted machine precision before "
                    "meeting tolerance " +
                    format_double(tolerance));
}

/// CSV table of a scan: header comment plus one row per valid point in the
/// order produced by scan_sp_family (sorted by M).  Failed points are not
/// written; callers report them separately.
inline void write_scan_csv(std::ostream& os, const std::vector<ScanResult>& rows) {
  os << "knob,m_param,mu_max,fidelity,branch\n";
  for (const ScanResult& r : rows) {
    if (!r.ok) continue;
    os << format_double(r.knob) << ',' << format_double(r.m_param) << ','
       << format_double(r.mu_max) << ',' << format_double(r.fidelity) << ','
       << to_string(r.branch) << '\n';
  }
}

}  // namespace actnoise
