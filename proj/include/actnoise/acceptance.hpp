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

#include <chrono>
#include <cmath>
#include <functional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "actnoise/diagnostics.hpp"
#include "actnoise/fock_reference.hpp"
#include "actnoise/optimizer.hpp"
#include "actnoise/version.hpp"

namespace actnoise {

// ---------------------------------------------------------------------------
// Release acceptance suite.
//
// Each check is an independent, deterministic experiment with an explicit
// tolerance; together they pin the analytically known behaviors (static
// dephasing, stationarity, anchor formulas, oracle equivalences) and the
// qualitative curve properties (orderings, monotonicity, branch and
// transition structure) that define this library's contract.  The quick
// level runs everything except the two expensive equivalence checks
// (Monte-Carlo unraveling, Fock-basis oracle); the full level runs all.
// ---------------------------------------------------------------------------

struct CriterionResult {
  int index = 0;
  std::string name;
  bool pass = false;
  std::string detail;  // worst observed value vs tolerance, or failure reason
  bool skipped = false;
  double seconds = 0.0;
};

namespace acceptance {

constexpr double kDelta0 = 150.0;
constexpr double kGammaRef = 0.01;
// First noise-free ARP fidelity peak: delta0 * t_f = sqrt(3) * pi, quoted to
// four digits (3.464) everywhere this time shows up.
constexpr double kTfPeak = 3.464 * 3.141592653589793 / (2.0 * kDelta0);

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// -- 1. static dephasing ----------------------------------------------------
// Constant H with gap delta0; equal superposition of the eigenstates.  The
// off-diagonal magnitude must follow (1/2) exp(-gamma delta0^2 t) exactly.
inline CriterionResult check_static_dephasing() {
  CriterionResult r{1, "static-dephasing", false, "", false, 0.0};
  const Matrix h = 0.5 * kDelta0 * sigma_z();
  const HamiltonianTrajectory traj(2, 0.1, [h](double) { return h; },
                                   [](double) { return Matrix::Zero(2, 2); });
  Eigen::VectorXcd plus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  const TimeGrid grid = TimeGrid::uniform(0.1, 100);
  IntegratorOptions io;
  io.rtol = 1e-10;
  io.atol = 0.0;  // pure relative control: the coherence decays through 10 decades
  const auto states = propagate(traj, DensityOperator::pure(plus), NoiseConfig(kGammaRef),
                                grid, io);
  double worst = 0.0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    const double t = grid.times()[i];
    const double expected = 0.5 * std::exp(-kGammaRef * kDelta0 * kDelta0 * t);
    const double got = std::abs(states[i].matrix()(0, 1));
    worst = std::max(worst, std::abs(got - expected) / expected);
  }
  r.pass = worst <= 1e-6;
  r.detail = "worst |rho01| relative error " + fmt(worst) + " (tol 1e-6) over t in [0, 0.1]";
  return r;
}

// -- 2. diagonal stationarity ----------------------------------------------
// A state diagonal in the basis of a constant H is a fixed point for every
// noise strength.
inline CriterionResult check_diagonal_stationarity() {
  CriterionResult r{2, "diagonal-stationarity", false, "", false, 0.0};
  const Matrix h = 0.5 * 100.0 * sigma_z() + 0.5 * 73.0 * sigma_x();
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  Matrix rho0 = 0.7 * es.eigenvectors().col(0) * es.eigenvectors().col(0).adjoint() +
                0.3 * es.eigenvectors().col(1) * es.eigenvectors().col(1).adjoint();
  const HamiltonianTrajectory traj(2, 0.1, [h](double) { return h; },
                                   [](double) { return Matrix::Zero(2, 2); });
  const TimeGrid grid = TimeGrid::uniform(0.1, 50);
  double worst = 0.0;
  for (double gamma : {0.0, 0.01, 10.0}) {
    const auto states = propagate(traj, DensityOperator(rho0), NoiseConfig(gamma), grid);
    for (const DensityOperator& s : states)
      worst = std::max(worst, (s.matrix() - rho0).cwiseAbs().maxCoeff());
  }
  r.pass = worst <= 1e-9;
  r.detail = "max deviation " + fmt(worst) + " (tol 1e-9) for gamma in {0, 0.01, 10}";
  return r;
}

namespace detail {

inline double noise_free_tls_fidelity(const TlsProtocol& proto) {
  const TimeGrid grid = TimeGrid::uniform(proto.t_f(), 64);
  IntegratorOptions io;
  io.rtol = 1e-10;
  io.atol = 1e-12;
  const auto states =
      propagate(proto.hamiltonian_trajectory(), TlsProtocol::initial_state(), NoiseConfig(0.0),
                grid, io);
  return uhlmann_fidelity(states.back(), TlsProtocol::target_state());
}

}  // namespace detail

// -- 3. ARP first peak -------------------------------------------------------
inline CriterionResult check_arp_first_peak() {
  CriterionResult r{3, "arp-first-peak", false, "", false, 0.0};
  const double f_peak = detail::noise_free_tls_fidelity(arp_protocol(kDelta0, kTfPeak));
  bool neighbors_lower = true;
  double worst_gap = 1.0;
  for (double factor : {0.90, 0.95, 1.05, 1.10}) {
    const double f = detail::noise_free_tls_fidelity(arp_protocol(kDelta0, factor * kTfPeak));
    neighbors_lower = neighbors_lower && f < f_peak;
    worst_gap = std::min(worst_gap, f_peak - f);
  }
  r.pass = f_peak >= 0.9999 && neighbors_lower;
  r.detail = "F(t_f = 3.464 pi / (2 delta0)) = " + fmt(f_peak) +
             " (>= 0.9999); +-10% neighborhood lower by >= " + fmt(worst_gap);
  return r;
}

// -- 4. adiabaticity anchors -------------------------------------------------
inline CriterionResult check_mu_anchors() {
  CriterionResult r{4, "mu-anchors", false, "", false, 0.0};
  const double t_f = 0.05;
  const TlsProtocol arp = arp_protocol(kDelta0, t_f);
  const double expected = 3.141592653589793 / (2.0 * kDelta0 * t_f);
  double worst_arp = 0.0;
  for (int i = 1; i < 10; ++i)
    worst_arp = std::max(worst_arp,
                         std::abs(arp.mu(i * t_f / 10.0) - expected) / expected);

  const FrequencyProtocol ramp = constant_mu_ramp(2.5e6, 2.5e3, 1e-3);
  const double mu0 = ramp.mu(0.0);
  double worst_ho = 0.0;
  for (int i = 1; i <= 10; ++i)
    worst_ho = std::max(worst_ho, std::abs(ramp.mu(i * 1e-4) - mu0) / mu0);

  r.pass = worst_arp <= 1e-10 && worst_ho <= 1e-10;
  r.detail = "ARP mu vs pi/(2 delta0 t_f) rel " + fmt(worst_arp) +
             "; constant-mu ramp flatness rel " + fmt(worst_ho) + " (tol 1e-10)";
  return r;
}

// -- 5. unraveling equivalence (full level) ----------------------------------
inline CriterionResult check_unraveling_equivalence() {
  CriterionResult r{5, "unraveling-equivalence", false, "", false, 0.0};
  const TlsProtocol arp = arp_protocol(kDelta0, kTfPeak);
  const HamiltonianTrajectory traj = arp.hamiltonian_trajectory();
  const DensityOperator rho0 = TlsProtocol::initial_state();
  const NoiseConfig noise(kGammaRef);

  const TimeGrid master_grid = TimeGrid::uniform(kTfPeak, 256);
  const DensityOperator master = propagate(traj, rho0, noise, master_grid).back();

  const TimeGrid mc_grid = TimeGrid::uniform(kTfPeak, 4096);
  const DensityOperator mean =
      stochastic_ensemble_mean(traj, rho0, noise, mc_grid, 20260814u, 10000);

  const double dist = trace_distance(mean, master);
  r.pass = dist <= 0.05;
  r.detail = "trace distance " + fmt(dist) + " (tol 0.05), 10^4 trajectories, 4096 steps";
  return r;
}

// -- 6. Fock-oracle equivalence (full level) ----------------------------------
inline CriterionResult check_fock_oracle() {
  CriterionResult r{6, "fock-oracle", false, "", false, 0.0};
  const double w0 = 1.0, wf = 0.25, t_f = 3.0, gamma = 0.1;
  const double q0 = 0.6, p0 = -0.3;
  const FrequencyProtocol proto = constant_mu_ramp(w0, wf, t_f);
  const TimeGrid grid = TimeGrid::from_times({0.0, 0.75, 1.5, 2.25, 3.0});

  const auto gauss =
      propagate_moments(proto, GaussianState::displaced_ground(w0, q0, p0), NoiseConfig(gamma),
                        grid);
  FockReferenceOptions fo;
  fo.levels = 60;
  fo.tail_tolerance = 2e-8;  // tighter than the comparison below
  const auto fock = propagate_fock_reference(proto, q0, p0, NoiseConfig(gamma), grid, fo);

  double worst = 0.0;
  bool pass = true;
  for (std::size_t i = 0; i < fock.size(); ++i) {
    const GaussianState& g = gauss[i];
    const FockMoments& f = fock[i];
    const double pairs[5][2] = {{g.mean_q(), f.q},
                                {g.mean_p(), f.p},
                                {g.cov()(0, 0), f.cov_qq},
                                {g.cov()(1, 1), f.cov_pp},
                                {g.cov()(0, 1), f.cov_qp}};
    for (const auto& ab : pairs) {
      const double scale = std::max(std::abs(ab[0]), std::abs(ab[1]));
      const double err = std::abs(ab[0] - ab[1]);
      pass = pass && err <= std::max(1e-6 * scale, 1e-9);
      if (scale > 1e-6) worst = std::max(worst, err / scale);
    }
  }
  r.pass = pass;
  r.detail = "worst moment disagreement rel " + fmt(worst) +
             " (tol 1e-6) at 60 levels, omega ratio 4, gamma omega0^2 t_f = 0.3";
  return r;
}

// -- 7. oscillator curve ordering ---------------------------------------------
inline CriterionResult check_ho_curve_shape() {
  CriterionResult r{7, "ho-curve-shape", false, "", false, 0.0};
  const double w0 = 2.5e6, wf = 2.5e3, gamma = 0.8e-3;
  PointOptions po;
  po.grid_points = 300;
  bool free_exact = true, ordered = true, monotone = true;
  double prev_noisy = -1.0, last_noisy = 0.0, worst_infidelity = 0.0;
  for (int i = 0; i <= 8; ++i) {
    const double t_f = 1e-3 * std::pow(10.0, i / 8.0);
    const FrequencyProtocol sp = ermakov_sp(w0, wf, t_f);
    const FrequencyProtocol cm = constant_mu_ramp(w0, wf, t_f);
    const double sp_free = run_ho_point(sp, 0.0, po).fidelity;
    const double sp_noisy = run_ho_point(sp, gamma, po).fidelity;
    const double cm_free = run_ho_point(cm, 0.0, po).fidelity;
    const double cm_noisy = run_ho_point(cm, gamma, po).fidelity;
    worst_infidelity = std::max(worst_infidelity, 1.0 - sp_free);
    free_exact = free_exact && sp_free >= 1.0 - 1e-6;
    ordered = ordered && sp_noisy <= sp_free && cm_noisy <= cm_free;
    monotone = monotone && sp_noisy >= prev_noisy;
    prev_noisy = sp_noisy;
    last_noisy = sp_noisy;
  }
  r.pass = free_exact && ordered && monotone && last_noisy >= 0.99;
  r.detail = "noise-free SP infidelity <= " + fmt(worst_infidelity) +
             "; noisy SP monotone " + (monotone ? "yes" : "NO") + ", final " + fmt(last_noisy) +
             " (>= 0.99); noisy <= noise-free " + (ordered ? "yes" : "NO");
  return r;
}

// -- 8. generator-distance anchors ---------------------------------------------
// The SP claim concerns the nonadiabatic regime, so its sweep stops at
// t_f = 0.06 (mu_max >= 0.31 throughout); toward the adiabatic end the
// shipped ansatz's G_D turns back up, which is outside the claim.
inline CriterionResult check_generator_distance() {
  CriterionResult r{8, "generator-distance", false, "", false, 0.0};
  const NoiseConfig noise(kGammaRef);
  double arp_min = 1e300, arp_max = -1e300;
  std::vector<double> sp_vals;
  for (int i = 0; i < 14; ++i) {
    const double t_arp = 0.012 * std::pow(10.0, i / 13.0);
    const double g_arp = generator_distance(arp_protocol(kDelta0, t_arp).hamiltonian_trajectory(),
                                            noise, TimeGrid::uniform(t_arp, 1200));
    arp_min = std::min(arp_min, g_arp);
    arp_max = std::max(arp_max, g_arp);
    const double t_sp = 0.012 * std::pow(5.0, i / 13.0);
    sp_vals.push_back(generator_distance(sp_protocol(kDelta0, t_sp, 0.0).hamiltonian_trajectory(),
                                         noise, TimeGrid::uniform(t_sp, 1200)));
  }
  const double spread = (arp_max - arp_min) / (0.5 * (arp_max + arp_min));
  const double anchor = std::sqrt(kDelta0 * kDelta0 +
                                  kGammaRef * kGammaRef * std::pow(kDelta0, 4)) -
                        kDelta0;
  const double anchor_err = std::abs(arp_max - anchor) / anchor;
  bool sp_decreasing = true;
  for (std::size_t i = 1; i < sp_vals.size(); ++i)
    sp_decreasing = sp_decreasing && sp_vals[i] < sp_vals[i - 1];
  r.pass = spread <= 1e-6 && sp_decreasing && anchor_err <= 1e-6;
  r.detail = "ARP spread " + fmt(spread) + " (tol 1e-6), closed-form anchor rel " +
             fmt(anchor_err) + "; SP strictly decreasing " + (sp_decreasing ? "yes" : "NO");
  return r;
}

// -- 9. noise-transition structure ----------------------------------------------
inline CriterionResult check_noise_transition() {
  CriterionResult r{9, "noise-transition", false, "", false, 0.0};
  const TlsProtocol sp = sp_protocol(kDelta0, kTfPeak, 0.0);
  std::vector<double> gammas = {0.0};
  for (int i = 0; i < 14; ++i) gammas.push_back(1e-4 * std::pow(3.0 / 1e-4, i / 13.0));

  std::vector<double> fid, cr;
  PointOptions po;
  for (double g : gammas) {
    const DiagnosticsReport rep = run_tls_point(sp, g, po);
    fid.push_back(rep.fidelity);
    cr.push_back(rep.relative_decoherence);
  }
  const bool cr_zero = cr[0] == 0.0;
  bool cr_monotone = true;
  for (std::size_t i = 1; i < cr.size(); ++i)
    cr_monotone = cr_monotone && cr[i] >= cr[i - 1];
  std::size_t imin = 0;
  for (std::size_t i = 1; i < fid.size(); ++i)
    if (fid[i] < fid[imin]) imin = i;
  bool unimodal = imin > 0 && imin + 1 < fid.size();
  for (std::size_t i = 1; i <= imin && unimodal; ++i) unimodal = fid[i] < fid[i - 1];
  for (std::size_t i = imin + 1; i < fid.size() && unimodal; ++i) unimodal = fid[i] > fid[i - 1];
  const double rise = fid.back() - fid[imin];
  const bool cr_at_min_ok = cr[imin] >= 0.4 && cr[imin] <= 0.8;
  r.pass = cr_zero && cr_monotone && unimodal && rise >= 0.1 && cr_at_min_ok;
  r.detail = "C_R(0) = " + fmt(cr[0]) + ", monotone " + (cr_monotone ? "yes" : "NO") +
             "; fidelity minimum " + fmt(fid[imin]) + " at gamma = " + fmt(gammas[imin]) +
             ", unimodal " + (unimodal ? "yes" : "NO") + ", rise " + fmt(rise) +
             " (>= 0.1); C_R at minimum " + fmt(cr[imin]) + " (in 0.6 +- 0.2)";
  return r;
}

// -- 10. branch monotonicity -------------------------------------------------------
inline CriterionResult check_branch_monotonicity() {
  CriterionResult r{10, "branch-monotonicity", false, "", false, 0.0};
  std::vector<double> grid;
  for (int k = -38; k <= -20; k += 2) grid.push_back(k);
  for (int k = -14; k <= 8; k += 2) grid.push_back(k);
  const auto rows = scan_sp_family(kDelta0, 0.1, NoiseConfig(kGammaRef), grid);

  int n_lower = 0, n_higher = 0, n_failed = 0;
  bool lower_mono = true, higher_mono = true;
  double prev_f_lower = -1.0, prev_f_higher = -1.0;
  for (const ScanResult& row : rows) {
    if (!row.ok) {
      ++n_failed;
      continue;
    }
    if (row.branch == Branch::LowerMu) {
      lower_mono = lower_mono && row.fidelity > prev_f_lower;
      prev_f_lower = row.fidelity;
      ++n_lower;
    } else {
      higher_mono = higher_mono && row.fidelity > prev_f_higher;
      prev_f_higher = row.fidelity;
      ++n_higher;
    }
  }
  r.pass = n_failed == 0 && n_lower >= 8 && n_higher >= 8 && lower_mono && higher_mono;
  r.detail = "LowerMu " + std::to_string(n_lower) + " pts strictly increasing " +
             (lower_mono ? "yes" : "NO") + "; HigherMu " + std::to_string(n_higher) +
             " pts strictly increasing " + (higher_mono ? "yes" : "NO") +
             (n_failed ? "; " + std::to_string(n_failed) + " points failed" : "");
  return r;
}

// -- 11. Zeno limit -----------------------------------------------------------------
inline CriterionResult check_zeno_limit() {
  CriterionResult r{11, "zeno-limit", false, "", false, 0.0};
  const TlsProtocol sp = sp_protocol(kDelta0, kTfPeak, 0.0);
  double gap_min = 1e300;
  for (int i = 0; i <= 2000; ++i)
    gap_min = std::min(gap_min, sp.gap(i * kTfPeak / 2000.0));
  const double gamma = 1e3 / (gap_min * gap_min * kTfPeak);

  const TimeGrid grid = TimeGrid::uniform(kTfPeak, 256);
  const auto states = propagate(sp.hamiltonian_trajectory(), TlsProtocol::initial_state(),
                                NoiseConfig(gamma), grid);
  const double f = uhlmann_fidelity(states.back(), TlsProtocol::target_state());
  r.pass = f >= 0.99;
  r.detail = "min_t Gamma(t) t_f = 1e3 at gamma = " + fmt(gamma) + ": fidelity " + fmt(f) +
             " (>= 0.99)";
  return r;
}

}  // namespace acceptance

/// Run the acceptance suite.  `full` adds the two oracle-equivalence checks;
/// without it they are reported as skipped (and count as passing for the
/// exit status, since they exercise the expensive paths only).
inline std::vector<CriterionResult> run_acceptance(bool full) {
  using Check = std::function<CriterionResult()>;
  struct Entry {
    Check check;
    bool expensive;
  };
  const std::vector<Entry> entries = {
      {acceptance::check_static_dephasing, false},
      {acceptance::check_diagonal_stationarity, false},
      {acceptance::check_arp_first_peak, false},
      {acceptance::check_mu_anchors, false},
      {acceptance::check_unraveling_equivalence, true},
      {acceptance::check_fock_oracle, true},
      {acceptance::check_ho_curve_shape, false},
      {acceptance::check_generator_distance, false},
      {acceptance::check_noise_transition, false},
      {acceptance::check_branch_monotonicity, false},
      {acceptance::check_zeno_limit, false},
  };
  std::vector<CriterionResult> results;
  results.reserve(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].expensive && !full) {
      CriterionResult r;
      r.index = static_cast<int>(i) + 1;
      r.name = i == 4 ? "unraveling-equivalence" : "fock-oracle";
      r.pass = true;
      r.skipped = true;
      r.detail = "skipped at quick level (run verify --full)";
      results.push_back(std::move(r));
      continue;
    }
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
      r = entries[i].check();
    } catch (const std::exception& e) {
      r.index = static_cast<int>(i) + 1;
      r.name = "criterion-" + std::to_string(i + 1);
      r.pass = false;
      r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    results.push_back(std::move(r));
  }
  return results;
}

/// Human-readable report: one line per criterion plus a summary line.
/// Returns true iff every criterion passed.
inline bool print_acceptance(const std::vector<CriterionResult>& results, std::ostream& os) {
  bool all_pass = true;
  for (const CriterionResult& r : results) {
    all_pass = all_pass && r.pass;
    char head[64];
    std::snprintf(head, sizeof head, "[%2d] %s %-24s", r.index,
                  r.skipped ? "SKIP" : (r.pass ? "PASS" : "FAIL"), r.name.c_str());
    os << head << ' ' << r.detail;
    if (!r.skipped) {
      char t[32];
      std::snprintf(t, sizeof t, " (%.2f s)", r.seconds);
      os << t;
    }
    os << '\n';
  }
  int passed = 0, skipped = 0;
  for (const CriterionResult& r : results) {
    passed += (r.pass && !r.skipped) ? 1 : 0;
    skipped += r.skipped ? 1 : 0;
  }
  os << (all_pass ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL") << " (" << passed << " passed, "
     << skipped << " skipped, "
     << static_cast<int>(results.size()) - passed - skipped << " failed)\n";
  return all_pass;
}

/// Machine-readable report (JSON).
inline void write_acceptance_report(const std::vector<CriterionResult>& results,
                                    std::ostream& os) {
  nlohmann::json doc;
  doc["version"] = kVersion;
  bool all_pass = true;
  doc["criteria"] = nlohmann::json::array();
  for (const CriterionResult& r : results) {
    all_pass = all_pass && r.pass;
    doc["criteria"].push_back({{"index", r.index},
                               {"name", r.name},
                               {"pass", r.pass},
                               {"skipped", r.skipped},
                               {"detail", r.detail},
                               {"seconds", r.seconds}});
  }
  doc["pass"] = all_pass;
  os << doc.dump(2) << '\n';
}

}  // namespace actnoise
