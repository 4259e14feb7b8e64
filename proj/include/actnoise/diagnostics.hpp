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

#include "actnoise/metrics.hpp"
#include "actnoise/oscillator.hpp"
#include "actnoise/propagator.hpp"
#include "actnoise/stochastic.hpp"
#include "actnoise/tls.hpp"

namespace actnoise {

// ---------------------------------------------------------------------------
// Per-point diagnostics runners: one (protocol, gamma) evaluation producing a
// DiagnosticsReport row.  These are the workhorses behind sweeps and scans.
// ---------------------------------------------------------------------------

struct PointOptions {
  int grid_points = 1200;  // output grid for propagation and metric integrals
  IntegratorOptions integrator;
  std::size_t mc_trajectories = 0;  // 0: skip the unraveling cross-check
  std::uint64_t seed = 1;
  unsigned threads = 1;  // threads inside one point (Monte Carlo only)
};

/// TLS point: noise-free and noisy propagation, terminal fidelity to |1>,
/// mu_max, generator distance, time-averaged coherences, relative
/// decoherence, M, and (optionally) the trace distance between the
/// Monte-Carlo ensemble mean and the master-equation state.
inline DiagnosticsReport run_tls_point(const TlsProtocol& proto, double gamma,
                                       const PointOptions& opts = {}) {
  DiagnosticsReport r;
  r.system = "TLS";
  r.protocol = to_string(proto.kind());
  r.t_f = proto.t_f();
  r.gamma = gamma;
  if (proto.kind() == TlsKind::Sp) r.knob = proto.knob();

  const HamiltonianTrajectory traj = proto.hamiltonian_trajectory();
  const TimeGrid grid = TimeGrid::uniform(proto.t_f(), opts.grid_points);
  const std::vector<EigenSystem> bases = eigensystem_series(traj, grid);
  const DensityOperator init = TlsProtocol::initial_state();

  const auto ideal = propagate(traj, init, NoiseConfig(0.0), grid, opts.integrator);
  r.c_bar_ideal = average_coherence(ideal, bases, grid);

  const bool noisy_run = gamma > 0.0;
  const auto noisy =
      noisy_run ? propagate(traj, init, NoiseConfig(gamma), grid, opts.integrator) : ideal;
  r.c_bar_noisy = noisy_run ? average_coherence(noisy, bases, grid) : r.c_bar_ideal;

  r.fidelity = uhlmann_fidelity(noisy.back(), TlsProtocol::target_state());
  r.mu_max = proto.mu_max();
  r.generator_distance = generator_distance(traj, NoiseConfig(gamma), grid);
  r.relative_decoherence = relative_decoherence(r.c_bar_ideal, r.c_bar_noisy);
  r.m_parameter = m_parameter(traj, grid);

  if (opts.mc_trajectories > 0 && noisy_run) {
    const DensityOperator mean =
        stochastic_ensemble_mean(traj, init, NoiseConfig(gamma), grid, opts.seed,
                                 opts.mc_trajectories, opts.threads);
    r.mc_trace_distance = trace_distance(mean, noisy.back());
  }
  return r;
}

/// Oscillator point in the Gaussian-moment representation.  The coherence
/// and generator metrics are defined on density matrices, not moments, so
/// those fields stay NaN here; fidelity is the Gaussian Uhlmann fidelity to
/// the omega_f ground state and mu_max is NaN for transiently inverted
/// protocols.
inline DiagnosticsReport run_ho_point(const FrequencyProtocol& proto, double gamma,
                                      const PointOptions& opts = {}) {
  DiagnosticsReport r;
  r.system = "HO";
  r.protocol = to_string(proto.kind());
  r.t_f = proto.t_f();
  r.gamma = gamma;

  const TimeGrid grid = TimeGrid::uniform(proto.t_f(), opts.grid_points);
  const GaussianState init = GaussianState::ground(proto.omega0());
  // Enforce at least the moment-system default accuracy: the 5-dim system is
  // cheap and the det(cov) audit needs the headroom.
  IntegratorOptions io = opts.integrator;
  io.rtol = std::min(io.rtol, moment_integrator_defaults().rtol);
  io.atol = std::min(io.atol, moment_integrator_defaults().atol);
  const auto states = propagate_moments(proto, init, NoiseConfig(gamma), grid, io);
  r.fidelity = gaussian_fidelity(states.back(), GaussianState::ground(proto.omega_f()));
  r.mu_max = proto.mu_max();
  return r;
}

}  // namespace actnoise
