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

// Differentiates propagated solutions numerically and feeds them back into
// the stated equations of motion.  This closes the loop between integrator
// output and generator definition without trusting either side alone.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "actnoise/oscillator.hpp"
#include "actnoise/propagator.hpp"
#include "actnoise/tls.hpp"

using namespace actnoise;

TEST_CASE("propagated TLS states satisfy the master equation", "[eom]") {
  const double gamma = 0.02;
  const TlsProtocol proto = arp_protocol(150.0, 0.01);
  const HamiltonianTrajectory traj = proto.hamiltonian_trajectory();
  const std::size_t n = 4000;
  const TimeGrid grid = TimeGrid::uniform(proto.t_f(), n);
  IntegratorOptions opts;
  opts.rtol = 1e-11;
  opts.atol = 1e-13;
  const auto states =
      propagate(traj, TlsProtocol::initial_state(), NoiseConfig(gamma), grid, opts);
  REQUIRE(states.size() == grid.size());

  const double h = grid[1] - grid[0];
  double worst = 0.0;
  for (std::size_t i : {std::size_t(200), n / 3, n / 2, 3 * n / 4, n - 200}) {
    const Matrix fd = (states[i + 1].matrix() - states[i - 1].matrix()) / (2.0 * h);
    const Matrix rhs = master_rhs(traj.hamiltonian(grid[i]), states[i].matrix(), gamma);
    worst = std::max(worst, (fd - rhs).norm() / rhs.norm());
  }
  CHECK(worst < 1e-5);
}

TEST_CASE("dissipator identities", "[eom]") {
  const Matrix h = [] {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = 1.0;
    m(1, 1) = -1.0;
    m(0, 1) = m(1, 0) = 0.5;
    return m;
  }();
  const Matrix rho = DensityOperator::maximally_mixed(2).matrix();
  // The identity commutes with everything: no coherent or dissipative flow.
  CHECK(master_rhs(h, rho, 0.7).norm() < 1e-14);

  // The dissipator is trace-free and hermiticity-preserving for any input.
  Matrix x = Matrix::Zero(2, 2);
  x(0, 0) = 0.3;
  x(1, 1) = 0.7;
  x(0, 1) = Complex(0.1, 0.2);
  x(1, 0) = std::conj(x(0, 1));
  const Matrix d = dissipator(h, x, 0.7);
  CHECK(std::abs(d.trace()) < 1e-14);
  CHECK((d - d.adjoint().eval()).norm() < 1e-14);
}

TEST_CASE("propagated oscillator moments satisfy their moment equations", "[eom]") {
  const double gamma = 0.05;
  const FrequencyProtocol proto = constant_mu_ramp(2.0, 1.0, 2.0);
  const std::size_t n = 2000;
  const TimeGrid grid = TimeGrid::uniform(proto.t_f(), n);
  const auto states = propagate_moments(proto, GaussianState::displaced_ground(2.0, 0.5, 0.1),
                                        NoiseConfig(gamma), grid);

  auto raw = [](const GaussianState& s) {
    Eigen::Matrix<double, 5, 1> y;
    y << s.mean_q(), s.mean_p(), s.cov()(0, 0) + s.mean_q() * s.mean_q(),
        s.cov()(1, 1) + s.mean_p() * s.mean_p(),
        2.0 * s.cov()(0, 1) + 2.0 * s.mean_q() * s.mean_p();
    return y;
  };

  const double h = grid[1] - grid[0];
  double worst = 0.0;
  for (std::size_t i : {std::size_t(100), n / 4, n / 2, 7 * n / 8}) {
    const Eigen::Matrix<double, 5, 1> fd = (raw(states[i + 1]) - raw(states[i - 1])) / (2.0 * h);
    const Eigen::Matrix<double, 5, 1> y = raw(states[i]);
    const double w2 = proto.omega_sq(grid[i]);
    Eigen::Matrix<double, 5, 1> rhs;
    rhs(0) = y(1) - gamma * w2 * y(0);
    rhs(1) = -w2 * y(0) - gamma * w2 * y(1);
    rhs(2) = y(4) + 2.0 * gamma * (y(3) - w2 * y(2));
    rhs(3) = -w2 * y(4) + 2.0 * gamma * w2 * (w2 * y(2) - y(3));
    rhs(4) = 2.0 * y(3) - 2.0 * w2 * y(2) - 4.0 * gamma * w2 * y(4);
    worst = std::max(worst, (fd - rhs).norm() / rhs.norm());
  }
  CHECK(worst < 1e-4);
}
