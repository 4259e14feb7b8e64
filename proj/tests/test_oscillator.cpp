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

#include <catch2/catch_amalgamated.hpp>

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <sstream>

#include "actnoise/oscillator.hpp"

using namespace actnoise;

TEST_CASE("gaussian state constructors and audits", "[oscillator]") {
  const GaussianState g = GaussianState::ground(2.0);
  CHECK(g.cov()(0, 0) == Catch::Approx(0.25));
  CHECK(g.cov()(1, 1) == Catch::Approx(1.0));
  CHECK(g.det_cov() == Catch::Approx(0.25));
  CHECK(g.energy(2.0) == Catch::Approx(1.0));  // hbar omega / 2

  const GaussianState sq = GaussianState::squeezed_vacuum(1.0, 0.8);
  CHECK(sq.det_cov() == Catch::Approx(0.25));
  CHECK(sq.cov()(0, 0) == Catch::Approx(0.5 * std::exp(-1.6)));

  Eigen::Matrix2d bad = Eigen::Matrix2d::Identity() * 0.3;
  bad(0, 1) = 0.5;  // asymmetric
  REQUIRE_THROWS_AS(GaussianState(0, 0, bad), StructuralError);
  REQUIRE_THROWS_AS(GaussianState(0, 0, Eigen::Matrix2d::Identity() * 0.3),
                    StructuralError);  // det < 1/4
  REQUIRE_THROWS_AS(GaussianState::ground(-1.0), StructuralError);
}

TEST_CASE("gaussian fidelity closed forms", "[oscillator]") {
  SECTION("two pure ground states") {
    const double w1 = 1.0, w2 = 3.7;
    const double want = std::sqrt(2.0 * std::sqrt(w1 * w2) / (w1 + w2));
    CHECK(gaussian_fidelity(GaussianState::ground(w1), GaussianState::ground(w2)) ==
          Catch::Approx(want).epsilon(1e-12));
  }
  SECTION("coherent displacement overlap") {
    // |<0|alpha>| = exp(-|alpha|^2/2) with |alpha|^2 = omega q0^2 / 2.
    const double w = 2.5, q0 = 0.9;
    CHECK(gaussian_fidelity(GaussianState::ground(w),
                            GaussianState::displaced_ground(w, q0, 0.0)) ==
          Catch::Approx(std::exp(-w * q0 * q0 / 4.0)).epsilon(1e-12));
  }
  SECTION("identity and symmetry") {
    const GaussianState a = GaussianState::displaced_ground(1.5, 0.2, -0.4);
    const GaussianState b = GaussianState::squeezed_vacuum(1.5, 0.3);
    CHECK(gaussian_fidelity(a, a) == Catch::Approx(1.0));
    CHECK(gaussian_fidelity(a, b) == Catch::Approx(gaussian_fidelity(b, a)));
  }
}

TEST_CASE("constant-mu ramp properties", "[oscillator]") {
  const double w0 = 1.0, wf = 0.25, t_f = 3.0;
  const FrequencyProtocol p = constant_mu_ramp(w0, wf, t_f);
  CHECK(std::sqrt(p.omega_sq(0.0)) == Catch::Approx(w0));
  CHECK(std::sqrt(p.omega_sq(t_f)) == Catch::Approx(wf));
  const double mu_expect = std::abs(wf - w0) / (w0 * wf * t_f);
  for (double t : {0.0, 1.1, 2.9}) CHECK(p.mu(t) == Catch::Approx(mu_expect).epsilon(1e-10));
  CHECK_FALSE(p.has_inverted_span());
  REQUIRE_THROWS_AS(constant_mu_ramp(-1.0, wf, t_f), StructuralError);
  REQUIRE_THROWS_AS(constant_mu_ramp(w0, wf, 0.0), StructuralError);
}

TEST_CASE("ermakov shortcut boundary conditions and exact transfer", "[oscillator]") {
  const double w0 = 1.0, wf = 0.25, t_f = 3.0;
  const FrequencyProtocol p = ermakov_sp(w0, wf, t_f);
  CHECK(p.omega_sq(0.0) == Catch::Approx(w0 * w0).epsilon(1e-9));
  CHECK(p.omega_sq(t_f) == Catch::Approx(wf * wf).epsilon(1e-9));

  const auto states = propagate_moments(p, GaussianState::ground(w0), NoiseConfig(0.0),
                                        TimeGrid::uniform(t_f, 64));
  const double f = gaussian_fidelity(states.back(), GaussianState::ground(wf));
  CHECK(f > 1.0 - 1e-8);

  // Aggressive shortcut inverts the potential transiently and is flagged.
  const FrequencyProtocol fast = ermakov_sp(1.0, 0.1, 0.3);
  CHECK(fast.has_inverted_span());
  CHECK(std::isnan(fast.mu_max()));
  // The moment propagation itself still goes through and stays exact.
  const auto fs = propagate_moments(fast, GaussianState::ground(1.0), NoiseConfig(0.0),
                                    TimeGrid::uniform(0.3, 32));
  CHECK(gaussian_fidelity(fs.back(), GaussianState::ground(0.1)) > 1.0 - 1e-8);
}

// For a static frequency the moment equations are linear with constant
// coefficients, so the exact flow is a matrix exponential of the 5x5
// block system (means 2x2, second moments 3x3).  Freezing the frequency via
// a ratio-1 ramp pins the propagated moments against that closed form.
TEST_CASE("static-frequency moments match the matrix exponential", "[oscillator]") {
  const double w = 1.3, gamma = 0.07, t_f = 2.0;
  const double w2 = w * w;
  const FrequencyProtocol frozen = constant_mu_ramp(w, w, t_f);

  Eigen::Matrix<double, 5, 5> a = Eigen::Matrix<double, 5, 5>::Zero();
  a(0, 0) = -gamma * w2;
  a(0, 1) = 1.0;
  a(1, 0) = -w2;
  a(1, 1) = -gamma * w2;
  a(2, 2) = -2.0 * gamma * w2;
  a(2, 3) = 2.0 * gamma;
  a(2, 4) = 1.0;
  a(3, 2) = 2.0 * gamma * w2 * w2;
  a(3, 3) = -2.0 * gamma * w2;
  a(3, 4) = -w2;
  a(4, 2) = -2.0 * w2;
  a(4, 3) = 2.0;
  a(4, 4) = -4.0 * gamma * w2;

  const GaussianState s0 = GaussianState::displaced_ground(w, 0.8, -0.2);
  Eigen::Matrix<double, 5, 1> y0;
  y0 << s0.mean_q(), s0.mean_p(), s0.cov()(0, 0) + 0.64, s0.cov()(1, 1) + 0.04,
      2.0 * s0.cov()(0, 1) + 2.0 * 0.8 * -0.2;

  const auto states = propagate_moments(frozen, s0, NoiseConfig(gamma),
                                        TimeGrid::uniform(t_f, 8));
  const Eigen::Matrix<double, 5, 1> yf = ((a * t_f).exp() * y0).eval();
  const GaussianState& got = states.back();
  CHECK(got.mean_q() == Catch::Approx(yf(0)).margin(1e-9));
  CHECK(got.mean_p() == Catch::Approx(yf(1)).margin(1e-9));
  CHECK(got.cov()(0, 0) == Catch::Approx(yf(2) - yf(0) * yf(0)).margin(1e-9));
  CHECK(got.cov()(1, 1) == Catch::Approx(yf(3) - yf(1) * yf(1)).margin(1e-9));
  CHECK(got.cov()(0, 1) == Catch::Approx(0.5 * yf(4) - yf(0) * yf(1)).margin(1e-9));
}

TEST_CASE("action noise heats the oscillator", "[oscillator]") {
  const double t_f = 3.0;
  const FrequencyProtocol p = constant_mu_ramp(1.0, 0.25, t_f);
  const GaussianState s0 = GaussianState::ground(1.0);
  const auto noisy =
      propagate_moments(p, s0, NoiseConfig(0.1), TimeGrid::uniform(t_f, 32));
  // The phase-space volume can only grow under dephasing.
  for (std::size_t i = 1; i < noisy.size(); ++i)
    CHECK(noisy[i].det_cov() >= noisy[i - 1].det_cov() - 1e-12);
  CHECK(noisy.back().det_cov() > 0.25 + 1e-3);
}

TEST_CASE("moment propagation validates and serializes", "[oscillator]") {
  const FrequencyProtocol p = constant_mu_ramp(1.0, 0.5, 1.0);
  REQUIRE_THROWS_AS(propagate_moments(p, GaussianState::ground(1.0), NoiseConfig(0.0),
                                      TimeGrid::uniform(2.0, 4)),
                    StructuralError);

  const TimeGrid grid = TimeGrid::uniform(1.0, 4);
  const auto states = propagate_moments(p, GaussianState::ground(1.0), NoiseConfig(0.0), grid);
  std::ostringstream os;
  write_moments_csv(os, grid, states);
  CHECK(os.str().rfind("t,q,p,qq,pp,qp_sym\n", 0) == 0);
  std::ostringstream table;
  p.write_table(table, 3);
  CHECK(table.str().find("kind=ConstantMu") != std::string::npos);
}
