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

#include <cmath>
#include <sstream>

#include "actnoise/metrics.hpp"
#include "actnoise/tls.hpp"

using namespace actnoise;

TEST_CASE("auxiliary angles recover the flat pi pulse", "[tls]") {
  const double t_f = 0.7;
  const SmoothAngle theta{[t_f](double t) { return M_PI * t / t_f; },
                          [t_f](double) { return M_PI / t_f; },
                          [](double) { return 0.0; }};
  const SmoothAngle alpha{[](double) { return -M_PI / 2.0; },
                          [](double) { return 0.0; },
                          [](double) { return 0.0; }};
  const TlsControls c = auxiliary_angles(theta, alpha);
  for (double t : {0.1, 0.35, 0.6}) {
    CHECK(c.omega(t) == Catch::Approx(M_PI / t_f).epsilon(1e-14));
    CHECK(std::abs(c.delta(t)) < 1e-12);
    CHECK(std::abs(c.domega(t)) < 1e-12);
    CHECK(std::abs(c.ddelta(t)) < 1e-12);
  }
  REQUIRE_THROWS_AS(auxiliary_angles(SmoothAngle{}, alpha), StructuralError);
}

TEST_CASE("rapid adiabatic passage controls", "[tls]") {
  const double delta0 = 150.0, t_f = 0.05;
  const TlsProtocol p = arp_protocol(delta0, t_f);

  SECTION("field has constant magnitude and flips the detuning") {
    CHECK(p.delta(0.0) == Catch::Approx(delta0));
    CHECK(std::abs(p.omega(0.0)) < 1e-12);
    CHECK(p.delta(t_f) == Catch::Approx(-delta0));
    for (double t : {0.0, 0.013, 0.026, 0.05})
      CHECK(p.gap(t) == Catch::Approx(delta0).epsilon(1e-12));
  }

  SECTION("adiabaticity parameter is flat at (1+2n) pi / (2 delta0 t_f)") {
    const double expect = M_PI / (2.0 * delta0 * t_f);
    for (double t : {0.0, 0.02, 0.05}) CHECK(p.mu(t) == Catch::Approx(expect).epsilon(1e-12));
    CHECK(p.mu_max() == Catch::Approx(expect).epsilon(1e-12));
    const TlsProtocol p2 = arp_protocol(delta0, t_f, 2);
    CHECK(p2.mu_max() == Catch::Approx(5.0 * expect).epsilon(1e-12));
  }

  SECTION("derivatives match the analytic controls") {
    const double w = M_PI / t_f;
    CHECK(p.ddelta(0.01) == Catch::Approx(-delta0 * w * std::sin(w * 0.01)).epsilon(1e-12));
    CHECK(p.domega(0.01) == Catch::Approx(delta0 * w * std::cos(w * 0.01)).epsilon(1e-12));
  }

  SECTION("argument validation") {
    REQUIRE_THROWS_AS(arp_protocol(-1.0, t_f), StructuralError);
    REQUIRE_THROWS_AS(arp_protocol(delta0, 0.0), StructuralError);
    REQUIRE_THROWS_AS(arp_protocol(delta0, t_f, -1), StructuralError);
  }
}

// In the frame rotating with the control field, ARP evolution is generated by
// a static effective Hamiltonian, giving the closed-form transfer probability
//   P = 1 - (pi^2 / (pi^2 + delta0^2 t_f^2)) sin^2( sqrt(pi^2 + delta0^2 t_f^2) / 2 )
// for zero winding.  This exercises the full nonadiabatic propagation, not
// just the adiabatic limit.
TEST_CASE("noise-free ARP matches the rotating-frame closed form", "[tls]") {
  const double delta0 = 150.0;
  IntegratorOptions opts;
  opts.rtol = 1e-11;
  opts.atol = 1e-13;
  for (double t_f : {0.004, 0.011, 0.05}) {
    const TlsProtocol p = arp_protocol(delta0, t_f);
    const auto states = propagate(p.hamiltonian_trajectory(), TlsProtocol::initial_state(),
                                  NoiseConfig(0.0), TimeGrid::uniform(t_f, 1), opts);
    const double got = states.back().matrix()(1, 1).real();
    const double x2 = M_PI * M_PI + delta0 * delta0 * t_f * t_f;
    const double want = 1.0 - (M_PI * M_PI / x2) * std::pow(std::sin(0.5 * std::sqrt(x2)), 2);
    CHECK(got == Catch::Approx(want).margin(1e-8));
  }
}

TEST_CASE("shortcut protocol construction", "[tls]") {
  const double delta0 = 150.0, t_f = 0.1;

  SECTION("endpoints match the ARP boundary controls") {
    const TlsProtocol p = sp_protocol(delta0, t_f, 0.0);
    CHECK(p.delta(0.0) == Catch::Approx(delta0));
    CHECK(p.delta(t_f) == Catch::Approx(-delta0));
    CHECK(std::abs(p.omega(0.0)) < 1e-12);
    CHECK(std::abs(p.omega(t_f)) < 1e-12);
    CHECK(p.kind() == TlsKind::Sp);
  }

  SECTION("transfer is exact regardless of duration") {
    // Far below the adiabatic regime for this gap scale.
    const TlsProtocol fast = sp_protocol(20.0, 0.05, 0.0);
    const auto states =
        propagate(fast.hamiltonian_trajectory(), TlsProtocol::initial_state(),
                  NoiseConfig(0.0), TimeGrid::uniform(fast.t_f(), 1));
    CHECK(uhlmann_fidelity(states.back(), TlsProtocol::target_state()) >
          1.0 - 1e-5);
  }

  SECTION("knob deforms the interior without touching endpoints") {
    const TlsProtocol a = sp_protocol(delta0, t_f, 0.0);
    const TlsProtocol b = sp_protocol(delta0, t_f, 4.0);
    CHECK(a.delta(0.0) == Catch::Approx(b.delta(0.0)));
    CHECK(a.delta(t_f) == Catch::Approx(b.delta(t_f)));
    // delta has a symmetry zero at t_f/2, so probe the coupling there.
    CHECK(std::abs(a.omega(0.5 * t_f) - b.omega(0.5 * t_f)) > 1.0);
    CHECK(a.mu_max() != Catch::Approx(b.mu_max()));
  }

  SECTION("singular knobs are rejected with the failure time") {
    REQUIRE_THROWS_AS(sp_protocol(delta0, t_f, -200.0), ProtocolError);
    REQUIRE_THROWS_MATCHES(sp_protocol(delta0, t_f, 120.0), ProtocolError,
                           Catch::Matchers::MessageMatches(
                               Catch::Matchers::ContainsSubstring("singular")));
  }
}

TEST_CASE("protocol mu agrees with the spectral adiabaticity measure", "[tls]") {
  // TlsProtocol::mu uses the closed form for the control fields; adiabatic_mu
  // rebuilds the same quantity from the eigensystem of H(t).  For a TLS the
  // two definitions coincide.
  const TlsProtocol p = sp_protocol(120.0, 0.08, 2.0);
  const HamiltonianTrajectory traj = p.hamiltonian_trajectory();
  for (double t : {0.013, 0.04, 0.071}) {
    const double spectral = adiabatic_mu(traj, t, 0);
    CHECK(p.mu(t) == Catch::Approx(spectral).epsilon(1e-6));
  }
}

TEST_CASE("protocol table serialization", "[tls]") {
  const TlsProtocol p = arp_protocol(10.0, 1.0);
  std::ostringstream os;
  p.write_table(os, 3);
  const std::string text = os.str();
  CHECK(text.find("kind=ARP") != std::string::npos);
  CHECK(text.find("delta0=10") != std::string::npos);
  REQUIRE_THROWS_AS(p.write_table(os, 1), StructuralError);
}
