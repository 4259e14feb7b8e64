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

#include <sstream>

#include "actnoise/optimizer.hpp"

using namespace actnoise;

TEST_CASE("tls m parameter matches the metric-grid evaluation", "[optimizer]") {
  // ARP holds the gap at delta0, so M = 2 delta0^2 exactly.
  const TlsProtocol arp = arp_protocol(150.0, 0.05);
  CHECK(tls_m_parameter(arp) == Catch::Approx(2.0 * 150.0 * 150.0).epsilon(1e-10));

  // For SP the closed-form gap integral must agree with the generic
  // eigenvalue-based m_parameter on a fine grid.
  const TlsProtocol sp = sp_protocol(150.0, 0.1, -4.0);
  const double generic =
      m_parameter(sp.hamiltonian_trajectory(), TimeGrid::uniform(sp.t_f(), 4000));
  CHECK(tls_m_parameter(sp) == Catch::Approx(generic).epsilon(1e-6));
}

TEST_CASE("monotone knob range brackets the M minimum", "[optimizer]") {
  const double delta0 = 150.0, t_f = 0.1;
  const auto [lo, hi] = sp_monotone_knob_range(delta0, t_f);
  REQUIRE(lo < hi);
  // M must be strictly increasing across the returned interval.
  const int n = 24;
  double prev = detail::sp_m_at(delta0, t_f, lo);
  for (int i = 1; i <= n; ++i) {
    const double m = detail::sp_m_at(delta0, t_f, lo + (hi - lo) * i / n);
    CHECK(m > prev);
    prev = m;
  }
  // Left of lo sits the other branch: M grows again toward negative knobs.
  CHECK(detail::sp_m_at(delta0, t_f, lo - 2.0) > detail::sp_m_at(delta0, t_f, lo));
}

TEST_CASE("protocol synthesis hits a requested noise sensitivity", "[optimizer]") {
  const double delta0 = 150.0, t_f = 0.1;

  SECTION("interior target") {
    const double target = 2.0 * delta0 * delta0;  // the ARP anchor value
    const TlsProtocol p = find_protocol_for_m(delta0, t_f, target, 1e-6);
    CHECK(p.kind() == TlsKind::Sp);
    CHECK(tls_m_parameter(p) == Catch::Approx(target).margin(2e-6));
  }

  SECTION("unreachable targets name the achievable range") {
    REQUIRE_THROWS_MATCHES(find_protocol_for_m(delta0, t_f, 1.0, 1e-6), DomainError,
                           Catch::Matchers::MessageMatches(
                               Catch::Matchers::ContainsSubstring("achievable range")));
    REQUIRE_THROWS_AS(find_protocol_for_m(delta0, t_f, 1e12, 1e-6), DomainError);
    REQUIRE_THROWS_AS(find_protocol_for_m(delta0, t_f, 2.0 * delta0 * delta0, -1.0),
                      StructuralError);
  }
}

TEST_CASE("family scan classifies branches and sorts by M", "[optimizer]") {
  const double delta0 = 150.0, t_f = 0.1;
  ScanOptions opts;
  opts.grid_points = 400;  // coarse but adequate for branch structure
  opts.mu_samples = 801;

  // Straddle the M minimum near knob ~ -19.5 plus one inadmissible point.
  const std::vector<double> knobs = {-30.0, -26.0, -22.0, -16.0, -8.0, 0.0, 8.0, -200.0};
  const auto rows = scan_sp_family(delta0, t_f, NoiseConfig(0.01), knobs, opts);
  REQUIRE(rows.size() == knobs.size());

  // Exactly the singular knob fails, and failures sort last.
  REQUIRE_FALSE(rows.back().ok);
  CHECK(rows.back().knob == -200.0);
  CHECK_FALSE(rows.back().error.empty());
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    REQUIRE(rows[i].ok);
    if (i + 2 < rows.size()) CHECK(rows[i].m_param <= rows[i + 1].m_param);
  }

  // Both branches are present, and within each branch the noisy fidelity
  // grows with M: at this gamma the larger gaps still win against the extra
  // dephasing sensitivity, which is exactly the trade-off the scan exposes.
  int higher = 0, lower = 0;
  double prev_f_higher = -1.0, prev_f_lower = -1.0;
  for (const auto& r : rows) {
    if (!r.ok) continue;
    if (r.branch == Branch::HigherMu) {
      ++higher;
      CHECK(r.fidelity > prev_f_higher);
      prev_f_higher = r.fidelity;
    } else {
      ++lower;
      CHECK(r.fidelity > prev_f_lower);
      prev_f_lower = r.fidelity;
    }
  }
  CHECK(higher >= 2);
  CHECK(lower >= 2);

  std::ostringstream os;
  write_scan_csv(os, rows);
  const std::string csv = os.str();
  CHECK(csv.rfind("knob,m_param,mu_max,fidelity,branch\n", 0) == 0);
  CHECK(csv.find("-200") == std::string::npos);  // failed rows are omitted
  CHECK(csv.find("LowerMu") != std::string::npos);
  CHECK(csv.find("HigherMu") != std::string::npos);

  REQUIRE_THROWS_AS(scan_sp_family(delta0, t_f, NoiseConfig(0.01), {}, opts),
                    StructuralError);
}
