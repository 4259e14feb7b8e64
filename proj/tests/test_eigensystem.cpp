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

#include "actnoise/eigensystem.hpp"
#include "actnoise/tls.hpp"

using namespace actnoise;

TEST_CASE("eigenvalues come out ascending", "[eigensystem]") {
  const Matrix h = 0.5 * 6.0 * sigma_z() + 0.5 * 8.0 * sigma_x();
  const EigenSystem es = instantaneous_eigensystem(h);
  REQUIRE(es.values(0) == Catch::Approx(-5.0));  // hypot(3, 4)
  REQUIRE(es.values(1) == Catch::Approx(5.0));
  REQUIRE_FALSE(es.degenerate);
  REQUIRE(es.vectors.col(0).norm() == Catch::Approx(1.0));
  // Residual of the eigenproblem.
  REQUIRE((h * es.vectors - es.vectors * es.values.asDiagonal().toDenseMatrix())
              .cwiseAbs()
              .maxCoeff() < 1e-12);
}

TEST_CASE("degenerate spectra are flagged", "[eigensystem]") {
  const EigenSystem es = instantaneous_eigensystem(Matrix::Identity(2, 2));
  REQUIRE(es.degenerate);
}

TEST_CASE("gauge smoothing keeps eigenvector series continuous", "[eigensystem]") {
  const TlsProtocol arp = arp_protocol(120.0, 0.05);
  const TimeGrid grid = TimeGrid::uniform(0.05, 400);
  const auto series = eigensystem_series(arp.hamiltonian_trajectory(), grid);
  REQUIRE(series.size() == grid.size());
  for (std::size_t i = 1; i < series.size(); ++i) {
    for (int k = 0; k < 2; ++k) {
      const Complex overlap = series[i - 1].vectors.col(k).dot(series[i].vectors.col(k));
      REQUIRE(overlap.real() > 0.99);            // no sign or phase flips
      REQUIRE(std::abs(overlap.imag()) < 0.01);
    }
  }
}

TEST_CASE("populations and coherences decompose a state", "[eigensystem]") {
  const Matrix h = 0.5 * 10.0 * sigma_z() + 0.5 * 4.0 * sigma_x();
  const EigenSystem es = instantaneous_eigensystem(h);

  // An eigenstate has a single unit population and no coherence.
  const DensityOperator eigenstate(
      Matrix(es.vectors.col(0) * es.vectors.col(0).adjoint()));
  const auto dec = eigenbasis_populations_coherences(eigenstate, es);
  REQUIRE(dec.populations(0) == Catch::Approx(1.0).margin(1e-12));
  REQUIRE(dec.populations(1) == Catch::Approx(0.0).margin(1e-12));
  REQUIRE(dec.coherences.cwiseAbs().maxCoeff() < 1e-12);

  // Populations always sum to one.
  const auto dec2 = eigenbasis_populations_coherences(DensityOperator::maximally_mixed(2), es);
  REQUIRE(dec2.populations.sum() == Catch::Approx(1.0));
}

TEST_CASE("decomposition rejects mismatched dimensions", "[eigensystem]") {
  const EigenSystem es = instantaneous_eigensystem(0.5 * sigma_z());
  REQUIRE_THROWS_AS(eigenbasis_populations_coherences(DensityOperator::maximally_mixed(3), es),
                    StructuralError);
}
