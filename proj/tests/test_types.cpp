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

#include "actnoise/types.hpp"

using namespace actnoise;

TEST_CASE("uniform time grid", "[types]") {
  const TimeGrid grid = TimeGrid::uniform(2.0, 4);
  REQUIRE(grid.size() == 5);
  REQUIRE(grid.n_steps() == 4);
  REQUIRE(grid[0] == 0.0);
  REQUIRE(grid[4] == 2.0);
  REQUIRE(grid[2] == Catch::Approx(1.0));
  REQUIRE(grid.t_f() == 2.0);
}

TEST_CASE("time grid validation", "[types]") {
  REQUIRE_THROWS_AS(TimeGrid::uniform(-1.0, 4), StructuralError);
  REQUIRE_THROWS_AS(TimeGrid::uniform(1.0, 0), StructuralError);
  REQUIRE_THROWS_AS(TimeGrid::from_times({0.5, 1.0}), StructuralError);   // must start at 0
  REQUIRE_THROWS_AS(TimeGrid::from_times({0.0, 1.0, 1.0}), StructuralError);
  REQUIRE_THROWS_AS(TimeGrid::from_times({0.0}), StructuralError);
  REQUIRE_NOTHROW(TimeGrid::from_times({0.0, 0.25, 1.0}));
}

TEST_CASE("density operator constructors", "[types]") {
  const DensityOperator ground = DensityOperator::basis_state(3, 0);
  REQUIRE(ground.dim() == 3);
  REQUIRE(ground.matrix()(0, 0) == Complex(1.0, 0.0));
  REQUIRE(ground.purity() == Catch::Approx(1.0));

  const DensityOperator mixed = DensityOperator::maximally_mixed(4);
  REQUIRE(mixed.purity() == Catch::Approx(0.25));

  Eigen::VectorXcd psi(2);
  psi << Complex(1.0, 0.0), Complex(0.0, 1.0);
  psi /= std::sqrt(2.0);
  const DensityOperator pure = DensityOperator::pure(psi);
  REQUIRE(pure.purity() == Catch::Approx(1.0));
  REQUIRE(std::abs(pure.matrix()(0, 1) - Complex(0.0, -0.5)) < 1e-14);
}

TEST_CASE("density operator audits", "[types]") {
  Matrix bad_trace = Matrix::Identity(2, 2);  // trace 2
  REQUIRE_THROWS_AS(DensityOperator(bad_trace), StructuralError);

  Matrix non_hermitian = Matrix::Zero(2, 2);
  non_hermitian(0, 0) = 0.5;
  non_hermitian(1, 1) = 0.5;
  non_hermitian(0, 1) = Complex(0.3, 0.0);
  non_hermitian(1, 0) = Complex(0.1, 0.0);
  REQUIRE_THROWS_AS(DensityOperator(non_hermitian), StructuralError);

  Matrix negative = Matrix::Zero(2, 2);  // eigenvalues 1.2 and -0.2
  negative(0, 0) = 1.2;
  negative(1, 1) = -0.2;
  REQUIRE_THROWS_AS(DensityOperator(negative), StructuralError);

  REQUIRE_THROWS_AS(DensityOperator::basis_state(2, 5), StructuralError);
}

TEST_CASE("noise config rejects negative gamma", "[types]") {
  REQUIRE_NOTHROW(NoiseConfig(0.0));
  REQUIRE_NOTHROW(NoiseConfig(2.5));
  REQUIRE_THROWS_AS(NoiseConfig(-1e-9), StructuralError);
}

TEST_CASE("hamiltonian trajectory validates hermiticity", "[types]") {
  auto good = [](double t) -> Matrix {
    Matrix h(2, 2);
    h << t, Complex(0.0, 1.0), Complex(0.0, -1.0), -t;
    return h;
  };
  REQUIRE_NOTHROW(HamiltonianTrajectory(2, 1.0, good));

  auto bad = [](double t) -> Matrix {
    Matrix h = Matrix::Zero(2, 2);
    h(0, 1) = Complex(t, 0.5);  // no conjugate partner
    return h;
  };
  REQUIRE_THROWS_AS(HamiltonianTrajectory(2, 1.0, bad), StructuralError);
}

TEST_CASE("hamiltonian trajectory derivative fallback", "[types]") {
  // h(t) = t^2 sigma_x / 2 -> dh = t sigma_x.
  auto h = [](double t) -> Matrix {
    Matrix m(2, 2);
    m << 0.0, 0.5 * t * t, 0.5 * t * t, 0.0;
    return m;
  };
  auto dh = [](double t) -> Matrix {
    Matrix m(2, 2);
    m << 0.0, t, t, 0.0;
    return m;
  };
  const HamiltonianTrajectory analytic(2, 1.0, h, dh);
  const HamiltonianTrajectory numeric(2, 1.0, h);
  REQUIRE_FALSE(analytic.derivative_is_finite_difference());
  REQUIRE(numeric.derivative_is_finite_difference());
  for (double t : {0.0, 0.3, 0.7, 1.0}) {
    const Matrix diff = analytic.derivative(t) - numeric.derivative(t);
    REQUIRE(diff.cwiseAbs().maxCoeff() < 1e-6);
  }
}
