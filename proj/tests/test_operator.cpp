// Copyright 2026 The hops Authors
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

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "hops/operator.hpp"

using namespace hops;
using hops::testing::random_hermitian;
using hops::testing::random_unitary;

TEST_CASE("pauli_matrix builds tensor products") {
  const Operator zz = pauli(2, "Z0 Z1");
  CHECK(max_abs(zz - Eigen::Vector4cd(1, -1, -1, 1).asDiagonal().toDenseMatrix()) == 0.0);

  Operator x(2, 2);
  x << 0, 1, 1, 0;
  CHECK(max_abs(pauli(1, "X0") - x) == 0.0);

  Operator y(2, 2);
  y << 0, Complex(0, -1), Complex(0, 1), 0;
  CHECK(max_abs(pauli(1, "Y0") - y) == 0.0);

  // site 0 is the leftmost tensor factor
  Operator xi = Operator::Zero(4, 4);
  xi(2, 0) = xi(3, 1) = xi(0, 2) = xi(1, 3) = 1.0;
  CHECK(max_abs(pauli(2, "X0") - xi) == 0.0);
}

TEST_CASE("all-to-all Ising on three qubits") {
  const Operator H = pauli_matrix({PauliString::parse(3, "Z0Z1"), PauliString::parse(3, "Z0Z2"),
                                   PauliString::parse(3, "Z1Z2")});
  const std::vector<double> expected{3, -1, -1, -1, -1, -1, -1, 3};
  for (int i = 0; i < 8; ++i) CHECK(H(i, i).real() == doctest::Approx(expected[i]));
  CHECK(max_abs(H - Operator(H.diagonal().asDiagonal())) == 0.0);
  CHECK(operator_norm(H) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("pauli_matrix rejects bad input") {
  CHECK_THROWS_AS(PauliString::parse(2, "X2"), PreconditionError);
  CHECK_THROWS_AS(pauli_matrix({PauliString::parse(2, "X0"), PauliString::parse(3, "X0")}), PreconditionError);
  CHECK_THROWS_AS(PauliString::parse(13, "X0"), GuardError);
  CHECK_THROWS_AS(PauliString::parse(2, "Q0"), PreconditionError);
  CHECK(max_abs(pauli(2, "", 2.5) - 2.5 * identity(4)) == 0.0);
}

TEST_CASE("hermitian_expm") {
  CHECK(max_abs(hermitian_expm(pauli(2, "X0 Y1"), 0.0) - identity(4)) < 1e-15);

  const Operator ez = hermitian_expm(pauli(1, "Z0"), std::numbers::pi / 2);
  CHECK(std::abs(ez(0, 0) - std::polar(1.0, -std::numbers::pi / 2)) < 1e-15);
  CHECK(std::abs(ez(1, 1) - std::polar(1.0, std::numbers::pi / 2)) < 1e-15);
  CHECK(std::abs(ez(0, 1)) < 1e-15);

  std::mt19937_64 rng(7);
  const Operator H = random_hermitian(8, rng);
  CHECK(max_abs(hermitian_expm(H, 0.3) - hops::testing::taylor_expm(H, 0.3)) < 1e-12);

  Operator bad = H;
  bad(0, 1) += 1e-6;
  CHECK_THROWS_AS(hermitian_expm(bad, 1.0), PreconditionError);
}

TEST_CASE("hermitian_expm group laws") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    const Operator H = random_hermitian(4 << (trial % 3), rng);
    const double s = u(rng), t = u(rng);
    CHECK(max_abs(hermitian_expm(H, s) * hermitian_expm(H, t) - hermitian_expm(H, s + t)) < 1e-10);
    CHECK(max_abs(hermitian_expm(H, t) * hermitian_expm(H, -t) - identity(int(H.rows()))) < 1e-10);
    CHECK(is_unitary(hermitian_expm(H, t)));
  }
}

TEST_CASE("operator_norm") {
  CHECK(operator_norm(pauli(1, "Z0")) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(operator_norm(Operator(pauli(1, "X0") + pauli(1, "Z0"))) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const Operator A = random_hermitian(8, rng) + Complex(0, 1) * random_hermitian(8, rng);
    const Operator g = random_unitary(8, rng);
    CHECK(std::abs(operator_norm(Operator(g * A * g.adjoint())) - operator_norm(A)) < 1e-10);
  }
}

TEST_CASE("infidelity") {
  std::mt19937_64 rng(5);
  const Operator U = random_unitary(8, rng);
  CHECK(infidelity(U, U) < 1e-15);
  for (double phi : {0.3, -1.7, 3.1}) CHECK(infidelity(U, std::polar(1.0, phi) * U) < 1e-15);
  CHECK(infidelity(identity(2), pauli(1, "X0")) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(infidelity(identity(2), identity(4)), PreconditionError);

  for (int trial = 0; trial < 50; ++trial) {
    const Operator A = random_unitary(4, rng);
    const Operator B = hermitian_expm(random_hermitian(4, rng), 0.05 * (trial % 7 + 1)) * A;
    const double direct = 1.0 - std::abs((A.adjoint() * B).trace()) / 4.0;
    CHECK(infidelity(A, B) == doctest::Approx(direct).epsilon(1e-9));
    CHECK(infidelity(A, B) <= 0.5 * std::pow(operator_norm(Operator(A - B)), 2) + 1e-9);
  }
}

TEST_CASE("infidelity resolves values below machine epsilon") {
  // 1 - |cos(eps)| = 2 sin^2(eps/2)
  for (double eps : {1e-4, 1e-7, 1e-9}) {
    const double expected = 2.0 * std::pow(std::sin(0.5 * eps), 2);
    CHECK(infidelity(identity(2), hermitian_expm(pauli(1, "Z0"), eps)) ==
          doctest::Approx(expected).epsilon(1e-6));
  }
}

TEST_CASE("unitary_log inverts hermitian_expm") {
  std::mt19937_64 rng(9);
  const Operator H = random_hermitian(8, rng, 0.1);
  const Operator phi = unitary_log(hermitian_expm(H, 1.0));
  CHECK(max_abs(phi - H) < 1e-12);
  CHECK(is_hermitian(phi));
}
