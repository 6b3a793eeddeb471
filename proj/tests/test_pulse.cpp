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
#include "hops/pulse.hpp"

using namespace hops;
using hops::testing::loglog_slope;

namespace {

constexpr double kPi = std::numbers::pi;

Operator test_h0() {
  return pauli_matrix({PauliString::parse(2, "X0 Z1"), PauliString::parse(2, "Z0 Z1", 0.7),
                       PauliString::parse(2, "Y1", 0.3)});
}

// Classical RK4 on i dU/dt = H(t) U, independent of any matrix exponential.
Operator rk4_propagator(const PulseSpec& p, const Operator& H0, int steps_per_piece) {
  Operator U = identity(static_cast<int>(H0.rows()));
  const Complex mi(0.0, -1.0);
  for (const auto& piece : control_pieces(p)) {
    const Operator H = H0 + piece.amplitude * *p.generator;
    const double h = piece.duration / steps_per_piece;
    for (int s = 0; s < steps_per_piece; ++s) {
      const Operator k1 = mi * H * U;
      const Operator k2 = mi * H * (U + 0.5 * h * k1);
      const Operator k3 = mi * H * (U + 0.5 * h * k2);
      const Operator k4 = mi * H * (U + h * k3);
      U += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
  }
  return U;
}

// Midpoint rule on the explicitly exponentiated toggling-frame integrand.
Operator midpoint_magnus(const PulseSpec& p, const Operator& H0, int steps) {
  Operator sum = Operator::Zero(H0.rows(), H0.cols());
  double theta = 0.0;
  for (const auto& piece : control_pieces(p)) {
    const double h = piece.duration / steps;
    for (int s = 0; s < steps; ++s) {
      const Operator Up = hermitian_expm(*p.generator, theta + piece.amplitude * h * (s + 0.5));
      sum += h * Up.adjoint() * H0 * Up;
    }
    theta += piece.amplitude * piece.duration;
  }
  return sum;
}

}  // namespace

TEST_CASE("stretch_pulse") {
  const PulseSpec p = rectangular_pulse(pauli(1, "X0"), kPi, 1e-4);
  CHECK(same_pulse(stretch_pulse(p, 1.0), p));

  const PulseSpec s = stretch_pulse(p, 2.0);
  CHECK(s.duration() == doctest::Approx(2e-4).epsilon(1e-15));
  const auto pieces = control_pieces(s);
  REQUIRE(pieces.size() == 1);
  // amplitude theta / (c t_p)
  CHECK(pieces[0].amplitude == doctest::Approx(kPi / (2 * 1e-4)).epsilon(1e-14));
  CHECK(std::abs(envelope_integral(s) - kPi) < 1e-10);
  CHECK(max_abs(ideal_action(s) - ideal_action(p)) < 1e-12);
  const Operator zero = Operator::Zero(2, 2);
  CHECK(max_abs(pulse_propagator(s, zero) - pulse_propagator(p, zero)) < 1e-12);
  CHECK_THROWS_AS(stretch_pulse(p, 0.5), PreconditionError);
}

TEST_CASE("sampled envelopes keep their area under stretching") {
  const PulseSpec p = sampled_pulse(pauli(2, "Y0"), {{0.0, 1.0}, {0.3, 4.0}, {0.7, 2.0}}, 1.0);
  CHECK(p.area == doctest::Approx(0.3 + 1.6 + 0.6));
  for (double c : {1.0, 1.5, 4.0}) {
    const PulseSpec s = stretch_pulse(p, c);
    CHECK(std::abs(envelope_integral(s) - p.area) < 1e-10);
    CHECK(std::abs(envelope_integral(reverse_pulse(s)) + p.area) < 1e-10);
  }
  CHECK_THROWS_AS(sampled_pulse(pauli(1, "X0"), {{0.1, 1.0}}, 1.0), PreconditionError);
  CHECK_THROWS_AS(sampled_pulse(pauli(1, "X0"), {{0.0, 1.0}, {1.2, 1.0}}, 1.0), PreconditionError);
}

TEST_CASE("reverse_pulse") {
  const PulseSpec p = rectangular_pulse(pauli(1, "X0"), kPi / 2, 0.1);
  const auto base = control_pieces(p);
  const auto rev = control_pieces(reverse_pulse(p));
  REQUIRE(rev.size() == 1);
  CHECK(rev[0].duration == base[0].duration);
  CHECK(rev[0].amplitude == -base[0].amplitude);
  CHECK(same_pulse(reverse_pulse(reverse_pulse(p)), p));

  const PulseSpec q = sampled_pulse(pauli(1, "Y0"), {{0.0, 1.0}, {0.2, -3.0}, {0.5, 2.0}}, 0.6);
  const auto qb = control_pieces(q);
  const auto qr = control_pieces(reverse_pulse(q));
  REQUIRE(qr.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(qr[i].duration == qb[2 - i].duration);
    CHECK(qr[i].amplitude == -qb[2 - i].amplitude);
  }
  const Operator zero = Operator::Zero(2, 2);
  CHECK(max_abs(pulse_propagator(reverse_pulse(q), zero) * pulse_propagator(q, zero) - identity(2)) < 1e-12);
  CHECK(max_abs(ideal_action(reverse_pulse(q)) - ideal_action(q).adjoint()) < 1e-12);
}

TEST_CASE("pulse_propagator") {
  const Operator X = pauli(1, "X0");
  const PulseSpec p = rectangular_pulse(X, kPi / 2, 1e-3);
  CHECK(max_abs(pulse_propagator(p, Operator::Zero(2, 2)) - hermitian_expm(X, kPi / 2)) < 1e-14);

  const Operator H0 = test_h0();
  const PulseSpec r = rectangular_pulse(pauli(2, "X0"), kPi / 2, 0.5);
  CHECK(max_abs(pulse_propagator(r, H0) - rk4_propagator(r, H0, 10000)) < 1e-10);
  const PulseSpec s = sampled_pulse(pauli(2, "Y0"), {{0.0, 1.0}, {0.1, 4.0}, {0.35, 2.0}}, 0.5);
  CHECK(max_abs(pulse_propagator(s, H0) - rk4_propagator(s, H0, 10000)) < 1e-10);
  CHECK(max_abs(pulse_propagator(stretch_pulse(reverse_pulse(s), 1.7), H0) -
                rk4_propagator(stretch_pulse(reverse_pulse(s), 1.7), H0, 10000)) < 1e-10);

  // commuting generator and H0
  const Operator Hc = pauli(2, "Z0 Z1", 0.8);
  const PulseSpec z = stretch_pulse(rectangular_pulse(pauli(2, "Z0"), 1.1, 0.2), 1.5);
  CHECK(max_abs(pulse_propagator(z, Hc) - hermitian_expm(pauli(2, "Z0"), 1.1) * hermitian_expm(Hc, 0.3)) < 1e-12);
  CHECK_THROWS_AS(pulse_propagator(z, test_h0().topLeftCorner(2, 2).eval()), PreconditionError);
}

TEST_CASE("magnus_first") {
  const Operator H0 = test_h0();
  const PulseSpec p = rectangular_pulse(pauli(2, "X0"), kPi / 2, 1e-3);
  CHECK(max_abs(magnus_first(p, Operator::Zero(4, 4))) == 0.0);

  const Operator Hc = pauli(2, "X0 Z1", 0.8);
  CHECK(max_abs(magnus_first(stretch_pulse(p, 2.5), Hc) - Hc * 2.5e-3) < 1e-10);

  for (const auto& q : {p, reverse_pulse(p),
                        sampled_pulse(pauli(2, "Y0 Y1"), {{0.0, 1.0}, {0.2, 3.0}}, 0.4)}) {
    const Operator m = magnus_first(q, H0);
    CHECK(is_hermitian(m));
    CHECK(max_abs(m - midpoint_magnus(q, H0, 4000)) < 1e-7 * operator_norm(m));
    for (double c : {1.0, 1.6, 4.0})
      CHECK(max_abs(magnus_first(stretch_pulse(q, c), H0) - c * m) < 1e-9);
  }
}

TEST_CASE("pulse error is linear in width") {
  const Operator H0 = test_h0();
  std::vector<double> tps, errs;
  for (double tp : hops::testing::geomspace(1e-5, 1e-2, 7)) {
    const PulseSpec p = rectangular_pulse(pauli(2, "X0"), kPi / 2, tp);
    tps.push_back(tp);
    errs.push_back(operator_norm(Operator(pulse_propagator(p, H0) - ideal_action(p))));
  }
  CHECK(loglog_slope(tps, errs) == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("error action obeys the stretching identity") {
  const Operator H0 = test_h0();
  const PulseSpec p = rectangular_pulse(pauli(2, "X0") + pauli(2, "Y1"), kPi / 2, 1e-3);
  const Operator phi1 = magnus_first(p, H0);
  std::vector<double> cs, errs;
  for (double c : hops::testing::geomspace(1.0, 8.0, 7)) {
    cs.push_back(c);
    errs.push_back(operator_norm(Operator(error_action(stretch_pulse(p, c), H0) - c * phi1)));
  }
  CHECK(loglog_slope(cs, errs) == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("base then reversed pulse has doubled first-order error") {
  const Operator H0 = test_h0();
  const double tp = 1e-3;
  const PulseSpec p = rectangular_pulse(pauli(2, "X0"), kPi / 2, tp);
  const Operator U = pulse_propagator(reverse_pulse(p), H0) * pulse_propagator(p, H0);
  const Operator phi = unitary_log(U);
  const Operator expected = 2.0 * magnus_first(p, H0);
  const double lambda_tp = operator_norm(H0) * tp;
  CHECK(operator_norm(Operator(phi - expected)) < 4.0 * lambda_tp * lambda_tp);
  CHECK(operator_norm(expected) > 100.0 * operator_norm(Operator(phi - expected)));
}
