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
#include "hops/errors.hpp"
#include "hops/models.hpp"
#include "hops/negtime.hpp"

using namespace hops;
using hops::testing::geomspace;
using hops::testing::loglog_slope;

namespace {

constexpr double kPi = std::numbers::pi;

Operator h1() { return pauli(1, "X0", 0.3) + pauli(1, "Y0", -0.5) + pauli(1, "Z0", 0.8); }

PulseSpec pulse1(const char* word, double tp) { return rectangular_pulse(pauli(1, word), kPi / 2, tp, word); }

DecouplingGroup pauli1(double tp) {
  auto X = pulse1("X0", tp), Y = pulse1("Y0", tp);
  return DecouplingGroup({X, Y}, pauli_error_space(1, {ideal_action(X), ideal_action(Y)}), "pauli1");
}

std::vector<PulseSpec> eulerian_cycle1(double tp) {
  auto G = pauli1(tp);
  auto g = cayley_graph(G);
  std::vector<PulseSpec> out;
  for (auto e : eulerian_cycle(g)) out.push_back(G.generators()[g.edges[e].label]);
  return out;
}

std::vector<PulseSpec> xy4(double tp) {
  auto X = pulse1("X0", tp), Y = pulse1("Y0", tp);
  return {X, Y, X, Y};
}

double identity_error(const PulseSchedule& s, const Operator& H0) {
  return operator_norm(simulate(s, H0) - identity(static_cast<int>(H0.rows())));
}

}  // namespace

TEST_CASE("mode names") {
  CHECK(parse_neg_mode("oracle") == NegMode::Oracle);
  CHECK(parse_neg_mode("cdd-dcg") == NegMode::CddDcg);
  CHECK(parse_neg_mode("sym-eulerian") == NegMode::SymEulerian);
  CHECK(to_string(NegMode::SymEulerian) == "sym-eulerian");
  CHECK_THROWS_AS(parse_neg_mode("magic"), ConfigError);
  CHECK(describe({NegMode::CddDcg, 2, 1}) == "cdd-dcg k=2 q=1");
}

TEST_CASE("1-design check") {
  CHECK(design_residual(xy4(1e-3)) < 1e-12);
  auto X = pulse1("X0", 1e-3);
  CHECK(design_residual({X, X}) > 0.1);
  CHECK_THROWS_AS(dd_identity_block({{X, X}}, 0.01, {NegMode::CddDcg, 1, 0}, h1(), nullptr, true),
                  PreconditionError);
}

TEST_CASE("zero delay with ideal pulses is the identity") {
  for (int k : {1, 2}) {
    auto b = dd_identity_block({eulerian_cycle1(1e-3)}, 0.0, {NegMode::SymEulerian, k, 0}, h1(), nullptr, true);
    CHECK(identity_error(b, h1()) < 1e-10);
  }
}

TEST_CASE("block layout") {
  auto c = xy4(1e-3);
  auto b = dd_identity_block({c}, 0.02, {NegMode::SymEulerian, 1, 0}, h1(), nullptr, true);
  REQUIRE(b.segments.size() == 16);
  CHECK(b.segments[0].is_pulse());
  CHECK(std::get<PulseSegment>(b.segments[0].body).pulse.reversed);
  CHECK(b.segments[1].is_free());
  CHECK(b.segments[7].is_free());
  CHECK(b.segments[8].is_free());
  CHECK(!std::get<PulseSegment>(b.segments[15].body).pulse.reversed);
  auto st = schedule_stats(b);
  CHECK(st.pulses == 8);
  CHECK(st.free_segments == 8);

  auto b2 = dd_identity_block({c}, 0.02, {NegMode::SymEulerian, 2, 0}, h1(), nullptr, true);
  CHECK(schedule_stats(b2).pulses == 8 + 8 * 8);
  CHECK(schedule_stats(b2).free_segments == 64);
}

TEST_CASE("ideal symmetrized blocks scale as tau^(3^k)") {
  const auto c = eulerian_cycle1(1e-3);
  const Operator H0 = h1();
  auto fit = [&](int k, double lo, double hi) {
    std::vector<double> taus = geomspace(lo, hi, 5), err;
    for (double tau : taus)
      err.push_back(identity_error(dd_identity_block({c}, tau, {NegMode::SymEulerian, k, 0}, H0, nullptr, true), H0));
    return loglog_slope(taus, err);
  };
  CHECK(fit(1, 0.01, 0.1) == doctest::Approx(3.0).epsilon(0.3 / 3));
  CHECK(fit(2, 0.04, 0.16) == doctest::Approx(9.0).epsilon(1.0 / 9));
}

TEST_CASE("negative-time block matches the identity block error") {
  const Operator H0 = h1();
  const double tau = 0.05;
  for (int k : {1, 2}) {
    auto block = dd_identity_block({eulerian_cycle1(1e-3)}, tau, {NegMode::SymEulerian, k, 0}, H0);
    auto neg = negative_time(block);
    const double e_block = identity_error(block, H0);
    const double e_neg = operator_norm(simulate(neg, H0) - hermitian_expm(H0, -tau));
    CHECK(std::abs(e_block - e_neg) < 1e-12);
    auto sb = schedule_stats(block), sn = schedule_stats(neg);
    CHECK(sn.pulses == sb.pulses);
    CHECK(sn.free_segments + 1 == sb.free_segments);
    CHECK(sn.negative_free == 0);
  }
  PulseSchedule bare;
  bare.add_pulse(pulse1("X0", 1e-3));
  CHECK_THROWS_AS(negative_time(bare), PreconditionError);
}

TEST_CASE("oracle mode") {
  const Operator H0 = h1();
  auto nb = synthesize_negative_time(0.3, {}, {}, H0);
  REQUIRE(nb.schedule->segments.size() == 1);
  CHECK(std::get<FreeSegment>(nb.schedule->segments[0].body).duration == -0.3);
  CHECK(nb.pulse_count == 0);
  CHECK(operator_norm(simulate(*nb.schedule, H0) - hermitian_expm(H0, -0.3)) < 1e-14);
}

TEST_CASE("Magnus guard") {
  // Lambda ~ 0.99 and the level-1 block spans 16 (tau + tp).
  CHECK_THROWS_AS(dd_identity_block({eulerian_cycle1(1e-3)}, 0.25, {NegMode::SymEulerian, 1, 0}, h1()),
                  GuardError);
  CHECK_NOTHROW(dd_identity_block({eulerian_cycle1(1e-3)}, 0.15, {NegMode::SymEulerian, 1, 0}, h1()));
}

TEST_CASE("symmetrized Eulerian needs a robust base cycle") {
  CHECK_THROWS_AS(dd_identity_block({xy4(1e-3)}, 0.01, {NegMode::SymEulerian, 1, 0}, h1()), PreconditionError);
  CHECK_NOTHROW(dd_identity_block({xy4(1e-3)}, 0.01, {NegMode::SymEulerian, 1, 0}, h1(), nullptr, true));
}

TEST_CASE("symmetrized Eulerian floor does not depend on the level") {
  const Operator H0 = h1();
  const auto c = eulerian_cycle1(1e-3);
  const double f1 = identity_error(dd_identity_block({c}, 1e-7, {NegMode::SymEulerian, 1, 0}, H0), H0);
  const double f2 = identity_error(dd_identity_block({c}, 1e-7, {NegMode::SymEulerian, 2, 0}, H0), H0);
  MESSAGE("floors " << f1 << " " << f2);
  CHECK(f1 > 1e-12);
  CHECK(f2 / f1 < 3.0);
  CHECK(f1 / f2 < 3.0);
}

TEST_CASE("CDD with DCG pulses: floor falls with the DCG order") {
  const Operator H0 = h1();
  const double tp = 1e-3;
  DcgLibrary lib(H0, [tp](const PulseSpec&, int, const std::string&) { return pauli1(tp); });
  std::vector<double> floors;
  for (int q : {0, 1, 2}) {
    auto b = dd_identity_block({xy4(tp)}, 0.0, {NegMode::CddDcg, 1, q}, H0, &lib);
    floors.push_back(identity_error(b, H0));
  }
  MESSAGE("floors " << floors[0] << " " << floors[1] << " " << floors[2]);
  CHECK(floors[1] < 0.1 * floors[0]);
  CHECK(floors[2] < 0.1 * floors[1]);
  CHECK_THROWS_AS(dd_identity_block({xy4(tp)}, 0.0, {NegMode::CddDcg, 1, 1}, H0), ConfigError);
}

TEST_CASE("level-1 symmetrized cycle is time-symmetric") {
  const Operator H0 = h1();
  const auto block = flatten(dd_identity_block({eulerian_cycle1(0.02)}, 0.03, {NegMode::SymEulerian, 1, 0}, H0));
  struct Piece {
    double duration;
    Operator H;
  };
  std::vector<Piece> pieces;
  double total = 0.0;
  for (const auto& seg : block.segments) {
    if (seg.is_free()) {
      pieces.push_back({std::get<FreeSegment>(seg.body).duration, Operator::Zero(2, 2)});
    } else {
      const auto& p = std::get<PulseSegment>(seg.body).pulse;
      for (const auto& piece : control_pieces(p)) pieces.push_back({piece.duration, piece.amplitude * *p.generator});
    }
    total += pieces.back().duration;
  }
  // Control-only propagator at time t.
  auto control_at = [&](double t) {
    Operator U = identity(2);
    for (const auto& pc : pieces) {
      const double dt = std::min(pc.duration, t);
      if (dt <= 0) break;
      U = hermitian_expm(pc.H, dt) * U;
      t -= dt;
    }
    return U;
  };
  double worst = 0.0;
  for (int i = 0; i <= 200; ++i) {
    const double t = total * i / 200.0;
    const Operator a = control_at(t), b = control_at(total - t);
    worst = std::max(worst, max_abs(a.adjoint() * H0 * a - b.adjoint() * H0 * b));
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("CR fourth-order negative-time segment") {
  const double T = 0.1, tp = 1e-4;
  auto b = builtin_sequence(default_model_def(SequenceKind::VB, 1), SequenceKind::VB, T, tp);
  const double u2 = 1.0 / (4.0 - std::cbrt(4.0));
  const double tau = (4.0 * u2 - 1.0) * T / 2.0;
  const Operator& H0 = b.sequence.H0;
  auto nb = synthesize_negative_time(tau, {NegMode::SymEulerian, 2, 0}, b.negtime_cycles(), H0);
  CHECK(nb.pulse_count == 2 * 2048 + 2 * 2048 * 16);
  CHECK(schedule_stats(*nb.schedule).negative_free == 0);
  const double err = operator_norm(simulate(*nb.schedule, H0) - hermitian_expm(H0, -tau));
  MESSAGE("CR negative-time error " << err);
  CHECK(err < 1e-5);
}

TEST_CASE("refocusing inverts commuting Ising evolution exactly") {
  auto m = default_model_def(SequenceKind::VA, 2);
  auto b = builtin_sequence(m, SequenceKind::VA, 1.0, 1e-3);
  const auto cycles = b.negtime_cycles();
  REQUIRE(cycles.size() == 1);
  CHECK(parse_neg_mode("refocus") == NegMode::Refocus);
  CHECK(describe({NegMode::Refocus, 1, 2}) == "refocus q=2");
  const Operator& H0 = b.sequence.H0;
  auto s = refocus_block(cycles[0], 0.3, {NegMode::Refocus, 1, 0}, H0, nullptr, true);
  CHECK(phase_aligned_distance(simulate(s, H0), hermitian_expm(H0, -0.3)) < 1e-12);
  CHECK(schedule_stats(s).pulses == 4);
  CHECK(schedule_stats(s).duration == doctest::Approx(0.9 + 4e-3));

  CHECK_THROWS_AS(synthesize_negative_time(0.3, {NegMode::Refocus, 1, 1}, cycles, H0, nullptr, false),
                  ConfigError);
  // Bare pulses leave an O(t_p) error, first-order DCGs O(t_p^2).
  for (int q : {0, 1}) {
    std::vector<double> tps = geomspace(2.5e-4, 1e-3, 3), err;
    for (double tp : tps) {
      auto bt = builtin_sequence(m, SequenceKind::VA, 1.0, tp);
      DcgLibrary lib(H0, bt.dcg_recipe);
      auto nb = synthesize_negative_time(0.3, {NegMode::Refocus, 1, q}, bt.negtime_cycles(), H0, &lib, false);
      err.push_back(phase_aligned_distance(simulate(*nb.schedule, H0), hermitian_expm(H0, -0.3)));
    }
    CHECK(std::abs(loglog_slope(tps, err) - (q + 1)) < 0.2);
  }

  const auto& x0 = cycles[0][0];
  CHECK_THROWS_AS(refocus_block({x0, x0}, 0.3, {NegMode::Refocus, 1, 0}, H0, nullptr, true), PreconditionError);
}
