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
#include "hops/dcg.hpp"
#include "hops/errors.hpp"
#include "hops/models.hpp"

using namespace hops;
using hops::testing::geomspace;
using hops::testing::loglog_slope;

namespace {

constexpr double kPi = std::numbers::pi;

PulseSpec pi_pulse(int n, const char* word, double tp = 1e-3) {
  return rectangular_pulse(pauli(n, word), kPi / 2, tp, word);
}

DecouplingGroup pauli_group(int n, std::vector<PulseSpec> gens) {
  std::vector<Operator> ideals;
  for (const auto& g : gens) ideals.push_back(ideal_action(g));
  return DecouplingGroup(std::move(gens), pauli_error_space(n, ideals));
}

struct IsingSetup {
  BuiltinSequence b;
  PulseSpec W;
};

IsingSetup ising(double tp) {
  auto b = builtin_sequence(default_model_def(SequenceKind::VA, 1), SequenceKind::VA, 1.0, tp);
  auto W = b.sequence.controls.at(0).pulses.at(0);
  return {std::move(b), W};
}

Operator zero_h(Eigen::Index dim) { return Operator::Zero(dim, dim); }

}  // namespace

TEST_CASE("cayley graph of the one-qubit Pauli group") {
  auto G = pauli_group(1, {pi_pulse(1, "X0"), pi_pulse(1, "Y0")});
  CHECK(G.size() == 4);
  auto g = cayley_graph(G);
  CHECK(g.vertices == 4);
  CHECK(g.edges.size() == 8);
  for (auto d : g.out_degree()) CHECK(d == 2);
  for (auto d : g.in_degree()) CHECK(d == 2);
  auto cycle = eulerian_cycle(g);
  CHECK(cycle.size() == 8);
  CHECK(is_eulerian_walk(g, cycle, 0, true));
  CHECK(G.decoupling_residual() < 1e-12);
}

TEST_CASE("small Cayley graphs") {
  auto two = pauli_group(1, {pi_pulse(1, "X0")});
  auto g = cayley_graph(two);
  CHECK(g.vertices == 2);
  REQUIRE(g.edges.size() == 2);
  CHECK(g.edges[0].from != g.edges[0].to);
  CHECK(is_eulerian_walk(g, eulerian_cycle(g), 0, true));

  auto trivial = DecouplingGroup({rectangular_pulse(pauli(1, "X0"), 0.0, 1e-3, "I")}, {});
  auto t = cayley_graph(trivial);
  CHECK(t.vertices == 1);
  REQUIRE(t.edges.size() == 1);
  CHECK(t.edges[0].from == t.edges[0].to);
}

TEST_CASE("Eulerian traversal rejects bad graphs") {
  Multigraph unbalanced{2, {{0, 1, 0}}};
  CHECK_THROWS_AS(eulerian_cycle(unbalanced), PreconditionError);
  CHECK(eulerian_path(unbalanced, 0, 1).size() == 1);
  CHECK_THROWS_AS(eulerian_path(unbalanced, 1, 0), PreconditionError);
  Multigraph split{4, {{0, 1, 0}, {1, 0, 0}, {2, 3, 0}, {3, 2, 0}}};
  CHECK_THROWS_AS(eulerian_cycle(split), PreconditionError);
}

TEST_CASE("the Y1/Y2 word is an Eulerian cycle") {
  auto G = pauli_group(4, {pi_pulse(4, "Y1"), pi_pulse(4, "Y2")});
  auto g = cayley_graph(G);
  const int word[] = {1, 0, 1, 0, 0, 1, 0, 1};  // Y2 Y1 Y2 Y1 Y1 Y2 Y1 Y2
  std::vector<std::size_t> walk;
  std::size_t at = 0;
  for (int label : word) {
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
      if (g.edges[e].from == at && g.edges[e].label == label) {
        walk.push_back(e);
        at = g.edges[e].to;
        break;
      }
    }
  }
  REQUIRE(walk.size() == 8);
  CHECK(is_eulerian_walk(g, walk, 0, true));
}

TEST_CASE("group construction checks decoupling") {
  CHECK_THROWS_AS(DecouplingGroup({pi_pulse(1, "X0")}, {pauli(1, "X0")}), PreconditionError);
}

TEST_CASE("Eulerian averaging cancels first-order pulse errors") {
  const Operator H0 = pauli(2, "Z0 Z1") + pauli(2, "X0 Z1", 0.3);
  auto G = pauli_group(2, {pi_pulse(2, "X0"), pi_pulse(2, "Y0")});
  auto g = cayley_graph(G);
  std::vector<Operator> phi;
  for (const auto& p : G.generators()) phi.push_back(magnus_first(p, H0));
  Operator frame = identity(4), sum = zero_h(4);
  for (auto e : eulerian_cycle(g)) {
    const auto& p = G.generators()[g.edges[e].label];
    sum += frame.adjoint() * phi[g.edges[e].label] * frame;
    frame = ideal_action(p) * frame;
  }
  CHECK(operator_norm(sum) < 1e-12);
  CHECK(operator_norm(phi[0]) > 1e-4);
}

TEST_CASE("first-order Ising DCG") {
  const double tp = 1e-3;
  auto s = ising(tp);
  auto group = s.b.dcg_recipe(s.W, 1, "");
  CHECK(group.name() == "ising1 X(0,1)");
  CHECK(group.size() == 4);
  auto gate = build_first_order_dcg(s.W, group, s.b.sequence.H0);
  CHECK(gate.schedule->segments.size() == 12);
  auto st = schedule_stats(*gate.schedule);
  CHECK(st.pulses == 15);
  CHECK(std::abs(st.duration - 16 * tp) < 1e-15);
  CHECK(std::abs(gate.duration() - 16 * tp) < 1e-15);
  CHECK(gate.max_stretch == doctest::Approx(2.0));
  CHECK(phase_aligned_distance(simulate(*gate.schedule, zero_h(8)), ideal_action(s.W)) < 1e-11);

  // A pulse whose error commutes with the group is rejected.
  const Operator bad = s.b.sequence.H0 + pauli(3, "X2");
  CHECK_THROWS_AS(build_first_order_dcg(s.W, group, bad), PreconditionError);
}

TEST_CASE("first-order DCG infidelity scales as tp^4") {
  std::vector<double> tps = geomspace(1e-4, 2e-3, 5), dcg, naive;
  for (double tp : tps) {
    auto s = ising(tp);
    const Operator& H0 = s.b.sequence.H0;
    auto gate = build_first_order_dcg(s.W, s.b.dcg_recipe(s.W, 1, ""), H0);
    dcg.push_back(infidelity(ideal_action(s.W), simulate(*gate.schedule, H0)));
    naive.push_back(infidelity(ideal_action(s.W), pulse_propagator(s.W, H0)));
  }
  CHECK(loglog_slope(tps, dcg) == doctest::Approx(4.0).epsilon(0.3 / 4));
  CHECK(loglog_slope(tps, naive) == doctest::Approx(2.0).epsilon(0.1 / 2));
}

TEST_CASE("balance pairs agree to order q+2") {
  std::vector<double> tps = geomspace(1e-5, 1e-4, 4), d0, d1;
  for (double tp : tps) {
    auto s = ising(tp);
    const Operator& H0 = s.b.sequence.H0;
    const Operator W = ideal_action(s.W);
    // q = 0: I_W = W^rev W (W first in time) against W(2 tp).
    PulseSchedule iw;
    iw.add_pulse(s.W).add_pulse(reverse_pulse(s.W));
    const Operator phi_i = residual_action(identity(8), simulate(iw, H0));
    const Operator phi_w = residual_action(W, pulse_propagator(stretch_pulse(s.W, 2.0), H0));
    d0.push_back(operator_norm(phi_i - phi_w));

    // q = 1 from first-order DCG blocks.
    DcgLibrary lib(H0, s.b.dcg_recipe);
    const auto& w1 = lib.get(s.W, 1);
    const auto& wd1 = lib.get(reverse_pulse(s.W), 1);
    PulseSchedule loop;
    loop.append(stretch_schedule(*w1.schedule, balance_stretch(1))).append(*wd1.schedule);
    PulseSchedule star;
    star.append(*w1.schedule).append(*wd1.schedule).append(*w1.schedule);
    d1.push_back(operator_norm(residual_action(identity(8), simulate(loop, H0)) -
                               residual_action(W, simulate(star, H0))));
  }
  CHECK(loglog_slope(tps, d0) == doctest::Approx(2.0).epsilon(0.2 / 2));
  CHECK(loglog_slope(tps, d1) == doctest::Approx(3.0).epsilon(0.3 / 3));
}

TEST_CASE("second-order Ising DCG") {
  const double tp = 1e-4;
  auto s = ising(tp);
  DcgLibrary lib(s.b.sequence.H0, s.b.dcg_recipe);
  const auto& gate = lib.get(s.W, 2);
  REQUIRE(gate.groups.size() == 2);
  CHECK(gate.groups[0] == "ising1 X(0,1)");
  CHECK(gate.groups[1] == "pauli2(0,1)");
  REQUIRE(gate.durations.size() == 2);
  CHECK(gate.durations[0] == doctest::Approx(16 * tp));
  const double growth = 16 * 4 + 15 * (1 + std::sqrt(2.0)) + 3;
  CHECK(dcg_growth_factor(16, 4, 1) == doctest::Approx(growth));
  CHECK(gate.durations[1] / gate.durations[0] == doctest::Approx(growth));
  CHECK(gate.max_stretch <= std::pow(2.0, 1.5) + 1e-12);
  CHECK(gate.max_stretch == doctest::Approx(std::pow(2.0, 1.5)));
  CHECK(phase_aligned_distance(simulate(*gate.schedule, zero_h(8)), ideal_action(s.W)) < 1e-10);
  CHECK(lib.get(s.W, 2).schedule == gate.schedule);
}

TEST_CASE("second-order DCG infidelity scales as tp^6") {
  std::vector<double> tps = geomspace(1e-4, 1e-3, 4), err;
  for (double tp : tps) {
    auto s = ising(tp);
    DcgLibrary lib(s.b.sequence.H0, s.b.dcg_recipe);
    err.push_back(infidelity(ideal_action(s.W), simulate(*lib.get(s.W, 2).schedule, s.b.sequence.H0)));
  }
  CHECK(loglog_slope(tps, err) == doctest::Approx(6.0).epsilon(0.4 / 6));
}
