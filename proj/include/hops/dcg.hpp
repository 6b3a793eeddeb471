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

#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "hops/operator.hpp"
#include "hops/pulse.hpp"
#include "hops/schedule.hpp"

namespace hops {

// A finite group of unitaries (up to phase) generated by the ideal actions of
// `generators`, together with the Hermitian error space it decouples.
class DecouplingGroup {
 public:
  DecouplingGroup() = default;
  // Builds the closure of the generators and checks the decoupling condition
  // on every error-space element.
  DecouplingGroup(std::vector<PulseSpec> generators, std::vector<Operator> error_space,
                  std::string name = {});

  const std::vector<Operator>& elements() const { return elements_; }
  const std::vector<PulseSpec>& generators() const { return generators_; }
  const std::vector<Operator>& error_space() const { return error_space_; }
  const std::string& name() const { return name_; }
  std::size_t size() const { return elements_.size(); }
  Eigen::Index dim() const { return elements_.empty() ? 0 : elements_.front().rows(); }

  // Index of U in elements() up to phase, or -1.
  int find(const Operator& U) const;
  std::size_t generator_element(std::size_t i) const { return generator_elements_.at(i); }

  // ||A - P(A)||_F / ||A||_F for P the projection onto span(error_space).
  double membership_residual(const Operator& A) const;
  // max over basis elements of ||sum_g g^dag E g|| / (|G| ||E||).
  double decoupling_residual() const;

 private:
  std::vector<Operator> elements_;
  std::vector<PulseSpec> generators_;
  std::vector<std::size_t> generator_elements_;
  std::vector<Operator> error_space_;
  Eigen::MatrixXcd basis_q_;  // orthonormal columns spanning vec(error_space)
  std::string name_;
};

inline constexpr std::size_t kMaxGroupSize = 4096;
inline constexpr double kMembershipTol = 1e-8;
inline constexpr double kMembershipFloor = 1e-11;  // Frobenius norm of the leak

// All Pauli strings on n qubits that anticommute with at least one of the
// given (Pauli, up to phase) unitaries.
std::vector<Operator> pauli_error_space(int n, const std::vector<Operator>& unitaries);

struct Edge {
  std::size_t from = 0;
  std::size_t to = 0;
  int label = 0;
};

struct Multigraph {
  std::size_t vertices = 0;
  std::vector<Edge> edges;

  std::vector<std::size_t> out_degree() const;
  std::vector<std::size_t> in_degree() const;
};

// Vertices are group elements (vertex 0 the identity). Each generator h adds
// an edge g -> h g, so a walk in edge order tracks the accumulated control.
Multigraph cayley_graph(const DecouplingGroup& group);

// Hierholzer traversal; edges leave each vertex in insertion order. Returns
// edge indices of a closed walk from `start` using every edge once.
std::vector<std::size_t> eulerian_cycle(const Multigraph& g, std::size_t start = 0);
// Open trail from `start` to `end` using every edge once.
std::vector<std::size_t> eulerian_path(const Multigraph& g, std::size_t start, std::size_t end);

bool is_eulerian_walk(const Multigraph& g, const std::vector<std::size_t>& walk, std::size_t start,
                      bool closed);

// Phase-aligned, traceless error action Phi with actual = ideal exp(-i Phi).
Operator residual_action(const Operator& ideal, const Operator& actual);

// A dynamically corrected implementation of a target pulse W.
struct DcgGate {
  PulseSpec target;
  int order = 1;
  SchedulePtr schedule;
  Operator ideal;
  std::vector<std::string> groups;  // group name per level
  std::vector<double> durations;    // tau_1 ... tau_q
  std::vector<double> overhead;     // tau_q / tau_{q-1}, tau_0 = t_p
  double max_stretch = 1.0;

  double duration() const { return durations.empty() ? 0.0 : durations.back(); }
};

// Growth factor tau_{q+1}/tau_q for a level built on group size d with m generators.
double dcg_growth_factor(std::size_t d, std::size_t m, int q);
inline double balance_stretch(int q) { return std::pow(2.0, 1.0 / (q + 1)); }

// Augmented Eulerian path with balance pairs I_W = W^rev W at every
// non-identity vertex and the exit W(2 t_p). Membership of the first-order
// errors is verified against H0 unless H0 is empty.
DcgGate build_first_order_dcg(const PulseSpec& W, const DecouplingGroup& group, const Operator& H0);

// Promote order q to q+1. gens[i] implements group.generators()[i] at order q.
DcgGate concatenate_dcg(const DcgGate& W, const DcgGate& Wdag, const DecouplingGroup& group,
                        const std::vector<DcgGate>& gens, const Operator& H0);

// Chooses the decoupling group for target W at `level`; `context` names the
// group one level up (empty at the top).
using GroupRecipe =
    std::function<DecouplingGroup(const PulseSpec& W, int level, const std::string& context)>;

// Memoizing builder for DCGs of any order.
class DcgLibrary {
 public:
  DcgLibrary(Operator H0, GroupRecipe recipe, bool check = true);

  const DcgGate& get(const PulseSpec& W, int order, const std::string& context = {});

 private:
  using Key = std::tuple<const Operator*, const void*, double, double, bool, double, int, std::string>;
  Operator h0_;
  GroupRecipe recipe_;
  bool check_;
  std::map<Key, std::shared_ptr<DcgGate>> gates_;
};

}  // namespace hops
