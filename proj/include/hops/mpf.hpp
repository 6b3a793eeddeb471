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
#include <vector>

#include "hops/compiler.hpp"
#include "hops/trotter.hpp"

namespace hops {

// Compiled S_2(alpha T) for 0 < alpha <= 1, built from positive-time segments only.
using BlockBuilder = std::function<PulseSchedule(double alpha)>;

struct MPFJob {
  MPFPlan plan;
  BlockBuilder block;
  Operator rho0;
  Operator observable;
  Operator target;      // H_targ of the exact reference
  double horizon = 0.0;  // T
};

struct MPFResult {
  double estimate = 0.0;
  double exact = 0.0;
  double error = 0.0;
  std::vector<double> branches;  // Tr(O U_j rho0 U_j^dag) per m_j
  std::size_t negative_segments = 0;
};

inline constexpr double kStateTol = 1e-10;

// Branch j runs [S_2(T/m_j)]^{m_j}; the branch expectations are combined
// classically with the weights b_j.
MPFResult mpf_estimate(const MPFJob& job, const Operator& H0);

// beta_j = m_max / m_j, i.e. c = 2 m_max for every branch.
std::vector<double> mpf_stretching_c2(const MPFPlan& plan);

// Construction 1 blocks carry the DCG order in opts; Construction 2 blocks use
// c = 2 m_max. The plan must be the one later passed to mpf_estimate.
BlockBuilder make_block_builder(Construction which, const FirstOrderSequence& seq, const CompileOptions& opts,
                                const MPFPlan& plan);

// The computational basis projector |index><index|.
Operator basis_state(int n, std::size_t index);

}  // namespace hops
