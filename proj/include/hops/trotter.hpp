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

#include <optional>
#include <vector>

#include "hops/operator.hpp"

namespace hops {

inline constexpr int kMaxSuzukiP = 5;

// One factor S_2(alpha t) of the expanded recursion.
struct TrotterBlock {
  double alpha = 1.0;
  // chain[i] is the position (0..4) taken at recursion level p - i; the
  // middle position 2 carries 1 - 4u, the others u.
  std::vector<int> chain;
};

struct TrotterPlan {
  int p = 1;
  std::vector<TrotterBlock> blocks;
  std::vector<double> u;  // u_2 ... u_p
  double c = 2.0;         // c_p
  double max_stretch = 1.0;
  std::optional<double> alpha_comm;

  int order() const { return 2 * p; }
  std::vector<double> alphas() const;
};

double suzuki_u(int p);
double suzuki_c(int p);
TrotterPlan suzuki_plan(int p);

// S_1, S_2 or the Suzuki S_{2p} built from exact exponentials of the terms.
// order 1 is the plain first-order product exp(-iA_l t)...exp(-iA_1 t).
Operator trotter_matrix(const std::vector<Operator>& terms, double t, int order);

// Sum over index tuples of ||[A_k(2p+1), [..., [A_k2, A_k1]]]||.
double alpha_comm(const std::vector<Operator>& terms, int p);

struct MPFPlan {
  std::vector<int> m;
  std::vector<double> b;
  double gamma = 0.0;  // sum of term norms; 0 when no terms were given

  int p() const { return static_cast<int>(m.size()); }
  // max over r of |sum_j b_j m_j^{-2r} - delta_{r0}|.
  double condition_residual() const;
};

MPFPlan mpf_coefficients(const std::vector<int>& m, const std::vector<Operator>& terms = {});

}  // namespace hops
