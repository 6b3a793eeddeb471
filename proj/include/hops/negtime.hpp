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

#include <string>
#include <vector>

#include "hops/dcg.hpp"
#include "hops/operator.hpp"
#include "hops/pulse.hpp"
#include "hops/schedule.hpp"

namespace hops {

enum class NegMode { Oracle, CddDcg, SymEulerian, Refocus };

std::string to_string(NegMode m);
NegMode parse_neg_mode(const std::string& s);

struct NegTimeSpec {
  NegMode mode = NegMode::Oracle;
  int level = 1;      // concatenation level k
  int dcg_order = 0;  // q for CddDcg and Refocus; 0 uses the bare pulses
};

std::string describe(const NegTimeSpec& spec);

struct NegativeTimeBlock {
  NegTimeSpec spec;
  double inner_delay = 0.0;
  SchedulePtr schedule;
  std::size_t pulse_count = 0;
};

inline constexpr double kDesignTol = 1e-9;

// Relative 1-design residual of the frames g_j = P_j ... P_1, j = 0..l-1:
// distance of (1/l) sum conj(g) (x) g from the projector onto vec(I).
double design_residual(const std::vector<PulseSpec>& cycle);

// Identity-approximating decoupling block. cycles[k-1] is the base cycle at
// level k; the last cycle is reused for deeper levels. Every free segment has
// duration tau. CddDcg replaces P_j and P_j^dag by order-q DCGs from `dcgs`.
PulseSchedule dd_identity_block(const std::vector<std::vector<PulseSpec>>& cycles, double tau,
                                const NegTimeSpec& spec, const Operator& H0, DcgLibrary* dcgs = nullptr,
                                bool instantaneous = false);

// Drops the first free segment (duration tau) of an identity block and runs
// the remainder cyclically, which implements exp(+i H0 tau) with the same
// error as the block.
PulseSchedule negative_time(const PulseSchedule& block);

// Exact refocusing for models whose toggled copies of H0 commute: the cycle
// P_1..P_m is played as P_1, free(tau), P_2, ..., free(tau), P_m. Requires the
// frames g_1..g_{m-1} to give commuting g^dag H0 g summing to -H0.
PulseSchedule refocus_block(const std::vector<PulseSpec>& cycle, double tau, const NegTimeSpec& spec,
                            const Operator& H0, DcgLibrary* dcgs = nullptr, bool instantaneous = false);

// Free(-tau) under the oracle, refocus_block for Refocus, otherwise negative_time(dd_identity_block(...)).
NegativeTimeBlock synthesize_negative_time(double tau, const NegTimeSpec& spec,
                                           const std::vector<std::vector<PulseSpec>>& cycles,
                                           const Operator& H0, DcgLibrary* dcgs = nullptr,
                                           bool instantaneous = false);

}  // namespace hops
