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
#include <string>
#include <vector>

#include "hops/dcg.hpp"
#include "hops/negtime.hpp"
#include "hops/schedule.hpp"
#include "hops/trotter.hpp"

namespace hops {

enum class Construction { C1, C2 };

std::string to_string(Construction c);
Construction parse_construction(const std::string& s);

struct TrotterTerm {
  enum class Source { Free, Width };
  Operator A;
  std::size_t frame = 0;  // index k of g_k
  Source source = Source::Free;
};

struct TrotterExponents {
  std::vector<TrotterTerm> terms;

  std::vector<Operator> operators() const;
  Operator sum() const;
};

// A_k = g_{k-1}^dag H0 g_{k-1} tau_k / T. Requires the free first-order condition.
TrotterExponents extract_exponents_c1(const FirstOrderSequence& seq);
// Interleaved c g_k^dag Phi_{k+1} g_k / T and g_k^dag H0 g_k tau_{k+1} / T.
// Requires both first-order conditions.
TrotterExponents extract_exponents_c2(const FirstOrderSequence& seq, double c);

struct CompileOptions {
  int order = 2;      // 1 or an even Suzuki order 2p
  int dcg_order = 0;  // Construction 1: q; 0 keeps the bare finite-width pulses
  NegTimeSpec neg;    // how negative free segments are realized
  bool instantaneous = false;
  std::optional<double> c;         // Construction 2 parameter; defaults to c_p
  bool robust_negative = true;     // Construction 2: pulse replacements in alpha < 0 blocks
  DcgLibrary* dcgs = nullptr;      // needed when dcg_order > 0
  std::vector<std::vector<PulseSpec>> negtime_cycles;  // needed by synthesized negative time
};

struct CompiledSchedule {
  Construction construction = Construction::C1;
  PulseSchedule schedule;
  TrotterPlan plan;
  FirstOrderSequence input;
  CompileOptions options;
  std::size_t pulse_count = 0;      // ideal pulse slots before DCG and negative-time expansion
  std::vector<double> stretches;    // Construction 2: beta_j per block
  std::size_t negative_blocks = 0;  // negative free segments realized by negMode
};

CompiledSchedule compile_c1(const FirstOrderSequence& seq, const CompileOptions& opts);
CompiledSchedule compile_c2(const FirstOrderSequence& seq, const CompileOptions& opts);
CompiledSchedule compile(Construction which, const FirstOrderSequence& seq, const CompileOptions& opts);

// A single S_2(alpha T) block, alpha > 0. For Construction 2 the pulse
// factors are stretched by beta = c alpha / 2.
PulseSchedule second_order_block(Construction which, const FirstOrderSequence& seq, double alpha,
                                 const CompileOptions& opts, double c = 2.0);

}  // namespace hops
