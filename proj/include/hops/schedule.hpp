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

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "hops/operator.hpp"
#include "hops/pulse.hpp"

namespace hops {

class PulseSchedule;
using SchedulePtr = std::shared_ptr<const PulseSchedule>;

struct FreeSegment {
  double duration = 0.0;
};

struct PulseSegment {
  PulseSpec pulse;
};

// A shared sub-schedule. Blocks let DCGs and decoupling cycles be reused
// without copying; simulate() evaluates each distinct block once.
struct BlockSegment {
  SchedulePtr body;
};

struct Segment {
  std::variant<FreeSegment, PulseSegment, BlockSegment> body;
  std::string label;

  bool is_free() const { return std::holds_alternative<FreeSegment>(body); }
  bool is_pulse() const { return std::holds_alternative<PulseSegment>(body); }
  bool is_block() const { return std::holds_alternative<BlockSegment>(body); }
};

// Segments in time order. Flags propagate into nested blocks.
class PulseSchedule {
 public:
  std::vector<Segment> segments;
  // Replace every pulse by its ideal action, taking zero time.
  bool instantaneous = false;
  // Permit Free segments with negative duration (oracle mode).
  bool oracle_negative_time = false;

  PulseSchedule& add_free(double duration, std::string label = {});
  PulseSchedule& add_pulse(const PulseSpec& p, std::string label = {});
  PulseSchedule& add_block(SchedulePtr body, std::string label = {});
  PulseSchedule& append(const PulseSchedule& other);

  bool empty() const { return segments.empty(); }
};

SchedulePtr share(PulseSchedule s);

struct ScheduleStats {
  std::size_t pulses = 0;
  std::size_t free_segments = 0;
  std::size_t negative_free = 0;
  double duration = 0.0;       // signed sum of all segment durations
  double pulse_time = 0.0;
  double max_stretch = 1.0;
};

ScheduleStats schedule_stats(const PulseSchedule& s);

// Expand all blocks into a single flat segment list.
PulseSchedule flatten(const PulseSchedule& s);

// Stretch every pulse and free segment by r >= 1 (sharing is preserved).
PulseSchedule stretch_schedule(const PulseSchedule& s, double r);

// Product of exact segment propagators, earliest segment rightmost.
Operator simulate(const PulseSchedule& s, const Operator& H0);

// simulate() with H0 = 0 and pulses at their ideal actions.
Operator schedule_ideal_action(const PulseSchedule& s, Eigen::Index dim);

double simulation_error(const PulseSchedule& s, const Operator& H0, const Operator& target);

// An ideal control operation P_k realized by elementary pulses applied in order.
struct Control {
  std::string name;
  std::vector<PulseSpec> pulses;

  Operator ideal() const;
  // Adjoint: elements reversed in time and individually reversed.
  Control adjoint() const;
  Control stretched(double c) const;
  double duration() const;
  // First Magnus term of the composite error action.
  Operator magnus_first(const Operator& H0, int nodes = 1001) const;
  Operator propagator(const Operator& H0) const;
};

Control single(const PulseSpec& p);

struct FirstOrderSequence {
  std::string name;
  std::vector<Control> controls;
  // delays[k] precedes controls[k].
  std::vector<double> delays;
  Operator target;
  double horizon = 0.0;
  Operator H0;
  // Pulses carry their finite widths; check the width condition too.
  bool finite_width = true;

  std::size_t length() const { return controls.size(); }
  Eigen::Index dim() const { return H0.rows(); }
  bool has_negative_delay() const;
  double cycle_time() const;  // sum of |delays| plus pulse time
};

void validate(const FirstOrderSequence& seq);

// g_0 = I, g_k = P_k ... P_1.
std::vector<Operator> toggling_frames(const FirstOrderSequence& seq);

struct FirstOrderResiduals {
  double free_residual = 0.0;
  double width_residual = 0.0;
  bool width_checked = false;
};

FirstOrderResiduals check_first_order(const FirstOrderSequence& seq, int nodes = 1001);

// Throws PreconditionError when a residual exceeds tol * Lambda * T.
void require_first_order(const FirstOrderSequence& seq, bool width, double tol = 1e-8);

// The raw cycle: free tau_1, P_1, free tau_2, P_2, ...
PulseSchedule cycle_schedule(const FirstOrderSequence& seq, bool instantaneous);

// prod_k exp(-i g_k^dag H0 g_k tau_{k+1}) in the toggling frame.
Operator toggled_product(const FirstOrderSequence& seq);

}  // namespace hops
