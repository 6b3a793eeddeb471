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
#include <vector>

#include "hops/operator.hpp"

namespace hops {

// One piecewise-constant step of a sampled envelope: amplitude held from
// `time` until the next sample (or the end of the window).
struct Sample {
  double time = 0.0;
  double amplitude = 0.0;
};

// A shaped control f(t) H_P acting for t in [0, stretch * width].
//
// The envelope is stored in its base form; `stretch` and `reversed` are
// applied lazily so that stretch/reverse compose exactly.
struct PulseSpec {
  std::shared_ptr<const Operator> generator;
  std::string name;
  // Empty samples means a rectangular envelope of height area / width.
  std::shared_ptr<const std::vector<Sample>> samples;
  double area = 0.0;
  double width = 0.0;
  bool reversed = false;
  double stretch = 1.0;

  bool rectangular() const { return samples == nullptr; }
  double duration() const { return stretch * width; }
  Eigen::Index dim() const { return generator ? generator->rows() : 0; }
};

PulseSpec rectangular_pulse(const Operator& generator, double area, double width,
                            std::string name = {});
PulseSpec rectangular_pulse(std::shared_ptr<const Operator> generator, double area, double width,
                            std::string name = {});
PulseSpec sampled_pulse(const Operator& generator, std::vector<Sample> samples, double width,
                        std::string name = {});

// Same area, duration c * width, amplitude divided by c.
PulseSpec stretch_pulse(const PulseSpec& p, double c);
// Envelope t -> -f(width - t); implements the adjoint ideal action.
PulseSpec reverse_pulse(const PulseSpec& p);
// Same envelope with a different base width (area kept).
PulseSpec with_width(const PulseSpec& p, double width);

struct ControlPiece {
  double duration = 0.0;
  double amplitude = 0.0;
};

// The effective envelope after stretch and reversal, in time order.
std::vector<ControlPiece> control_pieces(const PulseSpec& p);

// Integral of the effective envelope.
double envelope_integral(const PulseSpec& p);

// exp(-i theta H_P), or its adjoint for reversed pulses.
Operator ideal_action(const PulseSpec& p);

// Time-ordered exponential of H0 + f(t) H_P over the pulse window.
Operator pulse_propagator(const PulseSpec& p, const Operator& H0);

// First Magnus term of the pulse error action in the control frame, by
// composite Simpson quadrature on every constant piece.
Operator magnus_first(const PulseSpec& p, const Operator& H0, int nodes = 1001);

// Full error action Phi with propagator = ideal_action * exp(-i Phi).
Operator error_action(const PulseSpec& p, const Operator& H0);

bool same_pulse(const PulseSpec& a, const PulseSpec& b);

}  // namespace hops
