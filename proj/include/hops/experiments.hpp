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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hops/compiler.hpp"
#include "hops/models.hpp"
#include "hops/mpf.hpp"

namespace hops {

// Errors below this are treated as floating-point noise by the slope fits.
inline constexpr double kNoiseFloor = 1e-14;

enum class SweepAxis { Horizon, Width };  // x = T or x = t_p

std::string to_string(SweepAxis a);

struct MethodSpec {
  std::string label;
  Construction construction = Construction::C1;
  int order = 2;
  int dcg_order = 0;
  NegTimeSpec neg;
  bool instantaneous = false;
  bool robust_negative = true;
  std::vector<int> mpf_m;  // non-empty: hybrid MPF over S_2 blocks instead of a full compile
  std::vector<double> grid;
  std::optional<std::pair<double, double>> window;  // fixed fit window; detected when absent
};

struct SweepConfig {
  std::string name;
  SequenceKind sequence = SequenceKind::VB;
  ModelDef model;
  SweepAxis axis = SweepAxis::Horizon;
  double T = 1.0;   // fixed when sweeping t_p
  double tp = 1e-4;  // fixed when sweeping T
  std::vector<MethodSpec> methods;
  std::size_t mpf_state = 5;          // rho0 = |index><index|
  std::string mpf_observable = "X0 X1";
  int threads = 1;
};

struct SweepRow {
  double x = 0.0;
  std::string method;
  double error = 0.0;
  std::string meta;
};

struct SlopeFit {
  std::string method;
  double lo = 0.0, hi = 0.0;
  double slope = 0.0, intercept = 0.0, r2 = 0.0;
  std::size_t points = 0;
  bool detected = false;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // sorted by (method, x)
  std::vector<SlopeFit> fits;
  double seconds = 0.0;
};

struct PointResult {
  double error = 0.0;
  std::string meta;
};

// Build, compile and simulate one (method, x) point. Infidelity for full
// compiles, |estimate - exact| for MPF methods.
PointResult evaluate_point(const SweepConfig& cfg, const MethodSpec& m, double x);

// Parallel over points; rows are merged in (method, x) order and fits are
// attached for every method with a usable window.
SweepResult run_sweep(const SweepConfig& cfg);

// Least-squares line in (log x, log error) over lo <= x <= hi.
SlopeFit fit_slope(const SweepResult& r, const std::string& method, double lo, double hi);

// Plateau-free window: among points above the noise floor, the longest run of
// consecutive local slopes that stay within a band of 10% (at least 0.25) of
// their mean. Needs four points; larger x wins ties.
std::optional<std::pair<double, double>> detect_window(const std::vector<double>& x, const std::vector<double>& y);

std::vector<std::string> figure_names();
SweepConfig figure_preset(const std::string& name, std::uint64_t seed = 0);  // 0 keeps the preset seed

void write_csv(const SweepResult& r, const std::string& path);
std::string sidecar_json(const SweepConfig& cfg, const SweepResult& r);

}  // namespace hops
