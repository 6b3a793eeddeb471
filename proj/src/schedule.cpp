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

#include "hops/schedule.hpp"

#include <cmath>
#include <map>
#include <tuple>
#include <unordered_map>

namespace hops {

PulseSchedule& PulseSchedule::add_free(double duration, std::string label) {
  segments.push_back({FreeSegment{duration}, std::move(label)});
  return *this;
}

PulseSchedule& PulseSchedule::add_pulse(const PulseSpec& p, std::string label) {
  segments.push_back({PulseSegment{p}, std::move(label)});
  return *this;
}

PulseSchedule& PulseSchedule::add_block(SchedulePtr body, std::string label) {
  if (!body) throw PreconditionError("null block");
  segments.push_back({BlockSegment{std::move(body)}, std::move(label)});
  return *this;
}

PulseSchedule& PulseSchedule::append(const PulseSchedule& other) {
  segments.insert(segments.end(), other.segments.begin(), other.segments.end());
  oracle_negative_time = oracle_negative_time || other.oracle_negative_time;
  return *this;
}

SchedulePtr share(PulseSchedule s) { return std::make_shared<const PulseSchedule>(std::move(s)); }

namespace {

void accumulate(ScheduleStats& into, const ScheduleStats& s) {
  into.pulses += s.pulses;
  into.free_segments += s.free_segments;
  into.negative_free += s.negative_free;
  into.duration += s.duration;
  into.pulse_time += s.pulse_time;
  into.max_stretch = std::max(into.max_stretch, s.max_stretch);
}

ScheduleStats stats_rec(const PulseSchedule& s,
                        std::unordered_map<const PulseSchedule*, ScheduleStats>& memo) {
  ScheduleStats out;
  for (const auto& seg : s.segments) {
    if (const auto* f = std::get_if<FreeSegment>(&seg.body)) {
      ++out.free_segments;
      if (f->duration < 0) ++out.negative_free;
      out.duration += f->duration;
    } else if (const auto* p = std::get_if<PulseSegment>(&seg.body)) {
      ++out.pulses;
      out.duration += p->pulse.duration();
      out.pulse_time += p->pulse.duration();
      out.max_stretch = std::max(out.max_stretch, p->pulse.stretch);
    } else {
      const auto* body = std::get<BlockSegment>(seg.body).body.get();
      auto it = memo.find(body);
      if (it == memo.end()) it = memo.emplace(body, stats_rec(*body, memo)).first;
      accumulate(out, it->second);
    }
  }
  return out;
}

void flatten_rec(const PulseSchedule& s, PulseSchedule& out) {
  out.instantaneous = out.instantaneous || s.instantaneous;
  out.oracle_negative_time = out.oracle_negative_time || s.oracle_negative_time;
  for (const auto& seg : s.segments) {
    if (const auto* b = std::get_if<BlockSegment>(&seg.body))
      flatten_rec(*b->body, out);
    else
      out.segments.push_back(seg);
  }
}

SchedulePtr stretch_rec(const SchedulePtr& s, double r,
                        std::unordered_map<const PulseSchedule*, SchedulePtr>& memo);

PulseSchedule stretch_value(const PulseSchedule& s, double r,
                            std::unordered_map<const PulseSchedule*, SchedulePtr>& memo) {
  PulseSchedule out;
  out.instantaneous = s.instantaneous;
  out.oracle_negative_time = s.oracle_negative_time;
  out.segments.reserve(s.segments.size());
  for (const auto& seg : s.segments) {
    if (const auto* f = std::get_if<FreeSegment>(&seg.body))
      out.segments.push_back({FreeSegment{f->duration * r}, seg.label});
    else if (const auto* p = std::get_if<PulseSegment>(&seg.body))
      out.segments.push_back({PulseSegment{stretch_pulse(p->pulse, r)}, seg.label});
    else
      out.segments.push_back({BlockSegment{stretch_rec(std::get<BlockSegment>(seg.body).body, r, memo)},
                              seg.label});
  }
  return out;
}

SchedulePtr stretch_rec(const SchedulePtr& s, double r,
                        std::unordered_map<const PulseSchedule*, SchedulePtr>& memo) {
  auto it = memo.find(s.get());
  if (it != memo.end()) return it->second;
  auto out = share(stretch_value(*s, r, memo));
  memo.emplace(s.get(), out);
  return out;
}

using PulseKey = std::tuple<const Operator*, const void*, double, double, bool, double, bool>;

class Simulator {
 public:
  explicit Simulator(const Operator& H0) : h0_(H0), free_(H0), dim_(H0.rows()) {}

  Operator run(const PulseSchedule& s, bool instantaneous, bool allow_negative) {
    instantaneous = instantaneous || s.instantaneous;
    allow_negative = allow_negative || s.oracle_negative_time;
    Operator U = identity(static_cast<int>(dim_));
    for (const auto& seg : s.segments) {
      if (const auto* f = std::get_if<FreeSegment>(&seg.body)) {
        if (f->duration < 0 && !allow_negative)
          throw PreconditionError("negative free duration in segment '" + seg.label +
                                  "' without oracle negative-time mode");
        if (f->duration != 0.0) U = free(f->duration) * U;
      } else if (const auto* p = std::get_if<PulseSegment>(&seg.body)) {
        U = pulse(p->pulse, instantaneous) * U;
      } else {
        const auto& body = std::get<BlockSegment>(seg.body).body;
        const auto key = std::make_tuple(body.get(), instantaneous, allow_negative);
        auto it = blocks_.find(key);
        if (it == blocks_.end()) it = blocks_.emplace(key, run(*body, instantaneous, allow_negative)).first;
        U = it->second * U;
      }
    }
    return U;
  }

 private:
  const Operator& free(double t) {
    auto it = frees_.find(t);
    if (it == frees_.end()) it = frees_.emplace(t, free_(t)).first;
    return it->second;
  }

  const Operator& pulse(const PulseSpec& p, bool instantaneous) {
    if (!p.generator || p.generator->rows() != dim_)
      throw PreconditionError("pulse '" + p.name + "' does not match the dimension of H0");
    const PulseKey key{p.generator.get(), p.samples.get(), p.area, p.width, p.reversed, p.stretch,
                       instantaneous};
    auto it = pulses_.find(key);
    if (it == pulses_.end())
      it = pulses_.emplace(key, instantaneous ? ideal_action(p) : pulse_propagator(p, h0_)).first;
    return it->second;
  }

  const Operator& h0_;
  HermitianPropagator free_;
  Eigen::Index dim_;
  std::map<double, Operator> frees_;
  std::map<PulseKey, Operator> pulses_;
  std::map<std::tuple<const PulseSchedule*, bool, bool>, Operator> blocks_;
};

}  // namespace

ScheduleStats schedule_stats(const PulseSchedule& s) {
  std::unordered_map<const PulseSchedule*, ScheduleStats> memo;
  return stats_rec(s, memo);
}

PulseSchedule flatten(const PulseSchedule& s) {
  PulseSchedule out;
  flatten_rec(s, out);
  return out;
}

PulseSchedule stretch_schedule(const PulseSchedule& s, double r) {
  if (!(r >= 1.0)) throw PreconditionError("schedule stretch factor must be >= 1");
  std::unordered_map<const PulseSchedule*, SchedulePtr> memo;
  return stretch_value(s, r, memo);
}

Operator simulate(const PulseSchedule& s, const Operator& H0) {
  require_hermitian(H0, "H0");
  Simulator sim(H0);
  return sim.run(s, false, false);
}

Operator schedule_ideal_action(const PulseSchedule& s, Eigen::Index dim) {
  const Operator zero = Operator::Zero(dim, dim);
  Simulator sim(zero);
  return sim.run(s, true, true);
}

double simulation_error(const PulseSchedule& s, const Operator& H0, const Operator& target) {
  require_unitary(target, "target");
  return infidelity(simulate(s, H0), target);
}

Operator Control::ideal() const {
  if (pulses.empty()) throw PreconditionError("control '" + name + "' has no pulses");
  Operator U = ideal_action(pulses.front());
  for (std::size_t i = 1; i < pulses.size(); ++i) U = ideal_action(pulses[i]) * U;
  return U;
}

Control Control::adjoint() const {
  Control out;
  out.name = name + "^dag";
  for (auto it = pulses.rbegin(); it != pulses.rend(); ++it) out.pulses.push_back(reverse_pulse(*it));
  return out;
}

Control Control::stretched(double c) const {
  Control out;
  out.name = name;
  for (const auto& p : pulses) out.pulses.push_back(stretch_pulse(p, c));
  return out;
}

double Control::duration() const {
  double t = 0.0;
  for (const auto& p : pulses) t += p.duration();
  return t;
}

Operator Control::magnus_first(const Operator& H0, int nodes) const {
  Operator total = Operator::Zero(H0.rows(), H0.cols());
  Operator R = identity(static_cast<int>(H0.rows()));
  for (const auto& p : pulses) {
    total += R.adjoint() * hops::magnus_first(p, H0, nodes) * R;
    R = ideal_action(p) * R;
  }
  return hermitian_part(total);
}

Operator Control::propagator(const Operator& H0) const {
  Operator U = identity(static_cast<int>(H0.rows()));
  for (const auto& p : pulses) U = pulse_propagator(p, H0) * U;
  return U;
}

Control single(const PulseSpec& p) { return Control{p.name, {p}}; }

bool FirstOrderSequence::has_negative_delay() const {
  for (double t : delays)
    if (t < 0) return true;
  return false;
}

double FirstOrderSequence::cycle_time() const {
  double t = 0.0;
  for (double d : delays) t += std::abs(d);
  for (const auto& c : controls) t += c.duration();
  return t;
}

void validate(const FirstOrderSequence& seq) {
  if (seq.controls.size() != seq.delays.size())
    throw PreconditionError("sequence needs one delay per control");
  require_hermitian(seq.H0, "H0");
  require_hermitian(seq.target, "target Hamiltonian");
  require_same_dim(seq.H0, seq.target, "sequence target");
  for (const auto& c : seq.controls)
    for (const auto& p : c.pulses)
      if (p.dim() != seq.dim()) throw PreconditionError("control '" + c.name + "' has the wrong dimension");
}

std::vector<Operator> toggling_frames(const FirstOrderSequence& seq) {
  std::vector<Operator> frames{identity(static_cast<int>(seq.dim()))};
  for (const auto& c : seq.controls) frames.push_back(c.ideal() * frames.back());
  return frames;
}

FirstOrderResiduals check_first_order(const FirstOrderSequence& seq, int nodes) {
  validate(seq);
  const auto frames = toggling_frames(seq);
  FirstOrderResiduals r;
  Operator sum = -seq.horizon * seq.target;
  for (std::size_t k = 0; k < seq.length(); ++k)
    sum += frames[k].adjoint() * seq.H0 * frames[k] * seq.delays[k];
  r.free_residual = operator_norm(sum);
  if (seq.finite_width) {
    Operator width = Operator::Zero(seq.dim(), seq.dim());
    for (std::size_t k = 0; k < seq.length(); ++k)
      width += frames[k].adjoint() * seq.controls[k].magnus_first(seq.H0, nodes) * frames[k];
    r.width_residual = operator_norm(width);
    r.width_checked = true;
  }
  return r;
}

void require_first_order(const FirstOrderSequence& seq, bool width, double tol) {
  const auto frames = toggling_frames(seq);
  if (max_abs(frames.back() - identity(static_cast<int>(seq.dim()))) > 1e-10 &&
      std::abs(std::abs(frames.back().trace()) - static_cast<double>(seq.dim())) > 1e-9)
    throw PreconditionError("sequence '" + seq.name + "' is not cyclic");
  FirstOrderSequence probe = seq;
  probe.finite_width = width && seq.finite_width;
  const auto r = check_first_order(probe);
  const double lambda = operator_norm(seq.H0);
  const double scale = tol * std::max(lambda, 1e-300) * std::max(std::abs(seq.horizon), 1e-300);
  if (r.free_residual > scale)
    throw PreconditionError("first-order free residual " + std::to_string(r.free_residual) +
                            " exceeds tolerance for '" + seq.name + "'");
  if (r.width_checked) {
    double width_scale = 0.0;
    for (const auto& c : seq.controls) width_scale += c.duration();
    if (r.width_residual > 1e-8 * lambda * std::max(width_scale, 1e-300))
      throw PreconditionError("pulse-width residual " + std::to_string(r.width_residual) +
                              " exceeds tolerance for '" + seq.name + "'");
  }
}

PulseSchedule cycle_schedule(const FirstOrderSequence& seq, bool instantaneous) {
  validate(seq);
  PulseSchedule s;
  s.instantaneous = instantaneous;
  s.oracle_negative_time = seq.has_negative_delay();
  for (std::size_t k = 0; k < seq.length(); ++k) {
    if (seq.delays[k] != 0.0) s.add_free(seq.delays[k], "free k=" + std::to_string(k + 1));
    for (const auto& p : seq.controls[k].pulses) s.add_pulse(p, "P k=" + std::to_string(k + 1));
  }
  return s;
}

Operator toggled_product(const FirstOrderSequence& seq) {
  const auto frames = toggling_frames(seq);
  Operator U = identity(static_cast<int>(seq.dim()));
  for (std::size_t k = 0; k < seq.length(); ++k)
    U = hermitian_expm(frames[k].adjoint() * seq.H0 * frames[k], seq.delays[k]) * U;
  return frames.back() * U;
}

}  // namespace hops
