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

#include "hops/negtime.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hops/errors.hpp"

namespace hops {

std::string to_string(NegMode m) {
  switch (m) {
    case NegMode::Oracle: return "oracle";
    case NegMode::CddDcg: return "cdd-dcg";
    case NegMode::SymEulerian: return "sym-eulerian";
    case NegMode::Refocus: return "refocus";
  }
  return "?";
}

NegMode parse_neg_mode(const std::string& s) {
  if (s == "oracle") return NegMode::Oracle;
  if (s == "cdd-dcg" || s == "cddDcg" || s == "cdd") return NegMode::CddDcg;
  if (s == "sym-eulerian" || s == "symEulerian" || s == "sym") return NegMode::SymEulerian;
  if (s == "refocus") return NegMode::Refocus;
  throw ConfigError("unknown negative-time mode: " + s);
}

std::string describe(const NegTimeSpec& spec) {
  std::string s = to_string(spec.mode);
  if (spec.mode == NegMode::CddDcg || spec.mode == NegMode::SymEulerian) s += " k=" + std::to_string(spec.level);
  if (spec.mode == NegMode::CddDcg || spec.mode == NegMode::Refocus) s += " q=" + std::to_string(spec.dcg_order);
  return s;
}

namespace {

// g_0 = I, g_j = P_j ... P_1 for j < l, plus the closing product g_l.
std::vector<Operator> cycle_frames(const std::vector<PulseSpec>& cycle) {
  std::vector<Operator> frames{identity(static_cast<int>(cycle.front().dim()))};
  for (const auto& p : cycle) frames.push_back(ideal_action(p) * frames.back());
  return frames;
}

Operator frame_average(const std::vector<Operator>& frames, std::size_t l,
                       const std::vector<Operator>& terms) {
  Operator sum = Operator::Zero(frames.front().rows(), frames.front().cols());
  for (std::size_t j = 0; j < l; ++j) sum += frames[j].adjoint() * terms[j] * frames[j];
  return sum;
}

Operator traceless(const Operator& A) {
  return A - (A.trace() / static_cast<double>(A.rows())) * identity(static_cast<int>(A.rows()));
}

void require_closed(const std::vector<Operator>& frames, std::size_t level) {
  if (phase_aligned_distance(frames.back(), identity(static_cast<int>(frames.back().rows()))) > 1e-9)
    throw PreconditionError("level-" + std::to_string(level) + " decoupling cycle does not close to the identity");
}

// Level-1 Eulerian check: the frames cancel H0 and the first-order pulse errors.
void require_edd_cycle(const std::vector<PulseSpec>& cycle, const Operator& H0, bool finite_width) {
  const auto frames = cycle_frames(cycle);
  require_closed(frames, 1);
  const std::size_t l = cycle.size();
  const double lambda = operator_norm(H0);
  std::vector<Operator> free_terms(l, traceless(H0));
  const double free_res = operator_norm(frame_average(frames, l, free_terms));
  if (free_res > kDesignTol * static_cast<double>(l) * lambda)
    throw PreconditionError("base cycle does not decouple H0 (residual " + std::to_string(free_res) + ")");
  if (!finite_width) return;
  std::vector<Operator> phi;
  double scale = 0.0;
  for (const auto& p : cycle) {
    phi.push_back(magnus_first(p, H0));
    scale = std::max(scale, operator_norm(phi.back()));
  }
  const double width_res = operator_norm(frame_average(frames, l, phi));
  if (width_res > kDesignTol * static_cast<double>(l) * scale)
    throw PreconditionError("base cycle is not Eulerian-robust (pulse-width residual " +
                            std::to_string(width_res) + ")");
}

// Level k >= 2: the cycle must average the measured error action of the
// level-(k-1) block.
void require_averages(const std::vector<PulseSpec>& cycle, const PulseSchedule& lower, const Operator& H0,
                      int level) {
  const auto frames = cycle_frames(cycle);
  require_closed(frames, static_cast<std::size_t>(level));
  const Operator E = residual_action(identity(static_cast<int>(H0.rows())), simulate(lower, H0));
  const std::size_t l = cycle.size();
  const double res = operator_norm(frame_average(frames, l, std::vector<Operator>(l, E)));
  const double allowed = static_cast<double>(l) * (kDesignTol * operator_norm(E) + 1e-11);
  if (res > allowed)
    throw PreconditionError("level-" + std::to_string(level) +
                            " cycle does not average the lower-level error (residual " + std::to_string(res) +
                            ")");
}

bool split_first_free(const PulseSchedule& s, PulseSchedule& prefix, PulseSchedule& suffix, double& removed) {
  prefix.instantaneous = suffix.instantaneous = s.instantaneous;
  prefix.oracle_negative_time = suffix.oracle_negative_time = s.oracle_negative_time;
  for (std::size_t i = 0; i < s.segments.size(); ++i) {
    const Segment& seg = s.segments[i];
    bool found = false;
    if (seg.is_free()) {
      removed = std::get<FreeSegment>(seg.body).duration;
      found = true;
    } else if (seg.is_block()) {
      PulseSchedule p, q;
      if (split_first_free(*std::get<BlockSegment>(seg.body).body, p, q, removed)) {
        if (!p.empty()) prefix.add_block(share(std::move(p)), seg.label);
        if (!q.empty()) suffix.add_block(share(std::move(q)), seg.label);
        found = true;
      }
    }
    if (found) {
      suffix.segments.insert(suffix.segments.end(), s.segments.begin() + static_cast<std::ptrdiff_t>(i) + 1,
                             s.segments.end());
      return true;
    }
    prefix.segments.push_back(seg);
  }
  return false;
}

}  // namespace

double design_residual(const std::vector<PulseSpec>& cycle) {
  if (cycle.empty()) throw PreconditionError("empty decoupling cycle");
  const auto frames = cycle_frames(cycle);
  const Eigen::Index d = frames.front().rows();
  const std::size_t l = cycle.size();
  Eigen::MatrixXcd S = Eigen::MatrixXcd::Zero(d * d, d * d);
  std::vector<std::pair<Eigen::Index, Eigen::Index>> nz;
  for (std::size_t j = 0; j < l; ++j) {
    const Operator& g = frames[j];
    nz.clear();
    for (Eigen::Index c = 0; c < d; ++c)
      for (Eigen::Index r = 0; r < d; ++r)
        if (std::abs(g(r, c)) > 0.0) nz.push_back({r, c});
    for (const auto& [a, c] : nz)
      for (const auto& [b, e] : nz) S(a * d + b, c * d + e) += std::conj(g(a, c)) * g(b, e);
  }
  S /= static_cast<double>(l);
  for (Eigen::Index a = 0; a < d; ++a)
    for (Eigen::Index c = 0; c < d; ++c) S(a * d + a, c * d + c) -= 1.0 / static_cast<double>(d);
  return S.cwiseAbs().maxCoeff();
}

PulseSchedule dd_identity_block(const std::vector<std::vector<PulseSpec>>& cycles, double tau,
                                const NegTimeSpec& spec, const Operator& H0, DcgLibrary* dcgs,
                                bool instantaneous) {
  if (spec.mode == NegMode::Oracle || spec.mode == NegMode::Refocus)
    throw PreconditionError(to_string(spec.mode) + " mode has no decoupling block");
  if (spec.level < 1) throw PreconditionError("concatenation level must be >= 1");
  if (!(tau >= 0.0)) throw PreconditionError("inner delay must be nonnegative");
  if (cycles.empty()) throw ConfigError("no decoupling cycles available for negative-time synthesis");
  for (const auto& c : cycles)
    if (c.empty()) throw ConfigError("empty decoupling cycle");
  const bool use_dcg = spec.mode == NegMode::CddDcg && spec.dcg_order > 0;
  if (use_dcg && dcgs == nullptr) throw ConfigError("cdd-dcg with q > 0 needs a DCG library");
  const bool have_h0 = H0.size() > 0;

  Segment inner{FreeSegment{tau}, "neg free"};
  PulseSchedule block;
  for (int k = 1; k <= spec.level; ++k) {
    const auto& cycle = cycles[std::min<std::size_t>(static_cast<std::size_t>(k), cycles.size()) - 1];
    if (spec.mode == NegMode::CddDcg) {
      const double r = design_residual(cycle);
      if (r > kDesignTol)
        throw PreconditionError("level-" + std::to_string(k) + " frames are not a unitary 1-design (residual " +
                                std::to_string(r) + ")");
    } else if (have_h0) {
      if (k == 1)
        require_edd_cycle(cycle, H0, !instantaneous);
      else
        require_averages(cycle, block, H0, k);
    }
    const std::string tag = "neg L" + std::to_string(k) + " ";
    auto add = [&](PulseSchedule& s, const PulseSpec& p, bool adjoint) {
      const std::string label = tag + p.name + (adjoint ? "^dag" : "");
      if (use_dcg) {
        s.add_block(dcgs->get(adjoint ? reverse_pulse(p) : p, spec.dcg_order).schedule, label);
      } else {
        s.add_pulse(adjoint ? reverse_pulse(p) : p, label);
      }
    };
    PulseSchedule s;
    for (std::size_t j = cycle.size(); j-- > 0;) {
      add(s, cycle[j], true);
      s.segments.push_back(inner);
    }
    for (const auto& p : cycle) {
      s.segments.push_back(inner);
      add(s, p, false);
    }
    if (k == 1 && have_h0) {
      const double span = operator_norm(H0) * schedule_stats(s).duration;
      if (span >= std::numbers::pi)
        throw GuardError("Magnus guard: Lambda * (level-1 block duration) = " + std::to_string(span) +
                         " >= pi");
    }
    block = s;
    inner = Segment{BlockSegment{share(std::move(s))}, tag + "block"};
  }
  block.instantaneous = instantaneous;
  return block;
}

PulseSchedule negative_time(const PulseSchedule& block) {
  PulseSchedule prefix, suffix;
  double removed = 0.0;
  if (!split_first_free(block, prefix, suffix, removed))
    throw PreconditionError("identity block has no free segment to remove");
  if (removed < 0.0) throw PreconditionError("identity block contains a negative free segment");
  PulseSchedule out = suffix;
  out.segments.insert(out.segments.end(), prefix.segments.begin(), prefix.segments.end());
  return out;
}

PulseSchedule refocus_block(const std::vector<PulseSpec>& cycle, double tau, const NegTimeSpec& spec,
                            const Operator& H0, DcgLibrary* dcgs, bool instantaneous) {
  if (!(tau >= 0.0)) throw PreconditionError("refocusing delay must be nonnegative");
  if (cycle.size() < 2) throw ConfigError("refocusing cycle needs at least two pulses");
  if (spec.dcg_order < 0) throw ConfigError("DCG order must be >= 0");
  if (spec.dcg_order > 0 && dcgs == nullptr) throw ConfigError("refocus with q > 0 needs a DCG library");
  const auto frames = cycle_frames(cycle);
  require_closed(frames, 1);
  const Operator h = traceless(H0);
  std::vector<Operator> toggled;
  Operator sum = h;
  for (std::size_t j = 1; j < cycle.size(); ++j) {
    toggled.push_back(frames[j].adjoint() * h * frames[j]);
    sum += toggled.back();
  }
  const double scale = operator_norm(H0) * static_cast<double>(cycle.size());
  if (operator_norm(sum) > kDesignTol * scale)
    throw PreconditionError("refocusing frames do not invert H0 (residual " + std::to_string(operator_norm(sum)) + ")");
  for (std::size_t a = 0; a < toggled.size(); ++a)
    for (std::size_t b = a + 1; b < toggled.size(); ++b)
      if (max_abs(commutator(toggled[a], toggled[b])) > kDesignTol * scale * scale)
        throw PreconditionError("refocusing frames give non-commuting toggled Hamiltonians");
  PulseSchedule s;
  for (std::size_t j = 0; j < cycle.size(); ++j) {
    if (j > 0) s.add_free(tau, "refocus free");
    const PulseSpec& p = cycle[j];
    if (spec.dcg_order > 0)
      s.add_block(dcgs->get(p, spec.dcg_order).schedule, "refocus dcg" + std::to_string(spec.dcg_order) + " " + p.name);
    else
      s.add_pulse(p, "refocus " + p.name);
  }
  s.instantaneous = instantaneous;
  return s;
}

NegativeTimeBlock synthesize_negative_time(double tau, const NegTimeSpec& spec,
                                           const std::vector<std::vector<PulseSpec>>& cycles,
                                           const Operator& H0, DcgLibrary* dcgs, bool instantaneous) {
  if (!(tau >= 0.0)) throw PreconditionError("negative-time duration must be nonnegative");
  NegativeTimeBlock out;
  out.spec = spec;
  out.inner_delay = tau;
  PulseSchedule s;
  if (spec.mode == NegMode::Oracle) {
    s.add_free(-tau, "neg oracle");
    s.oracle_negative_time = true;
    s.instantaneous = instantaneous;
  } else if (spec.mode == NegMode::Refocus) {
    if (cycles.empty()) throw ConfigError("no refocusing cycle available");
    s = refocus_block(cycles.front(), tau, spec, H0, dcgs, instantaneous);
  } else {
    s = negative_time(dd_identity_block(cycles, tau, spec, H0, dcgs, instantaneous));
  }
  out.pulse_count = schedule_stats(s).pulses;
  out.schedule = share(std::move(s));
  return out;
}

}  // namespace hops
