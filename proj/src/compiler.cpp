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

#include "hops/compiler.hpp"

#include <cstdio>
#include <map>
#include <tuple>

#include "hops/errors.hpp"

namespace hops {

std::string to_string(Construction c) { return c == Construction::C1 ? "c1" : "c2"; }

Construction parse_construction(const std::string& s) {
  if (s == "c1" || s == "C1" || s == "1") return Construction::C1;
  if (s == "c2" || s == "C2" || s == "2") return Construction::C2;
  throw ConfigError("unknown construction: " + s);
}

std::vector<Operator> TrotterExponents::operators() const {
  std::vector<Operator> out;
  for (const auto& t : terms) out.push_back(t.A);
  return out;
}

Operator TrotterExponents::sum() const {
  if (terms.empty()) return Operator();
  Operator s = Operator::Zero(terms.front().A.rows(), terms.front().A.cols());
  for (const auto& t : terms) s += t.A;
  return s;
}

namespace {

void require_horizon(const FirstOrderSequence& seq) {
  if (!(seq.horizon > 0.0)) throw PreconditionError("sequence horizon T must be positive");
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

class Builder {
 public:
  Builder(const FirstOrderSequence& seq, const CompileOptions& opts) : seq_(seq), opts_(opts) {
    if (opts.dcg_order < 0) throw ConfigError("DCG order must be >= 0");
    if (opts.dcg_order > 0 && opts.dcgs == nullptr) throw ConfigError("DCG order > 0 needs a DCG library");
    if (opts.dcg_order > 0 && opts.instantaneous) throw ConfigError("DCGs need finite-width pulses");
  }

  std::size_t negative_blocks = 0;
  bool oracle_used = false;

  void free(PulseSchedule& s, double d, const std::string& label) {
    if (d > 0.0) {
      s.add_free(d, label);
      return;
    }
    if (d == 0.0) return;
    ++negative_blocks;
    if (opts_.neg.mode == NegMode::Oracle) {
      oracle_used = true;
      s.add_free(d, label + " neg");
      return;
    }
    auto it = neg_cache_.find(-d);
    if (it == neg_cache_.end()) {
      auto nb = synthesize_negative_time(-d, opts_.neg, opts_.negtime_cycles, seq_.H0, opts_.dcgs,
                                         opts_.instantaneous);
      it = neg_cache_.emplace(-d, nb.schedule).first;
    }
    s.add_block(it->second, label + " neg " + describe(opts_.neg));
  }

  // Ideal P_k or P_k^dag, each elementary pulse bare or replaced by its DCG.
  SchedulePtr ideal_control(std::size_t k, bool adjoint) {
    auto key = std::make_pair(k, adjoint);
    auto it = ctrl_cache_.find(key);
    if (it != ctrl_cache_.end()) return it->second;
    const Control c = adjoint ? seq_.controls[k].adjoint() : seq_.controls[k];
    PulseSchedule s;
    for (const auto& p : c.pulses) {
      if (opts_.dcg_order > 0)
        s.add_block(opts_.dcgs->get(p, opts_.dcg_order).schedule, "dcg" + std::to_string(opts_.dcg_order) + " " + p.name);
      else
        s.add_pulse(p, p.name);
    }
    return ctrl_cache_.emplace(key, share(std::move(s))).first->second;
  }

  enum class Factor { Plain, Rev, ForAdjoint, ForPulse };

  // Robust pulse factors built from stretched copies of the input pulses.
  SchedulePtr factor(std::size_t k, Factor kind, double beta) {
    auto key = std::make_tuple(k, static_cast<int>(kind), beta);
    auto it = factor_cache_.find(key);
    if (it != factor_cache_.end()) return it->second;
    const std::size_t l = seq_.length();
    PulseSchedule s;
    auto add = [&](std::size_t j, bool rev) {
      const Control c = seq_.controls[j].stretched(beta);
      for (const auto& p : rev ? c.adjoint().pulses : c.pulses) s.add_pulse(p, p.name);
    };
    switch (kind) {
      case Factor::Plain: add(k, false); break;
      case Factor::Rev: add(k, true); break;
      case Factor::ForAdjoint:  // P_{k+1} .. P_l, P_1 .. P_{k-1}
        for (std::size_t j = k + 1; j < l; ++j) add(j, false);
        for (std::size_t j = 0; j < k; ++j) add(j, false);
        break;
      case Factor::ForPulse:  // P_{k-1}^rev .. P_1^rev, P_l^rev .. P_{k+1}^rev
        for (std::size_t j = k; j-- > 0;) add(j, true);
        for (std::size_t j = l; j-- > k + 1;) add(j, true);
        break;
    }
    return factor_cache_.emplace(key, share(std::move(s))).first->second;
  }

  PulseSchedule c1_block(double alpha) {
    PulseSchedule s;
    const std::size_t l = seq_.length();
    for (std::size_t k = l; k-- > 0;) {
      s.add_block(ideal_control(k, true), seq_.controls[k].name + "^dag");
      free(s, alpha * seq_.delays[k] / 2.0, "free");
    }
    for (std::size_t k = 0; k < l; ++k) {
      free(s, alpha * seq_.delays[k] / 2.0, "free");
      s.add_block(ideal_control(k, false), seq_.controls[k].name);
    }
    return s;
  }

  PulseSchedule c2_block(double alpha, double c) {
    const double beta = stretch_for(alpha, c);
    PulseSchedule s;
    const std::size_t l = seq_.length();
    const bool robust_neg = alpha < 0.0 && opts_.robust_negative;
    const double b = alpha < 0.0 && !opts_.robust_negative ? 1.0 : beta;
    for (std::size_t k = l; k-- > 0;) {
      const auto& name = seq_.controls[k].name;
      if (robust_neg)
        s.add_block(factor(k, Factor::ForAdjoint, b), "robust exp(+i b Phi) " + name + "^dag");
      else
        s.add_block(factor(k, Factor::Rev, b), name + "^rev");
      free(s, alpha * seq_.delays[k] / 2.0, "free");
    }
    for (std::size_t k = 0; k < l; ++k) {
      const auto& name = seq_.controls[k].name;
      free(s, alpha * seq_.delays[k] / 2.0, "free");
      if (robust_neg)
        s.add_block(factor(k, Factor::ForPulse, b), "robust " + name + " exp(+i b Phi)");
      else
        s.add_block(factor(k, Factor::Plain, b), name);
    }
    return s;
  }

  PulseSchedule first_order(bool ideal_controls) {
    PulseSchedule s;
    for (std::size_t k = 0; k < seq_.length(); ++k) {
      free(s, seq_.delays[k], "free");
      if (ideal_controls)
        s.add_block(ideal_control(k, false), seq_.controls[k].name);
      else
        s.add_block(factor(k, Factor::Plain, 1.0), seq_.controls[k].name);
    }
    return s;
  }

  static double stretch_for(double alpha, double c) {
    const double beta = c * std::abs(alpha) / 2.0;
    if (beta < 1.0 - 1e-12)
      throw PreconditionError("Construction 2 stretch " + fmt(beta) + " < 1 (c too small)");
    return std::max(beta, 1.0);
  }

  void finish(PulseSchedule& s) const {
    s.instantaneous = opts_.instantaneous;
    s.oracle_negative_time = oracle_used;
  }

 private:
  const FirstOrderSequence& seq_;
  const CompileOptions& opts_;
  std::map<double, SchedulePtr> neg_cache_;
  std::map<std::pair<std::size_t, bool>, SchedulePtr> ctrl_cache_;
  std::map<std::tuple<std::size_t, int, double>, SchedulePtr> factor_cache_;
};

TrotterPlan plan_for(int order) {
  if (order == 1) return suzuki_plan(1);
  if (order < 2 || order % 2 != 0) throw ConfigError("Trotter order must be 1 or even, got " + std::to_string(order));
  return suzuki_plan(order / 2);
}

std::string block_label(const char* tag, std::size_t j, std::size_t n, double alpha) {
  return std::string(tag) + " block " + std::to_string(j + 1) + "/" + std::to_string(n) + " alpha=" + fmt(alpha);
}

}  // namespace

TrotterExponents extract_exponents_c1(const FirstOrderSequence& seq) {
  require_horizon(seq);
  require_first_order(seq, false);
  const auto frames = toggling_frames(seq);
  TrotterExponents out;
  for (std::size_t k = 0; k < seq.length(); ++k) {
    out.terms.push_back({frames[k].adjoint() * seq.H0 * frames[k] * (seq.delays[k] / seq.horizon), k,
                         TrotterTerm::Source::Free});
  }
  return out;
}

TrotterExponents extract_exponents_c2(const FirstOrderSequence& seq, double c) {
  require_horizon(seq);
  if (!seq.finite_width) throw PreconditionError("Construction 2 needs a finite-width input sequence");
  if (c < 1.0) throw PreconditionError("Construction 2 parameter c must be >= 1");
  require_first_order(seq, true);
  const auto frames = toggling_frames(seq);
  TrotterExponents out;
  for (std::size_t k = 0; k < seq.length(); ++k) {
    const Operator& g = frames[k];
    const Operator phi = seq.controls[k].magnus_first(seq.H0);
    out.terms.push_back({g.adjoint() * phi * g * (c / seq.horizon), k, TrotterTerm::Source::Width});
    out.terms.push_back({g.adjoint() * seq.H0 * g * (seq.delays[k] / seq.horizon), k, TrotterTerm::Source::Free});
  }
  return out;
}

CompiledSchedule compile_c1(const FirstOrderSequence& seq, const CompileOptions& opts) {
  validate(seq);
  extract_exponents_c1(seq);
  CompiledSchedule out;
  out.construction = Construction::C1;
  out.plan = plan_for(opts.order);
  out.input = seq;
  out.options = opts;
  Builder b(seq, opts);
  if (opts.order == 1) {
    out.schedule.add_block(share(b.first_order(true)), "c1 order 1");
    out.pulse_count = seq.length();
  } else {
    const auto& blocks = out.plan.blocks;
    for (std::size_t j = 0; j < blocks.size(); ++j)
      out.schedule.add_block(share(b.c1_block(blocks[j].alpha)), block_label("c1", j, blocks.size(), blocks[j].alpha));
    out.pulse_count = 2 * seq.length() * blocks.size();
  }
  b.finish(out.schedule);
  out.negative_blocks = b.negative_blocks;
  return out;
}

CompiledSchedule compile_c2(const FirstOrderSequence& seq, const CompileOptions& opts) {
  validate(seq);
  if (opts.instantaneous) throw ConfigError("Construction 2 compiles finite-width pulses");
  if (opts.dcg_order != 0) throw ConfigError("Construction 2 does not use DCGs");
  CompiledSchedule out;
  out.construction = Construction::C2;
  out.plan = plan_for(opts.order);
  const double c = opts.c.value_or(out.plan.c);
  extract_exponents_c2(seq, c);
  out.input = seq;
  out.options = opts;
  Builder b(seq, opts);
  if (opts.order == 1) {
    out.schedule.add_block(share(b.first_order(false)), "c2 order 1");
    out.pulse_count = seq.length();
    out.stretches = {1.0};
  } else {
    const auto& blocks = out.plan.blocks;
    for (std::size_t j = 0; j < blocks.size(); ++j) {
      const double alpha = blocks[j].alpha;
      out.stretches.push_back(Builder::stretch_for(alpha, c));
      out.schedule.add_block(share(b.c2_block(alpha, c)), block_label("c2", j, blocks.size(), alpha));
    }
    out.pulse_count = 2 * seq.length() * blocks.size();
  }
  b.finish(out.schedule);
  out.negative_blocks = b.negative_blocks;
  return out;
}

CompiledSchedule compile(Construction which, const FirstOrderSequence& seq, const CompileOptions& opts) {
  return which == Construction::C1 ? compile_c1(seq, opts) : compile_c2(seq, opts);
}

PulseSchedule second_order_block(Construction which, const FirstOrderSequence& seq, double alpha,
                                 const CompileOptions& opts, double c) {
  if (!(alpha > 0.0)) throw PreconditionError("second-order block needs alpha > 0");
  validate(seq);
  Builder b(seq, opts);
  PulseSchedule s = which == Construction::C1 ? b.c1_block(alpha) : b.c2_block(alpha, c);
  b.finish(s);
  return s;
}

}  // namespace hops
