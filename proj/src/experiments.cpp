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


#include "hops/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <thread>

#include <json.hpp>

#include "hops/errors.hpp"

namespace hops {

std::string to_string(SweepAxis a) { return a == SweepAxis::Horizon ? "T" : "tp"; }

namespace {

std::vector<double> geomspace(double a, double b, int n) {
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(a * std::pow(b / a, n == 1 ? 0.0 : double(i) / (n - 1)));
  return out;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

}  // namespace

PointResult evaluate_point(const SweepConfig& cfg, const MethodSpec& m, double x) {
  const double T = cfg.axis == SweepAxis::Horizon ? x : cfg.T;
  const double tp = cfg.axis == SweepAxis::Width ? x : cfg.tp;
  auto b = builtin_sequence(cfg.model, cfg.sequence, T, tp);
  const auto& seq = b.sequence;
  const bool need_dcg = m.dcg_order > 0 || (m.neg.mode != NegMode::Oracle && m.neg.dcg_order > 0);
  std::optional<DcgLibrary> lib;
  if (need_dcg) lib.emplace(seq.H0, b.dcg_recipe);

  CompileOptions o;
  o.order = m.order;
  o.dcg_order = m.dcg_order;
  o.neg = m.neg;
  o.instantaneous = m.instantaneous;
  o.robust_negative = m.robust_negative;
  o.dcgs = lib ? &*lib : nullptr;
  if (m.neg.mode != NegMode::Oracle) o.negtime_cycles = b.negtime_cycles();

  PointResult out;
  if (!m.mpf_m.empty()) {
    const auto plan = mpf_coefficients(m.mpf_m);
    o.order = 2;
    MPFJob job{plan, make_block_builder(m.construction, seq, o, plan), basis_state(cfg.model.n, cfg.mpf_state),
               pauli(cfg.model.n, cfg.mpf_observable), seq.target, T};
    const auto r = mpf_estimate(job, seq.H0);
    out.error = r.error;
    out.meta = "estimate=" + fmt(r.estimate) + ";exact=" + fmt(r.exact) +
               ";negative_segments=" + std::to_string(r.negative_segments);
    return out;
  }
  const auto cs = compile(m.construction, seq, o);
  const auto stats = schedule_stats(cs.schedule);
  out.error = infidelity(hermitian_expm(seq.target, T), simulate(cs.schedule, seq.H0));
  out.meta = "pulses=" + std::to_string(stats.pulses) + ";duration=" + fmt(stats.duration) +
             ";negative_blocks=" + std::to_string(cs.negative_blocks);
  return out;
}

SweepResult run_sweep(const SweepConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  struct Job {
    const MethodSpec* method;
    double x;
  };
  std::vector<Job> jobs;
  for (const auto& m : cfg.methods) {
    if (m.label.empty()) throw ConfigError("method without a label");
    for (double x : m.grid) {
      if (!(x > 0.0)) throw ConfigError("sweep grid values must be positive (method " + m.label + ")");
      jobs.push_back({&m, x});
    }
  }
  std::vector<PointResult> results(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      const auto& job = jobs[i];
      const std::string where = "method " + job.method->label + " at " + to_string(cfg.axis) + "=" + fmt(job.x);
      try {
        results[i] = evaluate_point(cfg, *job.method, job.x);
      } catch (const GuardError& e) {
        errors[i] = std::make_exception_ptr(GuardError(where + ": " + e.what()));
      } catch (const PreconditionError& e) {
        errors[i] = std::make_exception_ptr(PreconditionError(where + ": " + e.what()));
      } catch (const ConfigError& e) {
        errors[i] = std::make_exception_ptr(ConfigError(where + ": " + e.what()));
      } catch (const std::exception& e) {
        errors[i] = std::make_exception_ptr(Error(where + ": " + e.what()));
      }
    }
  };
  const int threads = std::max(1, std::min<int>(cfg.threads, static_cast<int>(jobs.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  SweepResult out;
  for (std::size_t i = 0; i < jobs.size(); ++i)
    out.rows.push_back({jobs[i].x, jobs[i].method->label, results[i].error, results[i].meta});
  std::stable_sort(out.rows.begin(), out.rows.end(), [](const SweepRow& a, const SweepRow& b) {
    return a.method != b.method ? a.method < b.method : a.x < b.x;
  });
  for (std::size_t i = 1; i < out.rows.size(); ++i)
    if (out.rows[i].method == out.rows[i - 1].method && out.rows[i].x == out.rows[i - 1].x)
      throw ConfigError("duplicate grid point for method " + out.rows[i].method);

  for (const auto& m : cfg.methods) {
    std::optional<std::pair<double, double>> w = m.window;
    if (!w) {
      std::vector<double> xs, ys;
      for (const auto& r : out.rows)
        if (r.method == m.label) {
          xs.push_back(r.x);
          ys.push_back(r.error);
        }
      w = detect_window(xs, ys);
    }
    if (!w) continue;
    auto fit = fit_slope(out, m.label, w->first, w->second);
    fit.detected = !m.window.has_value();
    out.fits.push_back(fit);
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

SlopeFit fit_slope(const SweepResult& r, const std::string& method, double lo, double hi) {
  std::vector<double> lx, ly;
  for (const auto& row : r.rows) {
    if (row.method != method || row.x < lo * (1 - 1e-12) || row.x > hi * (1 + 1e-12)) continue;
    if (!(row.error > kNoiseFloor))
      throw PreconditionError("error " + fmt(row.error) + " at x=" + fmt(row.x) + " is below the noise floor");
    lx.push_back(std::log(row.x));
    ly.push_back(std::log(row.error));
  }
  if (lx.size() < 4)
    throw PreconditionError("fit window for " + method + " has " + std::to_string(lx.size()) + " points, need 4");
  const double n = static_cast<double>(lx.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
    syy += ly[i] * ly[i];
  }
  SlopeFit f;
  f.method = method;
  f.lo = lo;
  f.hi = hi;
  f.points = lx.size();
  const double vx = n * sxx - sx * sx, vy = n * syy - sy * sy, cxy = n * sxy - sx * sy;
  f.slope = cxy / vx;
  f.intercept = (sy - f.slope * sx) / n;
  f.r2 = vy > 0 ? cxy * cxy / (vx * vy) : 1.0;
  return f;
}

std::optional<std::pair<double, double>> detect_window(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw PreconditionError("x and y differ in length");
  // Local slopes between neighbours that are both above the noise floor.
  std::vector<std::optional<double>> s;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    if (y[i] > kNoiseFloor && y[i + 1] > kNoiseFloor && std::isfinite(y[i]) && std::isfinite(y[i + 1]))
      s.push_back(std::log(y[i + 1] / y[i]) / std::log(x[i + 1] / x[i]));
    else
      s.push_back(std::nullopt);
  }
  std::size_t best_i = 0, best_len = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    double lo = INFINITY, hi = -INFINITY, sum = 0;
    for (std::size_t j = i; j < s.size() && s[j]; ++j) {
      lo = std::min(lo, *s[j]);
      hi = std::max(hi, *s[j]);
      sum += *s[j];
      const std::size_t len = j - i + 1;
      const double mean = sum / static_cast<double>(len);
      if (hi - lo > std::max(0.1 * std::abs(mean), 0.25)) break;
      // Flat runs are plateaus, not power laws.
      if (len >= 3 && mean >= 0.5 && len >= best_len) {
        best_i = i;
        best_len = len;
      }
    }
  }
  if (best_len == 0) return std::nullopt;
  return std::make_pair(x[best_i], x[best_i + best_len]);
}

std::vector<std::string> figure_names() { return {"fig3", "fig5", "fig6", "fig8", "fig9"}; }

SweepConfig figure_preset(const std::string& name, std::uint64_t seed) {
  SweepConfig c;
  c.name = name;
  auto method = [](std::string label, Construction k, int order, int q, NegTimeSpec neg, std::vector<double> grid) {
    MethodSpec m;
    m.label = std::move(label);
    m.construction = k;
    m.order = order;
    m.dcg_order = q;
    m.neg = neg;
    m.grid = std::move(grid);
    return m;
  };
  if (name == "fig3") {
    // Seed 2 draws J_ij with all delays negative, so the refocusing pulses are exercised.
    c.sequence = SequenceKind::VA;
    c.model = default_model_def(c.sequence, seed ? seed : 2);
    c.axis = SweepAxis::Width;
    c.T = 1.0;
    const auto grid = geomspace(1e-4, 1e-2, 17);
    c.methods = {method("naive", Construction::C1, 2, 0, {NegMode::Refocus, 1, 0}, grid),
                 method("dcg1", Construction::C1, 2, 1, {NegMode::Refocus, 1, 1}, grid),
                 method("dcg2", Construction::C1, 2, 2, {NegMode::Refocus, 1, 2}, grid)};
  } else if (name == "fig5") {
    c.sequence = SequenceKind::VB;
    c.model = default_model_def(c.sequence, seed ? seed : 1);
    c.tp = 1e-4;
    const auto grid = geomspace(0.01, 1.0, 17);
    // The level-1 Magnus guard of the negative-time block trips above T ~ 0.266.
    const auto grid4 = geomspace(0.02, 0.26, 20);
    const NegTimeSpec neg{NegMode::SymEulerian, 2, 0};
    for (int order : {1, 2, 4})
      for (int q : {0, 1})
        c.methods.push_back(method("o" + std::to_string(order) + (q ? "-dcg" : "-naive"), Construction::C1, order, q,
                                   neg, order == 4 ? grid4 : grid));
  } else if (name == "fig6") {
    c.sequence = SequenceKind::VC;
    c.model = default_model_def(c.sequence, seed ? seed : 1);
    c.tp = 1e-4;
    const auto grid = geomspace(0.01, 1.0, 21);
    for (int order : {1, 2, 4}) c.methods.push_back(method("o" + std::to_string(order), Construction::C2, order, 0, {}, grid));
    auto naive = method("o4-naive", Construction::C2, 4, 0, {}, grid);
    naive.robust_negative = false;
    c.methods.push_back(naive);
  } else if (name == "fig8" || name == "fig9") {
    const bool cr = name == "fig8";
    c.sequence = cr ? SequenceKind::VB : SequenceKind::VC;
    c.model = default_model_def(c.sequence, seed ? seed : 1);
    c.tp = cr ? 1e-5 : 1e-4;
    auto m = method("mpf-p2", cr ? Construction::C1 : Construction::C2, 2, cr ? 1 : 0, {}, geomspace(0.01, 1.0, 17));
    m.mpf_m = {1, 2};
    c.methods = {m};
  } else {
    throw ConfigError("unknown figure preset: " + name);
  }
  return c;
}

void write_csv(const SweepResult& r, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write " + path);
  f << "x,method,error,meta\n";
  char buf[64];
  for (const auto& row : r.rows) {
    std::snprintf(buf, sizeof buf, "%.17g", row.x);
    f << buf << ',' << row.method << ',';
    std::snprintf(buf, sizeof buf, "%.17g", row.error);
    f << buf << ',' << row.meta << '\n';
  }
}

std::string sidecar_json(const SweepConfig& cfg, const SweepResult& r) {
  using nlohmann::json;
  json methods = json::array();
  for (const auto& m : cfg.methods) {
    json j{{"label", m.label},
           {"construction", to_string(m.construction)},
           {"order", m.order},
           {"dcg_order", m.dcg_order},
           {"neg", describe(m.neg)},
           {"instantaneous", m.instantaneous},
           {"robust_negative", m.robust_negative},
           {"grid", m.grid}};
    if (!m.mpf_m.empty()) j["mpf_m"] = m.mpf_m;
    if (m.window) j["window"] = {m.window->first, m.window->second};
    methods.push_back(j);
  }
  json fits = json::array();
  for (const auto& f : r.fits)
    fits.push_back({{"method", f.method},
                    {"window", {f.lo, f.hi}},
                    {"slope", f.slope},
                    {"intercept", f.intercept},
                    {"r2", f.r2},
                    {"points", f.points},
                    {"detected", f.detected}});
  json doc{{"config",
            {{"name", cfg.name},
             {"sequence", to_string(cfg.sequence)},
             {"model",
              {{"kind", to_string(cfg.model.kind)},
               {"n", cfg.model.n},
               {"J", cfg.model.J},
               {"couplings", cfg.model.couplings}}},
             {"axis", to_string(cfg.axis)},
             {"T", cfg.T},
             {"tp", cfg.tp},
             {"mpf_state", cfg.mpf_state},
             {"mpf_observable", cfg.mpf_observable},
             {"threads", cfg.threads},
             {"methods", methods}}},
           {"seed", cfg.model.seed},
           {"fits", fits},
           {"seconds", r.seconds}};
  return doc.dump(2);
}

}  // namespace hops
