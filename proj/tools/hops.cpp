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


// Command-line front end: compile, simulate, sweep, mpf and check.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hops/compiler.hpp"
#include "hops/document.hpp"
#include "hops/errors.hpp"
#include "hops/experiments.hpp"
#include "hops/models.hpp"
#include "hops/mpf.hpp"

using nlohmann::json;
using namespace hops;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitOther = 1;
constexpr int kExitParse = 2;
constexpr int kExitPrecondition = 3;
constexpr int kExitGuard = 4;

struct RunConfig {
  std::string verb;
  std::string sequence = "vb";
  std::optional<int> n;
  double J = 1.0;
  std::uint64_t seed = 1;
  std::string construction = "c1";
  std::optional<int> p;
  std::optional<int> order;
  int q = 0;
  std::optional<std::string> neg;
  int neg_level = 1;
  int neg_q = 0;
  double T = 0.1;
  double tp = 1e-4;
  bool instantaneous = false;
  bool naive_negative = false;
  std::optional<double> c;
  std::string out;
  int threads = 1;
  std::string figure;
  std::string axis = "T";
  std::string grid;
  std::string schedule;
  bool verify = false;
  std::vector<int> m{1, 2};
  std::size_t state = 5;
  std::string observable = "X0 X1";

  int resolved_order() const { return order ? *order : p ? 2 * *p : 2; }
};

json to_json(const RunConfig& c) {
  json j{{"verb", c.verb},           {"sequence", c.sequence},
         {"J", c.J},                 {"seed", c.seed},
         {"construction", c.construction}, {"order", c.resolved_order()},
         {"q", c.q},                 {"neg-level", c.neg_level},
         {"neg-q", c.neg_q},         {"T", c.T},
         {"tp", c.tp},               {"instantaneous", c.instantaneous},
         {"naive-negative", c.naive_negative}};
  if (c.n) j["n"] = *c.n;
  if (c.neg) j["neg"] = *c.neg;
  if (c.c) j["c"] = *c.c;
  return j;
}

// Current pipeline stage, reported in diagnostics.
std::string g_stage = "parse";

ModelDef model_of(const RunConfig& c) {
  g_stage = "model";
  const auto seq = parse_sequence(c.sequence);
  auto def = default_model_def(seq, c.seed);
  return make_model(def.kind, c.n.value_or(def.n), c.J, c.seed);
}

NegTimeSpec neg_spec(const RunConfig& c) {
  NegTimeSpec s;
  if (c.neg) s.mode = parse_neg_mode(*c.neg);
  s.level = c.neg_level;
  s.dcg_order = c.neg_q;
  return s;
}

struct Compiled {
  BuiltinSequence b;
  std::shared_ptr<DcgLibrary> lib;
  CompiledSchedule cs;
};

Compiled compile_from(const RunConfig& c) {
  const auto model = model_of(c);
  const auto which = parse_sequence(c.sequence);
  Compiled out{builtin_sequence(model, which, c.T, c.tp), nullptr, {}};
  auto& seq = out.b.sequence;
  g_stage = "compile";
  if (!c.neg && seq.has_negative_delay())
    throw PreconditionError("sequence " + c.sequence + " has negative delays; choose --neg");
  CompileOptions o;
  o.order = c.resolved_order();
  o.dcg_order = c.q;
  o.neg = neg_spec(c);
  o.instantaneous = c.instantaneous;
  o.c = c.c;
  o.robust_negative = !c.naive_negative;
  if (c.q > 0 || (c.neg_q > 0 && o.neg.mode != NegMode::Oracle)) {
    out.lib = std::make_shared<DcgLibrary>(seq.H0, out.b.dcg_recipe);
    o.dcgs = out.lib.get();
  }
  g_stage = "compile";
  if (o.neg.mode != NegMode::Oracle) o.negtime_cycles = out.b.negtime_cycles();
  out.cs = compile(parse_construction(c.construction), seq, o);
  return out;
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

int cmd_check(const RunConfig& c) {
  const auto b = builtin_sequence(model_of(c), parse_sequence(c.sequence), c.T, c.tp);
  g_stage = "check";
  const auto r = check_first_order(b.sequence);
  const double scale = operator_norm(b.sequence.H0) * c.T;
  json j{{"sequence", c.sequence},
         {"free_residual", r.free_residual},
         {"width_residual", r.width_residual},
         {"width_checked", r.width_checked},
         {"lambda_T", scale}};
  emit(j);
  return kExitOk;
}

int cmd_compile(const RunConfig& c) {
  auto cc = compile_from(c);
  g_stage = "write";
  ScheduleDocument doc{cc.cs.schedule, cc.b.sequence.H0, cc.b.sequence.target, c.T, to_json(c)};
  doc.provenance["pulse_count"] = cc.cs.pulse_count;
  doc.provenance["blocks"] = cc.cs.plan.blocks.size();
  doc.provenance["stretches"] = cc.cs.stretches;
  doc.provenance["negative_blocks"] = cc.cs.negative_blocks;
  const std::string path = c.out.empty() ? "schedule.json" : c.out;
  write_document(doc, path);
  const auto stats = schedule_stats(cc.cs.schedule);
  emit({{"schedule", path},
        {"pulse_count", cc.cs.pulse_count},
        {"pulses", stats.pulses},
        {"duration", stats.duration},
        {"max_stretch", stats.max_stretch},
        {"negative_blocks", cc.cs.negative_blocks}});
  return kExitOk;
}

RunConfig config_from_provenance(const json& p) {
  RunConfig c;
  c.sequence = p.at("sequence").get<std::string>();
  if (p.contains("n")) c.n = p.at("n").get<int>();
  c.J = p.at("J").get<double>();
  c.seed = p.at("seed").get<std::uint64_t>();
  c.construction = p.at("construction").get<std::string>();
  c.order = p.at("order").get<int>();
  c.q = p.at("q").get<int>();
  if (p.contains("neg")) c.neg = p.at("neg").get<std::string>();
  c.neg_level = p.at("neg-level").get<int>();
  c.neg_q = p.at("neg-q").get<int>();
  c.T = p.at("T").get<double>();
  c.tp = p.at("tp").get<double>();
  c.instantaneous = p.at("instantaneous").get<bool>();
  c.naive_negative = p.at("naive-negative").get<bool>();
  if (p.contains("c")) c.c = p.at("c").get<double>();
  return c;
}

int cmd_simulate(const RunConfig& c) {
  json j;
  if (c.schedule.empty()) {
    auto cc = compile_from(c);
    g_stage = "simulate";
    const auto& s = cc.b.sequence;
    j["infidelity"] = infidelity(hermitian_expm(s.target, c.T), simulate(cc.cs.schedule, s.H0));
    emit(j);
    return kExitOk;
  }
  g_stage = "read";
  const auto doc = read_document(c.schedule);
  g_stage = "simulate";
  const Operator U = simulate(doc.schedule, doc.H0);
  j["schedule"] = c.schedule;
  j["infidelity"] = infidelity(hermitian_expm(doc.target, doc.horizon), U);
  if (c.verify) {
    if (!doc.provenance.contains("sequence")) throw PreconditionError("document has no compile provenance to verify");
    g_stage = "verify";
    json prov;
    try {
      prov = doc.provenance;
      auto cc = compile_from(config_from_provenance(prov));
      const double diff = max_abs(U - simulate(cc.cs.schedule, cc.b.sequence.H0));
      j["replay_difference"] = diff;
      emit(j);
      if (diff > 1e-12) throw PreconditionError("replayed schedule differs from the in-process result by " + std::to_string(diff));
      return kExitOk;
    } catch (const json::exception& e) {
      throw ConfigError(std::string("malformed provenance: ") + e.what());
    }
  }
  emit(j);
  return kExitOk;
}

std::vector<double> parse_grid(const std::string& g) {
  // lo:hi:n (geometric) or a comma list.
  std::vector<double> out;
  if (g.find(':') != std::string::npos) {
    double lo, hi;
    int n;
    char c1, c2;
    std::istringstream in(g);
    if (!(in >> lo >> c1 >> hi >> c2 >> n) || c1 != ':' || c2 != ':' || n < 1 || !(lo > 0) || !(hi >= lo))
      throw ConfigError("grid must be lo:hi:n with 0 < lo <= hi, got " + g);
    for (int i = 0; i < n; ++i) out.push_back(lo * std::pow(hi / lo, n == 1 ? 0.0 : double(i) / (n - 1)));
    return out;
  }
  std::istringstream in(g);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    try {
      out.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw ConfigError("bad grid value: " + tok);
    }
  }
  if (out.empty()) throw ConfigError("empty sweep grid");
  return out;
}

int cmd_sweep(const RunConfig& c, bool seed_given) {
  SweepConfig cfg;
  if (!c.figure.empty()) {
    cfg = figure_preset(c.figure, seed_given ? c.seed : 0);
  } else {
    if (c.grid.empty()) throw ConfigError("sweep needs --figure or --grid");
    if (!c.neg && c.resolved_order() >= 4) throw ConfigError("order >= 4 needs --neg");
    cfg.name = "custom";
    cfg.sequence = parse_sequence(c.sequence);
    cfg.model = model_of(c);
    if (c.axis != "T" && c.axis != "tp") throw ConfigError("axis must be T or tp");
    cfg.axis = c.axis == "T" ? SweepAxis::Horizon : SweepAxis::Width;
    cfg.T = c.T;
    cfg.tp = c.tp;
    MethodSpec m;
    m.construction = parse_construction(c.construction);
    m.order = c.resolved_order();
    m.dcg_order = c.q;
    m.neg = neg_spec(c);
    m.instantaneous = c.instantaneous;
    m.robust_negative = !c.naive_negative;
    m.grid = parse_grid(c.grid);
    m.label = to_string(m.construction) + "-o" + std::to_string(m.order) + "-q" + std::to_string(m.dcg_order);
    cfg.methods = {m};
  }
  cfg.threads = c.threads;
  g_stage = "sweep";
  const auto r = run_sweep(cfg);
  g_stage = "write";
  const std::string base = c.out.empty() ? cfg.name : c.out;
  write_csv(r, base + ".csv");
  {
    std::ofstream f(base + ".json");
    if (!f) throw ConfigError("cannot write " + base + ".json");
    f << sidecar_json(cfg, r) << "\n";
  }
  json fits = json::array();
  for (const auto& f : r.fits)
    fits.push_back({{"method", f.method}, {"window", {f.lo, f.hi}}, {"slope", f.slope}, {"r2", f.r2}});
  emit({{"csv", base + ".csv"}, {"sidecar", base + ".json"}, {"rows", r.rows.size()}, {"fits", fits},
        {"seconds", r.seconds}});
  return kExitOk;
}

int cmd_mpf(const RunConfig& c) {
  const auto model = model_of(c);
  const auto which = parse_sequence(c.sequence);
  auto b = builtin_sequence(model, which, c.T, c.tp);
  std::shared_ptr<DcgLibrary> lib;
  CompileOptions o;
  o.order = 2;
  o.dcg_order = c.q;
  o.instantaneous = c.instantaneous;
  if (c.q > 0) {
    lib = std::make_shared<DcgLibrary>(b.sequence.H0, b.dcg_recipe);
    o.dcgs = lib.get();
  }
  g_stage = "mpf";
  const auto plan = mpf_coefficients(c.m);
  MPFJob job{plan, make_block_builder(parse_construction(c.construction), b.sequence, o, plan),
             basis_state(model.n, c.state), pauli(model.n, c.observable), b.sequence.target, c.T};
  const auto r = mpf_estimate(job, b.sequence.H0);
  const std::string method = "mpf-p" + std::to_string(plan.p());
  if (!c.out.empty()) {
    g_stage = "write";
    const bool fresh = !std::filesystem::exists(c.out) || std::filesystem::file_size(c.out) == 0;
    std::ofstream f(c.out, std::ios::app);
    if (!f) throw ConfigError("cannot write " + c.out);
    if (fresh) f << "x,method,error,meta\n";
    char buf[160];
    std::snprintf(buf, sizeof buf, "%.17g,%s,%.17g,estimate=%.17g;exact=%.17g;negative_segments=%zu\n", c.T,
                  method.c_str(), r.error, r.estimate, r.exact, r.negative_segments);
    f << buf;
  }
  emit({{"method", method},
        {"b", plan.b},
        {"m", plan.m},
        {"estimate", r.estimate},
        {"exact", r.exact},
        {"error", r.error},
        {"branches", r.branches},
        {"negative_segments", r.negative_segments}});
  return kExitOk;
}

// Applies keys of a JSON config file to options not given on the command line.
void apply_config_file(CLI::App& app, const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config " + path);
  json j;
  try {
    f >> j;
  } catch (const json::exception& e) {
    throw ConfigError("cannot parse config " + path + ": " + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    CLI::Option* opt = nullptr;
    try {
      opt = app.get_option("--" + it.key());
    } catch (const CLI::OptionNotFound&) {
      throw ConfigError("unknown config key: " + it.key());
    }
    if (opt->count() > 0) continue;  // flags win
    const json& v = it.value();
    std::string text;
    if (v.is_string())
      text = v.get<std::string>();
    else if (v.is_array()) {
      for (const auto& e : v) text += (text.empty() ? "" : ",") + (e.is_string() ? e.get<std::string>() : e.dump());
    } else
      text = v.dump();
    opt->clear();
    opt->add_result(text);
    opt->run_callback();
  }
}

int run(int argc, char** argv) {
  RunConfig c;
  CLI::App app{"Robust high-order pulse-sequence compiler"};
  app.require_subcommand(1, 1);
  std::string config_path;
  std::string m_list = "1,2";

  auto common = [&](CLI::App* s) {
    s->add_option("--config", config_path, "JSON config file; flags override its values");
    s->add_option("--sequence", c.sequence, "va | vb | vc");
    s->add_option("--n", c.n, "qubit count");
    s->add_option("--J", c.J, "coupling scale");
    s->add_option("--seed", c.seed, "seed for random couplings");
    s->add_option("--T", c.T, "simulation horizon");
    s->add_option("--tp", c.tp, "pulse width");
  };
  auto compile_opts = [&](CLI::App* s) {
    s->add_option("--construction", c.construction, "c1 | c2");
    s->add_option("--p", c.p, "Suzuki level; order 2p");
    s->add_option("--order", c.order, "Trotter order (1 or even); overrides --p");
    s->add_option("--q", c.q, "DCG order for Construction 1");
    s->add_option("--neg", c.neg, "negative-time mode: oracle | cdd-dcg | sym-eulerian | refocus");
    s->add_option("--neg-level", c.neg_level, "concatenation level of the negative-time block");
    s->add_option("--neg-q", c.neg_q, "DCG order inside the negative-time block");
    s->add_flag("--instantaneous", c.instantaneous, "ideal zero-width pulses");
    s->add_flag("--naive-negative", c.naive_negative, "Construction 2 without the robust pulse factors in negative blocks");
    s->add_option("--c", c.c, "Construction 2 parameter (defaults to c_p)");
  };

  auto* compile = app.add_subcommand("compile", "compile a built-in sequence to a schedule document");
  common(compile);
  compile_opts(compile);
  compile->add_option("--out", c.out, "schedule document path");

  auto* sim = app.add_subcommand("simulate", "simulate a schedule document or an in-process compile");
  common(sim);
  compile_opts(sim);
  sim->add_option("--schedule", c.schedule, "schedule document to replay");
  sim->add_flag("--verify", c.verify, "recompile from the document provenance and compare");

  auto* sweep = app.add_subcommand("sweep", "run a figure preset or a one-method sweep");
  common(sweep);
  compile_opts(sweep);
  sweep->add_option("--figure", c.figure, "fig3 | fig5 | fig6 | fig8 | fig9");
  sweep->add_option("--axis", c.axis, "T | tp");
  sweep->add_option("--grid", c.grid, "lo:hi:n geometric grid or comma list");
  sweep->add_option("--out", c.out, "output base path (.csv and .json)");
  sweep->add_option("--threads", c.threads, "worker threads")->check(CLI::PositiveNumber);

  auto* mpf = app.add_subcommand("mpf", "hybrid multi-product-formula expectation estimate");
  common(mpf);
  mpf->add_option("--construction", c.construction, "c1 | c2");
  mpf->add_option("--q", c.q, "DCG order for Construction 1");
  mpf->add_flag("--instantaneous", c.instantaneous, "ideal zero-width pulses");
  mpf->add_option("--m", m_list, "comma-separated step counts");
  mpf->add_option("--state", c.state, "computational basis index of rho0");
  mpf->add_option("--observable", c.observable, "Pauli word, e.g. 'X0 X1'");
  mpf->add_option("--out", c.out, "CSV to append to");

  auto* check = app.add_subcommand("check", "first-order residuals of a built-in sequence");
  common(check);

  try {
    app.parse(argc, argv);
    CLI::App* sub = app.get_subcommands().front();
    c.verb = sub->get_name();
    if (!config_path.empty()) apply_config_file(*sub, config_path);
    c.m.clear();
    for (double v : parse_grid(m_list)) c.m.push_back(static_cast<int>(v));
    const bool neg_needed = c.resolved_order() >= 4 && (c.verb == "compile" || c.verb == "simulate");
    if (neg_needed && !c.neg && c.schedule.empty())
      throw ConfigError("order " + std::to_string(c.resolved_order()) + " requires negative-time evolution; choose --neg");
    const bool seed_given = sub->get_option("--seed")->count() > 0;
    if (c.verb == "check") return cmd_check(c);
    if (c.verb == "compile") return cmd_compile(c);
    if (c.verb == "simulate") return cmd_simulate(c);
    if (c.verb == "sweep") return cmd_sweep(c, seed_given);
    return cmd_mpf(c);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << json{{"error", {{"stage", "parse"}, {"kind", "parse"}, {"message", e.what()}}}}.dump() << "\n";
    return kExitParse;
  }
}

int report(const char* kind, const std::exception& e, int code) {
  std::cerr << json{{"error", {{"stage", g_stage}, {"kind", kind}, {"message", e.what()}}}}.dump() << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ConfigError& e) {
    return report("config", e, kExitParse);
  } catch (const PreconditionError& e) {
    return report("precondition", e, kExitPrecondition);
  } catch (const GuardError& e) {
    return report("guard", e, kExitGuard);
  } catch (const std::exception& e) {
    return report("error", e, kExitOther);
  }
}
