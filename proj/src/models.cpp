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

#include "hops/models.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "hops/errors.hpp"

namespace hops {
namespace {

constexpr double kPi = 3.14159265358979323846;

struct Factor {
  char axis;
  int site;
};

std::vector<Factor> factors_of(const std::vector<std::string>& words) {
  std::vector<Factor> out;
  for (const auto& w : words) {
    std::istringstream in(w);
    std::string tok;
    while (in >> tok) out.push_back({tok.at(0), std::stoi(tok.substr(1))});
  }
  return out;
}

std::string join(const std::vector<std::string>& words, const char* sep) {
  std::string s;
  for (std::size_t i = 0; i < words.size(); ++i) s += (i ? sep : "") + words[i];
  return s;
}

std::vector<Operator> ideals_of(const std::vector<PulseSpec>& gens) {
  std::vector<Operator> out;
  for (const auto& g : gens) out.push_back(ideal_action(g));
  return out;
}

DecouplingGroup make_group(int n, std::vector<PulseSpec> gens, const std::string& name) {
  auto space = pauli_error_space(n, ideals_of(gens));
  return DecouplingGroup(std::move(gens), std::move(space), name);
}

std::pair<int, int> parse_pair(const std::string& context) {
  auto open = context.find('(');
  auto comma = context.find(',', open);
  return {std::stoi(context.substr(open + 1, comma - open - 1)), std::stoi(context.substr(comma + 1))};
}

// Pair-consistent groups for the Ising model: level 1 uses pi pulses of the
// target's axis on the active pair, deeper levels the full two-qubit Pauli group.
GroupRecipe ising_recipe(std::shared_ptr<PulseFactory> pf) {
  return [pf](const PulseSpec& W, int level, const std::string& context) {
    auto fs = factors_of(pf->words_of(W.generator.get()));
    if (fs.empty()) throw ConfigError("ising recipe: unknown pulse " + W.name);
    char axis = fs.front().axis;
    for (const auto& f : fs) {
      if (f.axis != axis || (axis != 'X' && axis != 'Y'))
        throw ConfigError("ising recipe: unsupported pulse " + W.name);
    }
    std::pair<int, int> ab;
    if (context.rfind("pauli2(", 0) == 0) {
      ab = parse_pair(context);
    } else if (fs.size() == 2) {
      ab = {fs[0].site, fs[1].site};
    } else if (fs.size() == 1) {
      int a = fs[0].site;
      ab = a == 0 ? std::pair{0, 1} : std::pair{a - 1, a};
    } else {
      throw ConfigError("ising recipe: unsupported pulse " + W.name);
    }
    auto [a, b] = ab;
    auto site = [](char ax, int s) { return std::string(1, ax) + std::to_string(s); };
    std::ostringstream name;
    if (level <= 1) {
      name << "ising1 " << axis << "(" << a << "," << b << ")";
      return make_group(pf->qubits(),
                        {pf->rotation({site(axis, a)}, kPi / 2, site(axis, a)),
                         pf->rotation({site(axis, b)}, kPi / 2, site(axis, b))},
                        name.str());
    }
    name << "pauli2(" << a << "," << b << ")";
    std::vector<PulseSpec> gens;
    for (int s : {a, b})
      for (char ax : {'X', 'Y'}) gens.push_back(pf->rotation({site(ax, s)}, kPi / 2, site(ax, s)));
    return make_group(pf->qubits(), std::move(gens), name.str());
  };
}

// Collective Z rotations use {Z0Z1, Z1Z2}, collective Y rotations {Y1, Y2}.
GroupRecipe cr_recipe(std::shared_ptr<PulseFactory> pf) {
  return [pf](const PulseSpec& W, int level, const std::string&) {
    if (level != 1) throw ConfigError("cr recipe: only first-order DCGs are defined");
    auto fs = factors_of(pf->words_of(W.generator.get()));
    if (fs.empty()) throw ConfigError("cr recipe: unknown pulse " + W.name);
    char axis = fs.front().axis;
    for (const auto& f : fs)
      if (f.axis != axis) throw ConfigError("cr recipe: mixed-axis pulse " + W.name);
    if (axis == 'Z') {
      return make_group(pf->qubits(),
                        {pf->rotation({"Z0", "Z1"}, kPi / 2, "Z0Z1"),
                         pf->rotation({"Z1", "Z2"}, kPi / 2, "Z1Z2")},
                        "cr Z");
    }
    if (axis == 'Y') {
      return make_group(pf->qubits(),
                        {pf->rotation({"Y1"}, kPi / 2, "Y1"), pf->rotation({"Y2"}, kPi / 2, "Y2")},
                        "cr Y");
    }
    throw ConfigError("cr recipe: unsupported pulse " + W.name);
  };
}

std::vector<std::vector<PulseSpec>> cr_negtime_cycles(const std::shared_ptr<PulseFactory>& pf) {
  std::vector<PulseSpec> level1;
  for (int s : {2, 1, 2, 1, 1, 2, 1, 2}) {
    auto w = "Y" + std::to_string(s);
    level1.push_back(pf->rotation({w}, kPi / 2, w));
  }
  std::vector<PulseSpec> gens;
  for (int s = 0; s < pf->qubits(); ++s) {
    for (char ax : {'X', 'Y'}) {
      auto w = std::string(1, ax) + std::to_string(s);
      gens.push_back(pf->rotation({w}, kPi / 2, w));
    }
  }
  auto group = make_group(pf->qubits(), gens, "pauli" + std::to_string(pf->qubits()));
  auto graph = cayley_graph(group);
  std::vector<PulseSpec> level2;
  for (auto e : eulerian_cycle(graph)) level2.push_back(gens.at(graph.edges[e].label));
  return {level1, level2};
}

Operator sum_terms(int n, const std::vector<std::pair<std::string, double>>& terms) {
  Operator H = Operator::Zero(Eigen::Index(1) << n, Eigen::Index(1) << n);
  for (const auto& [w, c] : terms) H += pauli(n, w, c);
  return H;
}

std::string pair_word(char ax, int i, int j) {
  return std::string(1, ax) + std::to_string(i) + " " + std::string(1, ax) + std::to_string(j);
}

}  // namespace

std::string to_string(ModelKind m) {
  switch (m) {
    case ModelKind::IsingAllToAll: return "ising_all2all";
    case ModelKind::CrChain: return "cr_chain";
    case ModelKind::HeisenbergChain: return "heisenberg_chain";
  }
  return "?";
}

std::string to_string(SequenceKind s) {
  switch (s) {
    case SequenceKind::VA: return "va";
    case SequenceKind::VB: return "vb";
    case SequenceKind::VC: return "vc";
  }
  return "?";
}

ModelKind parse_model(const std::string& s) {
  if (s == "ising_all2all" || s == "ising") return ModelKind::IsingAllToAll;
  if (s == "cr_chain" || s == "cr") return ModelKind::CrChain;
  if (s == "heisenberg_chain" || s == "heisenberg") return ModelKind::HeisenbergChain;
  throw ConfigError("unknown model: " + s);
}

SequenceKind parse_sequence(const std::string& s) {
  if (s == "va" || s == "VA") return SequenceKind::VA;
  if (s == "vb" || s == "VB") return SequenceKind::VB;
  if (s == "vc" || s == "VC") return SequenceKind::VC;
  throw ConfigError("unknown sequence: " + s);
}

ModelKind default_model(SequenceKind s) {
  switch (s) {
    case SequenceKind::VA: return ModelKind::IsingAllToAll;
    case SequenceKind::VB: return ModelKind::CrChain;
    case SequenceKind::VC: return ModelKind::HeisenbergChain;
  }
  return ModelKind::IsingAllToAll;
}

ModelDef make_model(ModelKind kind, int n, double J, std::uint64_t seed) {
  if (n < 2 || n > kMaxQubits) throw ConfigError("model: qubit count out of range");
  if (!(J > 0.0)) throw ConfigError("model: J must be positive");
  ModelDef m{kind, n, J, seed, {}};
  std::mt19937_64 rng(seed);
  if (kind == ModelKind::IsingAllToAll) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) m.couplings.push_back(u(rng));
  } else if (kind == ModelKind::HeisenbergChain) {
    std::uniform_real_distribution<double> u(0.0, J);
    for (int k = 0; k < 3; ++k) m.couplings.push_back(u(rng));
  }
  return m;
}

ModelDef default_model_def(SequenceKind s, std::uint64_t seed) {
  switch (s) {
    case SequenceKind::VA: return make_model(ModelKind::IsingAllToAll, 3, 1.0, seed);
    case SequenceKind::VB: return make_model(ModelKind::CrChain, 4, 1.0, seed);
    case SequenceKind::VC: return make_model(ModelKind::HeisenbergChain, 4, 1.0, seed);
  }
  return make_model(ModelKind::IsingAllToAll, 3, 1.0, seed);
}

Operator native_hamiltonian(const ModelDef& m) {
  std::vector<std::pair<std::string, double>> terms;
  switch (m.kind) {
    case ModelKind::IsingAllToAll:
      for (int i = 0; i < m.n; ++i)
        for (int j = i + 1; j < m.n; ++j) terms.push_back({pair_word('Z', i, j), m.J});
      break;
    case ModelKind::CrChain:
      for (int i = 0; i + 1 < m.n; ++i)
        terms.push_back({"X" + std::to_string(i) + " Z" + std::to_string(i + 1), m.J});
      break;
    case ModelKind::HeisenbergChain:
      for (int i = 0; i + 1 < m.n; ++i)
        for (char ax : {'X', 'Y', 'Z'}) terms.push_back({pair_word(ax, i, i + 1), m.J});
      break;
  }
  return sum_terms(m.n, terms);
}

Operator target_hamiltonian(const ModelDef& m) {
  std::vector<std::pair<std::string, double>> terms;
  switch (m.kind) {
    case ModelKind::IsingAllToAll: {
      std::size_t k = 0;
      for (int i = 0; i < m.n; ++i)
        for (int j = i + 1; j < m.n; ++j) terms.push_back({pair_word('Z', i, j), m.couplings.at(k++)});
      break;
    }
    case ModelKind::CrChain:
      for (int i = 0; i + 1 < m.n; ++i)
        for (char ax : {'X', 'Y', 'Z'}) terms.push_back({pair_word(ax, i, i + 1), m.J});
      break;
    case ModelKind::HeisenbergChain:
      for (int i = 0; i + 1 < m.n; ++i)
        for (int a = 0; a < 3; ++a) terms.push_back({pair_word("XYZ"[a], i, i + 1), m.couplings.at(a)});
      break;
  }
  return sum_terms(m.n, terms);
}

std::shared_ptr<const Operator> PulseFactory::generator(const std::vector<std::string>& words) {
  auto key = join(words, "+");
  std::lock_guard<std::mutex> lock(mu_);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  Operator G = Operator::Zero(Eigen::Index(1) << n_, Eigen::Index(1) << n_);
  for (const auto& w : words) G += pauli(n_, w);
  auto ptr = std::make_shared<const Operator>(std::move(G));
  cache_.emplace(key, ptr);
  words_.emplace(ptr.get(), words);
  return ptr;
}

std::vector<std::string> PulseFactory::words_of(const Operator* generator) {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = words_.find(generator);
  return it == words_.end() ? std::vector<std::string>{} : it->second;
}

PulseSpec PulseFactory::rotation(const std::vector<std::string>& words, double area,
                                 const std::string& name) {
  return rectangular_pulse(generator(words), area, width_, name);
}

BuiltinSequence builtin_sequence(const ModelDef& model, SequenceKind which, double T, double tp) {
  if (model.kind != default_model(which))
    throw ConfigError("sequence " + to_string(which) + " needs model " + to_string(default_model(which)));
  if (!(tp > 0.0)) throw ConfigError("pulse width must be positive");
  const int n = model.n;
  auto pf = std::make_shared<PulseFactory>(n, tp);
  BuiltinSequence out;
  out.pulses = pf;
  auto& seq = out.sequence;
  seq.H0 = native_hamiltonian(model);
  seq.target = target_hamiltonian(model);
  seq.horizon = T;
  seq.name = to_string(which);
  out.negtime_cycles = [] { return std::vector<std::vector<PulseSpec>>{}; };

  switch (which) {
    case SequenceKind::VA: {
      if (n != 3) throw ConfigError("sequence va needs n = 3");
      const auto& c = model.couplings;  // J01, J02, J12
      auto p01 = single(pf->rotation({"X0", "X1"}, kPi / 2, "X0X1"));
      auto p12 = single(pf->rotation({"X1", "X2"}, kPi / 2, "X1X2"));
      seq.controls = {p01, p12, p01, p12};
      double s = -T / (2.0 * model.J);
      seq.delays = {0.0, s * (c[2] + c[1]), s * (c[0] + c[2]), s * (c[0] + c[1])};
      out.dcg_recipe = ising_recipe(pf);
      // Frames X0, X0X1, X1 flip the signs of every ZZ pair twice out of three.
      out.negtime_cycles = [pf] {
        auto x0 = pf->rotation({"X0"}, kPi / 2, "X0");
        auto x1 = pf->rotation({"X1"}, kPi / 2, "X1");
        return std::vector<std::vector<PulseSpec>>{{x0, x1, x0, x1}};
      };
      break;
    }
    case SequenceKind::VB: {
      std::vector<std::string> ys, zs, y_even, z_even;
      for (int i = 0; i < n; ++i) {
        ys.push_back("Y" + std::to_string(i));
        zs.push_back("Z" + std::to_string(i));
        if (i % 2 == 1) {
          y_even.push_back(ys.back());
          z_even.push_back(zs.back());
        }
      }
      // R_E = exp(-i pi Y/4) exp(-i pi Z/4) and H_even = exp(-i pi Y_even/4) exp(-i pi Z_even/2)
      // up to phase; each Control lists its pulses in time order.
      Control re{"RE", {pf->rotation(zs, kPi / 4, "WZ"), pf->rotation(ys, kPi / 4, "WY")}};
      Control h{"Heven", {pf->rotation(z_even, kPi / 2, "WZeven"), pf->rotation(y_even, kPi / 4, "WYeven")}};
      auto cat = [](std::string name, std::initializer_list<Control> parts) {
        Control c{std::move(name), {}};
        for (const auto& p : parts) c.pulses.insert(c.pulses.end(), p.pulses.begin(), p.pulses.end());
        return c;
      };
      auto red = re.adjoint();
      seq.controls = {cat("P1", {red, h}), cat("P2", {h, re, re, h}), cat("P3", {h, red, h}),
                      cat("P4", {h})};
      seq.delays = {0.0, T, T, T};
      out.dcg_recipe = cr_recipe(pf);
      out.negtime_cycles = [pf] {
        // Shared across sequences: the level-2 cycle takes about a second to build.
        static std::mutex mu;
        static std::map<std::pair<int, double>, std::vector<std::vector<PulseSpec>>> cache;
        std::lock_guard<std::mutex> lock(mu);
        auto& c = cache[{pf->qubits(), pf->width()}];
        if (c.empty()) c = cr_negtime_cycles(pf);
        return c;
      };
      break;
    }
    case SequenceKind::VC: {
      if (n % 2 != 0) throw ConfigError("sequence vc needs an even qubit count");
      std::vector<std::string> xs, ys;
      for (int i = 1; i < n; i += 2) {
        xs.push_back("X" + std::to_string(i));
        ys.push_back("Y" + std::to_string(i));
      }
      auto xb = single(pf->rotation(xs, kPi / 2, "Xbar"));
      auto yb = single(pf->rotation(ys, kPi / 2, "Ybar"));
      seq.controls = {xb, yb, xb, yb, yb, xb, yb, xb};
      const auto& c = model.couplings;  // J_X, J_Y, J_Z
      double js = c[0] + c[1] + c[2];
      double s = T / (4.0 * model.J);
      seq.delays = {s * js, s * c[0], s * c[2], s * c[1], s * js, s * c[1], s * c[2], s * c[0]};
      out.dcg_recipe = [](const PulseSpec& W, int, const std::string&) -> DecouplingGroup {
        throw ConfigError("no DCG groups defined for sequence vc (pulse " + W.name + ")");
      };
      break;
    }
  }
  validate(seq);
  return out;
}

}  // namespace hops
