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
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "hops/dcg.hpp"
#include "hops/operator.hpp"
#include "hops/pulse.hpp"
#include "hops/schedule.hpp"

namespace hops {

enum class ModelKind { IsingAllToAll, CrChain, HeisenbergChain };
enum class SequenceKind { VA, VB, VC };

std::string to_string(ModelKind m);
std::string to_string(SequenceKind s);
ModelKind parse_model(const std::string& s);
SequenceKind parse_sequence(const std::string& s);
ModelKind default_model(SequenceKind s);

struct ModelDef {
  ModelKind kind = ModelKind::IsingAllToAll;
  int n = 3;
  double J = 1.0;
  std::uint64_t seed = 1;
  // Filled by make_model: random J_ij (Ising, upper triangle in row order) or
  // J_X, J_Y, J_Z (Heisenberg).
  std::vector<double> couplings;
};

ModelDef make_model(ModelKind kind, int n, double J, std::uint64_t seed);
ModelDef default_model_def(SequenceKind s, std::uint64_t seed);

Operator native_hamiltonian(const ModelDef& m);
Operator target_hamiltonian(const ModelDef& m);

// Interns generator matrices so equal pulses share one pointer (and hence one
// cache entry in simulate() and DcgLibrary).
class PulseFactory {
 public:
  explicit PulseFactory(int n, double width) : n_(n), width_(width) {}

  // Rotation exp(-i area * sum of the Pauli words).
  PulseSpec rotation(const std::vector<std::string>& words, double area, const std::string& name);
  std::shared_ptr<const Operator> generator(const std::vector<std::string>& words);
  // Words behind an interned generator; empty if unknown.
  std::vector<std::string> words_of(const Operator* generator);
  int qubits() const { return n_; }
  double width() const { return width_; }

 private:
  int n_;
  double width_;
  std::mutex mu_;
  std::map<std::string, std::shared_ptr<const Operator>> cache_;
  std::map<const Operator*, std::vector<std::string>> words_;
};

struct BuiltinSequence {
  FirstOrderSequence sequence;
  std::shared_ptr<PulseFactory> pulses;
  GroupRecipe dcg_recipe;
  // Decoupling cycles per level for synthesized negative time, built on first
  // use (empty if the model has none).
  std::function<std::vector<std::vector<PulseSpec>>()> negtime_cycles;
};

BuiltinSequence builtin_sequence(const ModelDef& model, SequenceKind which, double T, double tp);

}  // namespace hops
