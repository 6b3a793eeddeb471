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

#include "hops/dcg.hpp"

#include <cmath>
#include <deque>
#include <sstream>

namespace hops {

namespace {

bool equal_up_to_phase(const Operator& a, const Operator& b) {
  const double d = static_cast<double>(a.rows());
  return std::abs(std::abs((a.adjoint() * b).trace()) - d) < 1e-9 * d;
}

Eigen::VectorXcd vec(const Operator& A) { return Eigen::Map<const Eigen::VectorXcd>(A.data(), A.size()); }

std::string describe(const PulseSpec& p) {
  std::string s = p.name.empty() ? "pulse" : p.name;
  if (p.reversed) s += "^rev";
  return s;
}

}  // namespace

DecouplingGroup::DecouplingGroup(std::vector<PulseSpec> generators, std::vector<Operator> error_space,
                                 std::string name)
    : generators_(std::move(generators)), error_space_(std::move(error_space)), name_(std::move(name)) {
  if (generators_.empty()) throw PreconditionError("decoupling group needs generators");
  const Eigen::Index dim = generators_.front().dim();
  std::vector<Operator> gens;
  for (const auto& p : generators_) {
    if (p.dim() != dim) throw PreconditionError("group generators differ in dimension");
    gens.push_back(ideal_action(p));
  }
  elements_.push_back(identity(static_cast<int>(dim)));
  std::deque<std::size_t> frontier{0};
  while (!frontier.empty()) {
    const std::size_t v = frontier.front();
    frontier.pop_front();
    for (const auto& h : gens) {
      const Operator next = h * elements_[v];
      if (find(next) >= 0) continue;
      if (elements_.size() >= kMaxGroupSize)
        throw GuardError("decoupling group '" + name_ + "' exceeds " + std::to_string(kMaxGroupSize) + " elements");
      elements_.push_back(next);
      frontier.push_back(elements_.size() - 1);
    }
  }
  for (const auto& h : gens) generator_elements_.push_back(static_cast<std::size_t>(find(h)));

  for (const auto& E : error_space_) {
    require_same_dim(E, elements_.front(), "error-space basis");
    require_hermitian(E, "error-space basis element");
  }
  if (!error_space_.empty()) {
    Eigen::MatrixXcd B(dim * dim, static_cast<Eigen::Index>(error_space_.size()));
    for (std::size_t i = 0; i < error_space_.size(); ++i) B.col(static_cast<Eigen::Index>(i)) = vec(error_space_[i]);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(B);
    qr.setThreshold(1e-10);
    const Eigen::Index rank = qr.rank();
    basis_q_ = (qr.householderQ() * Eigen::MatrixXcd::Identity(B.rows(), rank)).eval();
  }
  const double worst = decoupling_residual();
  if (worst >= 1e-9)
    throw PreconditionError("group '" + name_ + "' does not decouple its error space (residual " +
                            std::to_string(worst) + ")");
}

int DecouplingGroup::find(const Operator& U) const {
  for (std::size_t i = 0; i < elements_.size(); ++i)
    if (equal_up_to_phase(elements_[i], U)) return static_cast<int>(i);
  return -1;
}

double DecouplingGroup::membership_residual(const Operator& A) const {
  const double norm = A.norm();
  if (norm == 0.0) return 0.0;
  if (basis_q_.size() == 0) return 1.0;
  const Eigen::VectorXcd v = vec(A);
  return (v - basis_q_ * (basis_q_.adjoint() * v)).norm() / norm;
}

double DecouplingGroup::decoupling_residual() const {
  double worst = 0.0;
  for (const auto& E : error_space_) {
    Operator sum = Operator::Zero(E.rows(), E.cols());
    for (const auto& g : elements_) sum += g.adjoint() * E * g;
    const double scale = static_cast<double>(elements_.size()) * operator_norm(E);
    if (scale > 0) worst = std::max(worst, operator_norm(sum) / scale);
  }
  return worst;
}

std::vector<Operator> pauli_error_space(int n, const std::vector<Operator>& unitaries) {
  std::vector<Operator> out;
  const std::size_t count = std::size_t{1} << (2 * n);
  for (std::size_t code = 1; code < count; ++code) {
    std::string word;
    for (int site = 0; site < n; ++site) {
      const auto a = (code >> (2 * site)) & 3U;
      if (a == 0) continue;
      word += (a == 1 ? 'X' : (a == 2 ? 'Y' : 'Z'));
      word += std::to_string(site);
    }
    const Operator P = pauli(n, word);
    for (const auto& g : unitaries) {
      if (max_abs(P * g + g * P) < 1e-9) {
        out.push_back(P);
        break;
      }
    }
  }
  return out;
}

std::vector<std::size_t> Multigraph::out_degree() const {
  std::vector<std::size_t> d(vertices, 0);
  for (const auto& e : edges) ++d[e.from];
  return d;
}

std::vector<std::size_t> Multigraph::in_degree() const {
  std::vector<std::size_t> d(vertices, 0);
  for (const auto& e : edges) ++d[e.to];
  return d;
}

Multigraph cayley_graph(const DecouplingGroup& group) {
  Multigraph g;
  g.vertices = group.size();
  std::vector<Operator> gens;
  for (const auto& p : group.generators()) gens.push_back(ideal_action(p));
  for (std::size_t v = 0; v < group.size(); ++v) {
    for (std::size_t h = 0; h < gens.size(); ++h) {
      const int to = group.find(gens[h] * group.elements()[v]);
      if (to < 0) throw PreconditionError("group '" + group.name() + "' is not closed");
      g.edges.push_back({v, static_cast<std::size_t>(to), static_cast<int>(h)});
    }
  }
  return g;
}

namespace {

std::vector<std::size_t> hierholzer(const Multigraph& g, std::size_t start) {
  std::vector<std::vector<std::size_t>> out(g.vertices);
  for (std::size_t i = 0; i < g.edges.size(); ++i) out[g.edges[i].from].push_back(i);
  std::vector<std::size_t> next(g.vertices, 0);
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::pair<std::size_t, std::size_t>> stack{{start, kNone}};
  std::vector<std::size_t> trail;
  while (!stack.empty()) {
    const std::size_t v = stack.back().first;
    if (next[v] < out[v].size()) {
      const std::size_t e = out[v][next[v]++];
      stack.emplace_back(g.edges[e].to, e);
    } else {
      if (stack.back().second != kNone) trail.push_back(stack.back().second);
      stack.pop_back();
    }
  }
  std::reverse(trail.begin(), trail.end());
  if (trail.size() != g.edges.size()) throw PreconditionError("graph is not connected");
  return trail;
}

}  // namespace

std::vector<std::size_t> eulerian_cycle(const Multigraph& g, std::size_t start) {
  if (start >= g.vertices) throw PreconditionError("start vertex out of range");
  const auto in = g.in_degree(), out = g.out_degree();
  for (std::size_t v = 0; v < g.vertices; ++v)
    if (in[v] != out[v]) throw PreconditionError("graph is not balanced at vertex " + std::to_string(v));
  return hierholzer(g, start);
}

std::vector<std::size_t> eulerian_path(const Multigraph& g, std::size_t start, std::size_t end) {
  if (start >= g.vertices || end >= g.vertices) throw PreconditionError("path endpoint out of range");
  if (start == end) return eulerian_cycle(g, start);
  const auto in = g.in_degree(), out = g.out_degree();
  for (std::size_t v = 0; v < g.vertices; ++v) {
    const long diff = static_cast<long>(out[v]) - static_cast<long>(in[v]);
    const long want = v == start ? 1 : (v == end ? -1 : 0);
    if (diff != want) throw PreconditionError("graph has no Eulerian trail between the given vertices");
  }
  return hierholzer(g, start);
}

bool is_eulerian_walk(const Multigraph& g, const std::vector<std::size_t>& walk, std::size_t start,
                      bool closed) {
  if (walk.size() != g.edges.size()) return false;
  std::vector<bool> used(g.edges.size(), false);
  std::size_t at = start;
  for (std::size_t e : walk) {
    if (e >= g.edges.size() || used[e] || g.edges[e].from != at) return false;
    used[e] = true;
    at = g.edges[e].to;
  }
  return !closed || at == start;
}

Operator residual_action(const Operator& ideal, const Operator& actual) {
  Operator M = ideal.adjoint() * actual;
  const Complex tr = M.trace();
  if (std::abs(tr) > 0) M *= std::conj(tr) / std::abs(tr);
  Operator phi = unitary_log(M);
  phi -= (phi.trace() / static_cast<double>(phi.rows())) * identity(static_cast<int>(phi.rows()));
  return phi;
}

double dcg_growth_factor(std::size_t d, std::size_t m, int q) {
  const double dd = static_cast<double>(d);
  if (q == 0) return dd * static_cast<double>(m) + 2.0 * (dd - 1.0) + 2.0;
  return dd * static_cast<double>(m) + (dd - 1.0) * (1.0 + balance_stretch(q)) + 3.0;
}

namespace {

void require_member(const DecouplingGroup& group, const Operator& phi, const std::string& what) {
  // Error actions near roundoff carry log noise of order 1e-13 in every
  // direction, so a leak is only reported above an absolute floor as well.
  const double r = group.membership_residual(phi);
  if (r >= kMembershipTol && r * phi.norm() >= kMembershipFloor)
    throw PreconditionError("error of " + what + " leaves the error space of group '" + group.name() +
                            "' (residual " + std::to_string(r) + ")");
}

// Edge labels beyond the generators.
constexpr int kBalanceLoop = -1;
constexpr int kExit = -2;

Multigraph augmented_graph(const DecouplingGroup& group) {
  const Multigraph cay = cayley_graph(group);
  Multigraph g;
  g.vertices = cay.vertices + 1;
  for (std::size_t v = 0; v < cay.vertices; ++v) {
    for (const auto& e : cay.edges)
      if (e.from == v) g.edges.push_back(e);
    if (v != 0) g.edges.push_back({v, v, kBalanceLoop});
  }
  g.edges.push_back({0, cay.vertices, kExit});
  return g;
}

template <typename EmitGen, typename EmitLoop, typename EmitExit>
void walk_augmented(const DecouplingGroup& group, EmitGen gen, EmitLoop loop, EmitExit exit) {
  const Multigraph g = augmented_graph(group);
  for (std::size_t e : eulerian_path(g, 0, g.vertices - 1)) {
    const Edge& edge = g.edges[e];
    if (edge.label == kBalanceLoop)
      loop(edge.from);
    else if (edge.label == kExit)
      exit();
    else
      gen(static_cast<std::size_t>(edge.label), edge.from, edge.to);
  }
}

std::string edge_label(const DecouplingGroup& group, std::size_t h, std::size_t from, std::size_t to, int level) {
  std::ostringstream os;
  os << "dcg" << level << " edge " << describe(group.generators()[h]) << " " << from << "->" << to;
  return os.str();
}

}  // namespace

DcgGate build_first_order_dcg(const PulseSpec& W, const DecouplingGroup& group, const Operator& H0) {
  if (W.dim() != group.dim()) throw PreconditionError("DCG target and group differ in dimension");
  if (H0.size() != 0) {
    require_same_dim(H0, *W.generator, "build_first_order_dcg");
    for (const auto& h : group.generators())
      require_member(group, magnus_first(h, H0), "generator " + describe(h));
    require_member(group, 2.0 * magnus_first(W, H0), "target " + describe(W));
  }
  PulseSchedule balance;
  balance.add_pulse(W, "balance W").add_pulse(reverse_pulse(W), "balance W^rev");
  const SchedulePtr loop = share(std::move(balance));

  PulseSchedule s;
  walk_augmented(
      group, [&](std::size_t h, std::size_t from, std::size_t to) {
        s.add_pulse(group.generators()[h], edge_label(group, h, from, to, 1));
      },
      [&](std::size_t v) { s.add_block(loop, "dcg1 balance I_W at " + std::to_string(v)); },
      [&]() { s.add_pulse(stretch_pulse(W, 2.0), "dcg1 exit W(2tp)"); });

  DcgGate gate;
  gate.target = W;
  gate.order = 1;
  gate.ideal = ideal_action(W);
  gate.schedule = share(std::move(s));
  const auto stats = schedule_stats(*gate.schedule);
  gate.durations = {stats.duration};
  gate.overhead = {stats.duration / W.duration()};
  gate.max_stretch = stats.max_stretch;
  gate.groups = {group.name()};
  const Operator action = schedule_ideal_action(*gate.schedule, W.dim());
  if (!equal_up_to_phase(action, gate.ideal))
    throw PreconditionError("first-order DCG does not implement " + describe(W));
  return gate;
}

DcgGate concatenate_dcg(const DcgGate& W, const DcgGate& Wdag, const DecouplingGroup& group,
                        const std::vector<DcgGate>& gens, const Operator& H0) {
  if (gens.size() != group.generators().size())
    throw PreconditionError("one generator block per group generator is required");
  const int q = W.order;
  if (Wdag.order != q) throw PreconditionError("W and W^dag blocks have different orders");
  for (const auto& g : gens)
    if (g.order != q) throw PreconditionError("generator blocks must share the order of W");

  const double r = balance_stretch(q);
  PulseSchedule loop_s;
  loop_s.add_block(share(stretch_schedule(*W.schedule, r)), "balance W[q](r tau)")
      .add_block(Wdag.schedule, "balance Wdag[q]");
  const SchedulePtr loop = share(std::move(loop_s));
  PulseSchedule exit_s;
  exit_s.add_block(W.schedule, "W*").add_block(Wdag.schedule, "W*").add_block(W.schedule, "W*");
  const SchedulePtr exit = share(std::move(exit_s));

  if (H0.size() != 0) {
    for (std::size_t i = 0; i < gens.size(); ++i)
      require_member(group, residual_action(gens[i].ideal, simulate(*gens[i].schedule, H0)),
                     "generator block " + describe(gens[i].target));
    const Operator dim_id = identity(static_cast<int>(H0.rows()));
    require_member(group, residual_action(dim_id, simulate(*loop, H0)), "balance block I_W");
    require_member(group, residual_action(W.ideal, simulate(*exit, H0)), "balance block W*");
  }

  const int level = q + 1;
  PulseSchedule s;
  walk_augmented(
      group, [&](std::size_t h, std::size_t from, std::size_t to) {
        s.add_block(gens[h].schedule, edge_label(group, h, from, to, level));
      },
      [&](std::size_t v) { s.add_block(loop, "dcg" + std::to_string(level) + " balance I_W at " + std::to_string(v)); },
      [&]() { s.add_block(exit, "dcg" + std::to_string(level) + " exit W*"); });

  DcgGate gate;
  gate.target = W.target;
  gate.order = level;
  gate.ideal = W.ideal;
  gate.schedule = share(std::move(s));
  const auto stats = schedule_stats(*gate.schedule);
  gate.durations = W.durations;
  gate.durations.push_back(stats.duration);
  gate.overhead = W.overhead;
  gate.overhead.push_back(stats.duration / W.duration());
  gate.max_stretch = stats.max_stretch;
  gate.groups = W.groups;
  gate.groups.push_back(group.name());

  bool uniform = std::abs(Wdag.duration() - W.duration()) <= 1e-12 * W.duration();
  for (const auto& g : gens) uniform = uniform && std::abs(g.duration() - W.duration()) <= 1e-12 * W.duration();
  if (uniform) {
    const double law = dcg_growth_factor(group.size(), group.generators().size(), q);
    if (std::abs(gate.overhead.back() - law) > 1e-9 * law)
      throw PreconditionError("DCG duration breaks the growth law");
  }
  const Operator action = schedule_ideal_action(*gate.schedule, W.target.dim());
  if (!equal_up_to_phase(action, gate.ideal))
    throw PreconditionError("order-" + std::to_string(level) + " DCG does not implement " + describe(W.target));
  return gate;
}

DcgLibrary::DcgLibrary(Operator H0, GroupRecipe recipe, bool check)
    : h0_(std::move(H0)), recipe_(std::move(recipe)), check_(check) {}

const DcgGate& DcgLibrary::get(const PulseSpec& W, int order, const std::string& context) {
  if (order < 1) throw PreconditionError("DCG order must be >= 1");
  const Key key{W.generator.get(), W.samples.get(), W.area, W.width, W.reversed, W.stretch, order, context};
  auto it = gates_.find(key);
  if (it != gates_.end()) return *it->second;
  const Operator checked = check_ ? h0_ : Operator();
  const DecouplingGroup group = recipe_(W, order, context);
  DcgGate gate;
  if (order == 1) {
    gate = build_first_order_dcg(W, group, checked);
  } else {
    const DcgGate& lower = get(W, order - 1, group.name());
    const DcgGate& lower_dag = get(reverse_pulse(W), order - 1, group.name());
    std::vector<DcgGate> gens;
    for (const auto& h : group.generators()) gens.push_back(get(h, order - 1, group.name()));
    gate = concatenate_dcg(lower, lower_dag, group, gens, checked);
  }
  return *gates_.emplace(key, std::make_shared<DcgGate>(std::move(gate))).first->second;
}

}  // namespace hops
