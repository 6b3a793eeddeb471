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

#include "hops/trotter.hpp"

#include <cmath>
#include <functional>
#include <set>

namespace hops {

double suzuki_u(int p) {
  if (p < 2) throw PreconditionError("u_p is defined for p >= 2");
  return 1.0 / (4.0 - std::pow(4.0, 1.0 / (2.0 * p - 1.0)));
}

double suzuki_c(int p) {
  if (p < 1) throw PreconditionError("Trotter order parameter p must be >= 1");
  double c = 2.0;
  for (int k = 2; k <= p; ++k) c *= 4.0 - std::pow(4.0, 1.0 / (2.0 * k - 1.0));
  return c;
}

std::vector<double> TrotterPlan::alphas() const {
  std::vector<double> out;
  out.reserve(blocks.size());
  for (const auto& b : blocks) out.push_back(b.alpha);
  return out;
}

TrotterPlan suzuki_plan(int p) {
  if (p < 1) throw PreconditionError("Trotter order parameter p must be >= 1");
  if (p > kMaxSuzukiP) throw GuardError("p is capped at " + std::to_string(kMaxSuzukiP));
  TrotterPlan plan;
  plan.p = p;
  plan.blocks = {TrotterBlock{1.0, {}}};
  for (int k = 2; k <= p; ++k) {
    const double u = suzuki_u(k);
    plan.u.push_back(u);
    std::vector<TrotterBlock> next;
    for (int pos = 0; pos < 5; ++pos) {
      const double factor = pos == 2 ? 1.0 - 4.0 * u : u;
      for (const auto& b : plan.blocks) {
        TrotterBlock nb{b.alpha * factor, {pos}};
        nb.chain.insert(nb.chain.end(), b.chain.begin(), b.chain.end());
        next.push_back(std::move(nb));
      }
    }
    plan.blocks = std::move(next);
  }
  plan.c = suzuki_c(p);
  double exponent = 0.0;
  for (int r = 1; r <= p - 1; ++r) exponent += 1.0 / (2.0 * r + 1.0);
  plan.max_stretch = std::pow(4.0, exponent);
  return plan;
}

namespace {

void check_terms(const std::vector<Operator>& terms) {
  if (terms.empty()) throw PreconditionError("no Trotter terms");
  for (const auto& A : terms) {
    require_same_dim(A, terms.front(), "Trotter terms");
    require_hermitian(A, "Trotter term");
  }
}

}  // namespace

Operator trotter_matrix(const std::vector<Operator>& terms, double t, int order) {
  check_terms(terms);
  std::vector<HermitianPropagator> props;
  for (const auto& A : terms) props.emplace_back(A);
  const int dim = static_cast<int>(terms.front().rows());
  const std::size_t l = terms.size();
  if (order == 1) {
    Operator U = identity(dim);
    for (std::size_t k = 0; k < l; ++k) U = props[k](t) * U;
    return U;
  }
  if (order < 2 || order % 2 != 0) throw PreconditionError("Trotter order must be 1 or even");
  const TrotterPlan plan = suzuki_plan(order / 2);
  Operator U = identity(dim);
  for (const auto& block : plan.blocks) {
    const double h = 0.5 * block.alpha * t;
    // time order: A_l ... A_1 then A_1 ... A_l
    for (std::size_t k = l; k-- > 0;) U = props[k](h) * U;
    for (std::size_t k = 0; k < l; ++k) U = props[k](h) * U;
  }
  return U;
}

double alpha_comm(const std::vector<Operator>& terms, int p) {
  check_terms(terms);
  if (p < 1) throw PreconditionError("alpha_comm needs p >= 1");
  const int depth = 2 * p + 1;
  const double count = std::pow(static_cast<double>(terms.size()), depth);
  if (count > 1e6) throw GuardError("alpha_comm: l^(2p+1) exceeds 1e6 nested commutators");
  double total = 0.0;
  std::function<void(const Operator&, int)> walk = [&](const Operator& inner, int level) {
    if (level == depth) {
      total += operator_norm(inner);
      return;
    }
    for (const auto& A : terms) {
      const Operator next = commutator(A, inner);
      if (max_abs(next) == 0.0) continue;
      walk(next, level + 1);
    }
  };
  for (const auto& A : terms) walk(A, 1);
  return total;
}

double MPFPlan::condition_residual() const {
  double worst = 0.0;
  for (int r = 0; r < p(); ++r) {
    double s = 0.0;
    for (std::size_t j = 0; j < m.size(); ++j) s += b[j] * std::pow(static_cast<double>(m[j]), -2.0 * r);
    worst = std::max(worst, std::abs(s - (r == 0 ? 1.0 : 0.0)));
  }
  return worst;
}

MPFPlan mpf_coefficients(const std::vector<int>& m, const std::vector<Operator>& terms) {
  if (m.empty()) throw PreconditionError("MPF needs at least one step count");
  std::set<int> seen;
  for (int mj : m) {
    if (mj < 1) throw PreconditionError("MPF step counts must be positive");
    if (!seen.insert(mj).second) throw PreconditionError("MPF step counts must be distinct");
  }
  const auto p = static_cast<Eigen::Index>(m.size());
  Eigen::MatrixXd V(p, p);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(p);
  rhs(0) = 1.0;
  for (Eigen::Index r = 0; r < p; ++r)
    for (Eigen::Index j = 0; j < p; ++j)
      V(r, j) = std::pow(static_cast<double>(m[static_cast<std::size_t>(j)]), -2.0 * static_cast<double>(r));
  Eigen::FullPivLU<Eigen::MatrixXd> lu(V);
  if (!lu.isInvertible()) throw PreconditionError("MPF system is singular");
  const Eigen::VectorXd b = lu.solve(rhs);
  MPFPlan plan;
  plan.m = m;
  plan.b.assign(b.data(), b.data() + b.size());
  for (const auto& A : terms) plan.gamma += operator_norm(A);
  if (plan.condition_residual() > 1e-10) throw PreconditionError("MPF coefficients fail the order conditions");
  return plan;
}

}  // namespace hops
