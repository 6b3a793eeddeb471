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


#include "hops/mpf.hpp"

#include <algorithm>
#include <thread>

#include "hops/errors.hpp"

namespace hops {

namespace {

void require_state(const Operator& rho) {
  require_hermitian(rho, "initial state");
  if (std::abs(rho.trace() - 1.0) > kStateTol) throw PreconditionError("initial state must have unit trace");
  Eigen::SelfAdjointEigenSolver<Operator> es(rho);
  if (es.eigenvalues().minCoeff() < -kStateTol) throw PreconditionError("initial state is not positive semidefinite");
}

double expectation(const Operator& O, const Operator& U, const Operator& rho) {
  return (O * U * rho * U.adjoint()).trace().real();
}

}  // namespace

std::vector<double> mpf_stretching_c2(const MPFPlan& plan) {
  if (plan.m.empty()) throw PreconditionError("empty MPF plan");
  const int mmax = *std::max_element(plan.m.begin(), plan.m.end());
  std::vector<double> out;
  for (int m : plan.m) out.push_back(static_cast<double>(mmax) / m);
  return out;
}

BlockBuilder make_block_builder(Construction which, const FirstOrderSequence& seq, const CompileOptions& opts,
                                const MPFPlan& plan) {
  if (plan.m.empty()) throw PreconditionError("empty MPF plan");
  const int mmax = *std::max_element(plan.m.begin(), plan.m.end());
  const double c = 2.0 * mmax;
  return [which, seq, opts, c](double alpha) { return second_order_block(which, seq, alpha, opts, c); };
}

Operator basis_state(int n, std::size_t index) {
  const Eigen::Index d = Eigen::Index(1) << n;
  if (static_cast<Eigen::Index>(index) >= d) throw PreconditionError("basis index out of range");
  Operator rho = Operator::Zero(d, d);
  rho(static_cast<Eigen::Index>(index), static_cast<Eigen::Index>(index)) = 1.0;
  return rho;
}

MPFResult mpf_estimate(const MPFJob& job, const Operator& H0) {
  const auto& plan = job.plan;
  if (plan.m.empty() || plan.m.size() != plan.b.size()) throw PreconditionError("malformed MPF plan");
  for (int m : plan.m)
    if (m < 1) throw PreconditionError("MPF step counts must be positive");
  if (plan.condition_residual() > 1e-9) throw PreconditionError("MPF coefficients violate the moment conditions");
  if (!job.block) throw ConfigError("MPF job has no block builder");
  if (!(job.horizon > 0.0)) throw PreconditionError("MPF horizon T must be positive");
  require_state(job.rho0);
  require_hermitian(job.observable, "observable");
  if (operator_norm(job.observable) > 1.0 + kStateTol) throw PreconditionError("observable norm exceeds 1");
  require_same_dim(job.rho0, H0, "initial state");
  require_same_dim(job.observable, H0, "observable");

  MPFResult out;
  out.branches.resize(plan.m.size());
  std::vector<std::size_t> negatives(plan.m.size());
  std::vector<std::exception_ptr> errors(plan.m.size());
  auto run = [&](std::size_t j) {
    try {
      const int m = plan.m[j];
      const SchedulePtr block = share(job.block(1.0 / m));
      PulseSchedule branch;
      branch.instantaneous = block->instantaneous;
      for (int r = 0; r < m; ++r) branch.add_block(block, "S2(T/" + std::to_string(m) + ")");
      negatives[j] = schedule_stats(branch).negative_free;
      out.branches[j] = expectation(job.observable, simulate(branch, H0), job.rho0);
    } catch (...) {
      errors[j] = std::current_exception();
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t j = 0; j < plan.m.size(); ++j) pool.emplace_back(run, j);
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  for (std::size_t j = 0; j < plan.m.size(); ++j) {
    out.estimate += plan.b[j] * out.branches[j];
    out.negative_segments += negatives[j];
  }
  out.exact = expectation(job.observable, hermitian_expm(job.target, job.horizon), job.rho0);
  out.error = std::abs(out.estimate - out.exact);
  return out;
}

}  // namespace hops
