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

#include "hops/pulse.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace hops {

namespace {

void check_generator(const std::shared_ptr<const Operator>& g) {
  if (!g) throw PreconditionError("pulse has no generator");
  require_hermitian(*g, "pulse generator");
}

void check_width(double width) {
  if (!(width > 0.0) || !std::isfinite(width)) throw PreconditionError("pulse width must be positive");
}

}  // namespace

PulseSpec rectangular_pulse(std::shared_ptr<const Operator> generator, double area, double width,
                            std::string name) {
  check_generator(generator);
  check_width(width);
  PulseSpec p;
  p.generator = std::move(generator);
  p.name = std::move(name);
  p.area = area;
  p.width = width;
  return p;
}

PulseSpec rectangular_pulse(const Operator& generator, double area, double width, std::string name) {
  return rectangular_pulse(std::make_shared<const Operator>(generator), area, width, std::move(name));
}

PulseSpec sampled_pulse(const Operator& generator, std::vector<Sample> samples, double width,
                        std::string name) {
  auto g = std::make_shared<const Operator>(generator);
  check_generator(g);
  check_width(width);
  if (samples.empty() || samples.front().time != 0.0)
    throw PreconditionError("sampled envelope must start at t = 0");
  double area = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double end = i + 1 < samples.size() ? samples[i + 1].time : width;
    if (!(end > samples[i].time)) throw PreconditionError("sample times must increase inside the window");
    area += samples[i].amplitude * (end - samples[i].time);
  }
  PulseSpec p;
  p.generator = std::move(g);
  p.name = std::move(name);
  p.samples = std::make_shared<const std::vector<Sample>>(std::move(samples));
  p.area = area;
  p.width = width;
  return p;
}

PulseSpec stretch_pulse(const PulseSpec& p, double c) {
  if (!(c >= 1.0)) throw PreconditionError("stretch factor must be >= 1");
  PulseSpec out = p;
  out.stretch = p.stretch * c;
  return out;
}

PulseSpec reverse_pulse(const PulseSpec& p) {
  PulseSpec out = p;
  out.reversed = !p.reversed;
  return out;
}

PulseSpec with_width(const PulseSpec& p, double width) {
  check_width(width);
  PulseSpec out = p;
  if (!p.rectangular()) {
    std::vector<Sample> scaled = *p.samples;
    const double r = width / p.width;
    for (auto& s : scaled) {
      s.time *= r;
      s.amplitude /= r;
    }
    out.samples = std::make_shared<const std::vector<Sample>>(std::move(scaled));
  }
  out.width = width;
  return out;
}

std::vector<ControlPiece> control_pieces(const PulseSpec& p) {
  std::vector<ControlPiece> pieces;
  const double c = p.stretch;
  if (p.rectangular()) {
    pieces.push_back({c * p.width, p.area / p.width / c});
  } else {
    const auto& s = *p.samples;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double end = i + 1 < s.size() ? s[i + 1].time : p.width;
      pieces.push_back({c * (end - s[i].time), s[i].amplitude / c});
    }
  }
  if (p.reversed) {
    std::reverse(pieces.begin(), pieces.end());
    for (auto& piece : pieces) piece.amplitude = -piece.amplitude;
  }
  return pieces;
}

double envelope_integral(const PulseSpec& p) {
  double total = 0.0;
  for (const auto& piece : control_pieces(p)) total += piece.duration * piece.amplitude;
  return total;
}

Operator ideal_action(const PulseSpec& p) {
  check_generator(p.generator);
  return hermitian_expm(*p.generator, p.reversed ? -p.area : p.area);
}

Operator pulse_propagator(const PulseSpec& p, const Operator& H0) {
  check_generator(p.generator);
  require_same_dim(H0, *p.generator, "pulse_propagator");
  Operator U = identity(static_cast<int>(H0.rows()));
  for (const auto& piece : control_pieces(p))
    U = hermitian_expm(H0 + piece.amplitude * *p.generator, piece.duration) * U;
  return U;
}

Operator magnus_first(const PulseSpec& p, const Operator& H0, int nodes) {
  check_generator(p.generator);
  require_same_dim(H0, *p.generator, "magnus_first");
  require_hermitian(H0, "H0");
  if (nodes < 3) throw PreconditionError("Simpson quadrature needs at least 3 nodes");
  if (nodes % 2 == 0) ++nodes;
  Eigen::SelfAdjointEigenSolver<Operator> es(hermitian_part(*p.generator));
  const Operator& V = es.eigenvectors();
  const Eigen::VectorXd& lambda = es.eigenvalues();
  const Operator M = V.adjoint() * H0 * V;
  const Eigen::Index d = M.rows();

  // In the generator eigenbasis U_P(t)^dag H0 U_P(t) has entries
  // M_jk exp(i (lambda_j - lambda_k) theta(t)), theta the accumulated angle.
  const int intervals = nodes - 1;
  Operator total = Operator::Zero(d, d);
  double theta0 = 0.0;
  for (const auto& piece : control_pieces(p)) {
    const double h = piece.duration / intervals;
    Operator Kp = Operator::Zero(d, d);
    for (int n = 0; n <= intervals; ++n) {
      const double w = (n == 0 || n == intervals) ? 1.0 : (n % 2 == 1 ? 4.0 : 2.0);
      const double theta = theta0 + piece.amplitude * h * n;
      for (Eigen::Index j = 0; j < d; ++j)
        for (Eigen::Index k = 0; k < d; ++k)
          Kp(j, k) += w * std::polar(1.0, (lambda(j) - lambda(k)) * theta);
    }
    total += (h / 3.0) * Kp;
    theta0 += piece.amplitude * piece.duration;
  }
  const Operator phi = V * M.cwiseProduct(total) * V.adjoint();
  return hermitian_part(phi);
}

Operator error_action(const PulseSpec& p, const Operator& H0) {
  return unitary_log(ideal_action(p).adjoint() * pulse_propagator(p, H0));
}

bool same_pulse(const PulseSpec& a, const PulseSpec& b) {
  return a.generator == b.generator && a.samples == b.samples && a.area == b.area &&
         a.width == b.width && a.reversed == b.reversed && a.stretch == b.stretch;
}

}  // namespace hops
