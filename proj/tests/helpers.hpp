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

#include <cmath>
#include <random>
#include <vector>

#include "hops/operator.hpp"

namespace hops::testing {

inline Operator random_hermitian(int dim, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, 1.0);
  Operator A(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) A(i, j) = Complex(g(rng), g(rng));
  return scale * 0.5 * (A + A.adjoint());
}

inline Operator random_unitary(int dim, std::mt19937_64& rng) {
  return hermitian_expm(random_hermitian(dim, rng, 3.0), 1.0);
}

// Scaling-and-squaring Taylor series for exp(-iHt), independent of the
// eigendecomposition route.
inline Operator taylor_expm(const Operator& H, double t, int terms = 40) {
  int s = 0;
  const double norm = H.cwiseAbs().rowwise().sum().maxCoeff() * std::abs(t);
  while (norm / std::pow(2.0, s) > 0.5) ++s;
  const Operator A = Complex(0.0, -t / std::pow(2.0, s)) * H;
  Operator term = Operator::Identity(H.rows(), H.cols());
  Operator sum = term;
  for (int k = 1; k < terms; ++k) {
    term = term * A / static_cast<double>(k);
    sum += term;
  }
  for (int i = 0; i < s; ++i) sum = sum * sum;
  return sum;
}

// Least-squares slope of log(y) against log(x).
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

inline std::vector<double> geomspace(double a, double b, int n) {
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(a * std::pow(b / a, n == 1 ? 0.0 : double(i) / (n - 1)));
  return out;
}

}  // namespace hops::testing
