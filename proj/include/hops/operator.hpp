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

#include <Eigen/Dense>

#include <complex>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "hops/errors.hpp"

namespace hops {

template <typename Scalar>
using DenseOperator =
    Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

using Complex = std::complex<double>;
using Operator = DenseOperator<double>;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kUnitaryTol = 1e-10;
inline constexpr int kMaxQubits = 12;

enum class Axis { X, Y, Z };

struct PauliString {
  int n = 0;
  std::map<int, Axis> factors;
  double coefficient = 1.0;

  // Parses words such as "X0 Z1" or "X0Z1". An empty word is the identity.
  static PauliString parse(int n, std::string_view word, double coefficient = 1.0);
  std::string to_string() const;
};

Operator identity(int dim);
int qubit_count(const Operator& A);

Operator pauli_matrix(const std::vector<PauliString>& terms);
Operator pauli_matrix(const PauliString& term);
// Shorthand for pauli_matrix(PauliString::parse(n, word, coefficient)).
Operator pauli(int n, std::string_view word, double coefficient = 1.0);

template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& A) {
  return A.size() == 0 ? 0.0 : A.cwiseAbs().maxCoeff();
}

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& A, double tol = kHermitianTol) {
  if (A.rows() != A.cols()) return false;
  const double scale = std::max(1.0, max_abs(A));
  return max_abs(A - A.adjoint()) < tol * scale;
}

template <typename Derived>
bool is_unitary(const Eigen::MatrixBase<Derived>& U, double tol = kUnitaryTol) {
  if (U.rows() != U.cols()) return false;
  const Operator eye = Operator::Identity(U.rows(), U.cols());
  return max_abs(U.adjoint() * U - eye) < tol;
}

template <typename Derived>
double operator_norm(const Eigen::MatrixBase<Derived>& A) {
  if (A.size() == 0) return 0.0;
  Eigen::JacobiSVD<Operator> svd(A.eval());
  return svd.singularValues()(0);
}

template <typename DA, typename DB>
Operator commutator(const Eigen::MatrixBase<DA>& A, const Eigen::MatrixBase<DB>& B) {
  return A * B - B * A;
}

// Throws PreconditionError unless A is Hermitian.
void require_hermitian(const Operator& A, std::string_view what);
void require_unitary(const Operator& A, std::string_view what, double tol = kUnitaryTol);
void require_same_dim(const Operator& A, const Operator& B, std::string_view what);

// exp(-iHt) via the Hermitian eigendecomposition; t may be negative.
Operator hermitian_expm(const Operator& H, double t);

// Cached eigensystem for repeated exp(-iHt) at many t.
class HermitianPropagator {
 public:
  HermitianPropagator() = default;
  explicit HermitianPropagator(const Operator& H);

  Operator operator()(double t) const;
  double norm() const;
  const Operator& hamiltonian() const { return h_; }

 private:
  Operator h_;
  Operator vectors_;
  Eigen::VectorXd values_;
};

// 1 - |Tr(U^dag V)| / dim, evaluated from the eigenphases of U^dag V so that
// values far below machine epsilon stay resolved.
double infidelity(const Operator& U, const Operator& V);

// ||U - e^{i phi} V|| with phi aligning the traces.
double phase_aligned_distance(const Operator& U, const Operator& V);

// Hermitian Phi on the principal branch with U = exp(-i Phi).
Operator unitary_log(const Operator& U);

// Symmetrize away rounding drift.
inline Operator hermitian_part(const Operator& A) { return 0.5 * (A + A.adjoint()); }

}  // namespace hops
