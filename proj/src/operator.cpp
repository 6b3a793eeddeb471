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

#include "hops/operator.hpp"

#include <Eigen/Eigenvalues>

#include <cctype>
#include <cmath>
#include <sstream>

namespace hops {

namespace {

Axis parse_axis(char c) {
  switch (std::toupper(static_cast<unsigned char>(c))) {
    case 'X': return Axis::X;
    case 'Y': return Axis::Y;
    case 'Z': return Axis::Z;
    default: throw PreconditionError(std::string("unknown Pauli axis '") + c + "'");
  }
}

char axis_char(Axis a) { return a == Axis::X ? 'X' : (a == Axis::Y ? 'Y' : 'Z'); }

void check_qubits(int n) {
  if (n < 0) throw PreconditionError("negative qubit count");
  if (n > kMaxQubits)
    throw GuardError("dense operators are capped at " + std::to_string(kMaxQubits) +
                     " qubits, got " + std::to_string(n));
}

}  // namespace

PauliString PauliString::parse(int n, std::string_view word, double coefficient) {
  check_qubits(n);
  PauliString p;
  p.n = n;
  p.coefficient = coefficient;
  std::size_t i = 0;
  while (i < word.size()) {
    if (std::isspace(static_cast<unsigned char>(word[i]))) {
      ++i;
      continue;
    }
    const Axis axis = parse_axis(word[i++]);
    std::size_t j = i;
    while (j < word.size() && std::isdigit(static_cast<unsigned char>(word[j]))) ++j;
    if (j == i) throw PreconditionError("Pauli factor without site index in '" + std::string(word) + "'");
    const int site = std::stoi(std::string(word.substr(i, j - i)));
    if (site >= n) throw PreconditionError("Pauli site " + std::to_string(site) + " out of range");
    if (p.factors.count(site)) throw PreconditionError("repeated Pauli site " + std::to_string(site));
    p.factors[site] = axis;
    i = j;
  }
  return p;
}

std::string PauliString::to_string() const {
  std::ostringstream os;
  os << coefficient;
  if (factors.empty()) os << "*I";
  for (const auto& [site, axis] : factors) os << '*' << axis_char(axis) << site;
  return os.str();
}

Operator identity(int dim) { return Operator::Identity(dim, dim); }

int qubit_count(const Operator& A) {
  const auto d = static_cast<std::size_t>(A.rows());
  if (d == 0 || (d & (d - 1)) != 0 || A.cols() != A.rows())
    throw PreconditionError("operator dimension is not a power of two");
  int n = 0;
  while ((std::size_t{1} << n) < d) ++n;
  return n;
}

Operator pauli_matrix(const std::vector<PauliString>& terms) {
  if (terms.empty()) throw PreconditionError("pauli_matrix needs at least one term");
  const int n = terms.front().n;
  check_qubits(n);
  const Eigen::Index dim = Eigen::Index{1} << n;
  Operator out = Operator::Zero(dim, dim);
  const Complex I(0.0, 1.0);
  for (const auto& term : terms) {
    if (term.n != n) throw PreconditionError("Pauli terms act on different qubit counts");
    std::size_t flip = 0;
    for (const auto& [site, axis] : term.factors) {
      if (site < 0 || site >= n) throw PreconditionError("Pauli site out of range");
      if (axis != Axis::Z) flip |= std::size_t{1} << (n - 1 - site);
    }
    for (Eigen::Index col = 0; col < dim; ++col) {
      Complex phase = term.coefficient;
      for (const auto& [site, axis] : term.factors) {
        const bool bit = (static_cast<std::size_t>(col) >> (n - 1 - site)) & 1U;
        if (axis == Axis::Y) phase *= bit ? -I : I;
        if (axis == Axis::Z && bit) phase = -phase;
      }
      out(static_cast<Eigen::Index>(static_cast<std::size_t>(col) ^ flip), col) += phase;
    }
  }
  return out;
}

Operator pauli_matrix(const PauliString& term) { return pauli_matrix(std::vector<PauliString>{term}); }

Operator pauli(int n, std::string_view word, double coefficient) {
  return pauli_matrix(PauliString::parse(n, word, coefficient));
}

void require_hermitian(const Operator& A, std::string_view what) {
  if (!is_hermitian(A)) throw PreconditionError(std::string(what) + " is not Hermitian");
}

void require_unitary(const Operator& A, std::string_view what, double tol) {
  if (!is_unitary(A, tol)) throw PreconditionError(std::string(what) + " is not unitary");
}

void require_same_dim(const Operator& A, const Operator& B, std::string_view what) {
  if (A.rows() != B.rows() || A.cols() != B.cols())
    throw PreconditionError(std::string(what) + ": dimension mismatch (" + std::to_string(A.rows()) +
                            " vs " + std::to_string(B.rows()) + ")");
}

HermitianPropagator::HermitianPropagator(const Operator& H) : h_(H) {
  require_hermitian(H, "generator");
  Eigen::SelfAdjointEigenSolver<Operator> es(hermitian_part(H));
  vectors_ = es.eigenvectors();
  values_ = es.eigenvalues();
}

Operator HermitianPropagator::operator()(double t) const {
  if (t == 0.0) return identity(static_cast<int>(h_.rows()));
  Eigen::VectorXcd phases(values_.size());
  for (Eigen::Index i = 0; i < values_.size(); ++i) phases(i) = std::polar(1.0, -values_(i) * t);
  return vectors_ * phases.asDiagonal() * vectors_.adjoint();
}

double HermitianPropagator::norm() const {
  return values_.size() == 0 ? 0.0 : values_.cwiseAbs().maxCoeff();
}

Operator hermitian_expm(const Operator& H, double t) { return HermitianPropagator(H)(t); }

double infidelity(const Operator& U, const Operator& V) {
  require_same_dim(U, V, "infidelity");
  require_unitary(U, "infidelity argument U", 1e-8);
  require_unitary(V, "infidelity argument V", 1e-8);
  const Operator W = U.adjoint() * V;
  Eigen::ComplexEigenSolver<Operator> es(W, false);
  const Eigen::VectorXcd& lambda = es.eigenvalues();
  const auto d = static_cast<double>(W.rows());
  std::vector<double> phi(static_cast<std::size_t>(lambda.size()));
  Complex mean = 0.0;
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    phi[static_cast<std::size_t>(i)] = std::arg(lambda(i));
    mean += std::polar(1.0, phi[static_cast<std::size_t>(i)]);
  }
  mean /= d;
  // 1 - |m|^2 as a sum of squared half-angle sines, then 1 - |m|.
  double spread = 0.0;
  for (std::size_t j = 0; j < phi.size(); ++j)
    for (std::size_t k = j + 1; k < phi.size(); ++k) {
      const double s = std::sin(0.5 * (phi[j] - phi[k]));
      spread += 4.0 * s * s;
    }
  const double one_minus_sq = spread / (d * d);
  return one_minus_sq / (1.0 + std::abs(mean));
}

double phase_aligned_distance(const Operator& U, const Operator& V) {
  require_same_dim(U, V, "phase_aligned_distance");
  const Complex tr = (V.adjoint() * U).trace();
  const Complex phase = std::abs(tr) > 0 ? tr / std::abs(tr) : Complex(1.0);
  return operator_norm(U - phase * V);
}

Operator unitary_log(const Operator& U) {
  require_unitary(U, "unitary_log argument", 1e-8);
  Eigen::ComplexSchur<Operator> schur(U);
  const Operator& Q = schur.matrixU();
  const Operator& T = schur.matrixT();
  Eigen::VectorXcd logs(T.rows());
  for (Eigen::Index i = 0; i < T.rows(); ++i) logs(i) = Complex(0.0, std::arg(T(i, i)));
  // U = exp(-i Phi)  =>  Phi = i log U
  const Operator phi = Complex(0.0, 1.0) * (Q * logs.asDiagonal() * Q.adjoint());
  return hermitian_part(phi);
}

}  // namespace hops
