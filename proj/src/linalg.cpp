#include "cqed/linalg.hpp"

#include <unsupported/Eigen/KroneckerProduct>

namespace cqed {

Matrix expm_hermitian(const Matrix& K) {
  // Symmetrize first; callers pass generators that are Hermitian up to rounding.
  Matrix h = 0.5 * (K + K.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  if (es.info() != Eigen::Success) throw NumericalError("expm_hermitian: eigensolver failed");
  Vector phases = (-kI * es.eigenvalues().cast<Complex>()).array().exp();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

Matrix kron(const Matrix& a, const Matrix& b) { return Eigen::kroneckerProduct(a, b).eval(); }

Matrix kron(std::initializer_list<Matrix> factors) {
  Matrix out = Matrix::Identity(1, 1);
  for (const auto& f : factors) out = kron(out, f);
  return out;
}

Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Matrix pauli_y() {
  Matrix m(2, 2);
  m << 0, -kI, kI, 0;
  return m;
}

Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

Matrix annihilation(int n_fock) {
  Matrix b = Matrix::Zero(n_fock, n_fock);
  for (int n = 1; n < n_fock; ++n) b(n - 1, n) = std::sqrt(static_cast<double>(n));
  return b;
}

Matrix number_op(int n_fock) {
  Matrix n = Matrix::Zero(n_fock, n_fock);
  for (int k = 0; k < n_fock; ++k) n(k, k) = k;
  return n;
}

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

bool is_unitary(const Matrix& u, double tol) {
  if (u.rows() != u.cols()) return false;
  return max_abs(u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())) < tol;
}

}  // namespace cqed
