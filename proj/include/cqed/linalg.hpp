#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace cqed {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using SparseMatrix = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;

inline constexpr Complex kI{0.0, 1.0};

// Raised for invalid user input (CLI exit code 2).
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Raised when a numerical invariant breaks (CLI exit code 3).
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// exp(-i K) for Hermitian K.
Matrix expm_hermitian(const Matrix& K);

// Kronecker product of a list of local operators, first factor slowest.
Matrix kron(const Matrix& a, const Matrix& b);
Matrix kron(std::initializer_list<Matrix> factors);

Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();
Matrix annihilation(int n_fock);
Matrix number_op(int n_fock);

double max_abs(const Matrix& m);
bool is_unitary(const Matrix& u, double tol = 1e-10);

}  // namespace cqed
