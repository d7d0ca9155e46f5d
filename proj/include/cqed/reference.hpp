#pragma once

// Classical oracles: Lindblad integration for small open systems, Krylov
// propagation for the closed three-site model, and a density-matrix executor
// for small compiled circuits.

#include <functional>
#include <vector>

#include "cqed/channels.hpp"
#include "cqed/compiler.hpp"
#include "cqed/engine.hpp"

namespace cqed {

struct DensityTolerances {
  double hermiticity = 1e-10;
  double trace = 1e-9;
  double min_eigenvalue = -1e-8;
};

// Throws NumericalError with the offending quantity when an invariant fails.
void check_density(const Matrix& rho, const DensityTolerances& tol = {});

struct Jump {
  Matrix op;
  double rate;  // s^-1
};

struct LindbladProblem {
  Matrix H;  // rad/s
  std::vector<Jump> jumps;
  Matrix rho0;
  std::vector<double> t_grid;  // s, non-decreasing

  void validate() const;
};

struct LindbladOptions {
  double tol = 1e-8;      // max change of any output entry under step halving
  int max_halvings = 12;
};

// Fixed-step RK4, halving the step until the outputs change by less than tol.
std::vector<Matrix> lindblad_solve(const LindbladProblem& p, const LindbladOptions& opts = {});

Matrix lindblad_rhs(const LindbladProblem& p, const Matrix& rho);

// out = H in.
using MatVec = std::function<void(const Vector& in, Vector& out)>;

struct KrylovOptions {
  double max_step = 1e-15;  // s
  int max_dim = 30;
  double tol = 1e-12;  // local error estimate per step
};

// psi(t) = exp(-i H t) psi0 at every grid time, by Lanczos with adaptive
// Krylov dimension and step size.
std::vector<Vector> exact_evolve(const MatVec& H, const Vector& psi0,
                                 const std::vector<double>& t_grid, const KrylovOptions& opts = {});
std::vector<Vector> exact_evolve(const SparseMatrix& H, const Vector& psi0,
                                 const std::vector<double>& t_grid, const KrylovOptions& opts = {});

// Eigendecomposition propagation (dense oracle).
std::vector<Vector> dense_evolve(const Matrix& H, const Vector& psi0,
                                 const std::vector<double>& t_grid);

// Excited-state populations of the readout qubits of the chain Hamiltonian
// space (with_aux = false layout) from exact propagation of |site> (x) vacuum.
PopulationTrace exact_three_site_trace(const EffectiveParams& ep, int n_fock,
                                       const std::vector<double>& t_grid,
                                       LowModeSplit split = LowModeSplit::Quarter,
                                       const KrylovOptions& opts = {});

// Non-selective density-matrix execution of a compiled program (measure and
// reset average over outcomes, noise ops apply their Kraus maps). Returns
// excited-state populations of the readout qubits at every readout step.
Eigen::MatrixXd circuit_density_populations(const CompiledProgram& program, const Matrix& rho0);
Eigen::MatrixXd circuit_density_populations(const CompiledProgram& program);

// Spin-boson Lindblad problem: H_S, jumps sigma^+,
// sigma^-, sigma_z with the model rates, rho0 = |+><+|.
LindbladProblem spin_boson_problem(const SpinBosonParams& sb, const std::vector<double>& t_grid);

}  // namespace cqed
