#include "cqed/reference.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

namespace cqed {

void check_density(const Matrix& rho, const DensityTolerances& tol) {
  if (rho.rows() != rho.cols()) throw NumericalError("density matrix is not square");
  const double herm = max_abs(rho - rho.adjoint());
  if (!(herm <= tol.hermiticity))
    throw NumericalError("density matrix not Hermitian: max |rho - rho^+| = " + std::to_string(herm));
  const Complex tr = rho.trace();
  if (!(std::abs(tr - 1.0) <= tol.trace)) {
    std::ostringstream s;
    s << "density matrix trace drifted: tr = " << tr;
    throw NumericalError(s.str());
  }
  const Matrix h = 0.5 * (rho + rho.adjoint());
  const double min_eig = Eigen::SelfAdjointEigenSolver<Matrix>(h, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
  if (!(min_eig >= tol.min_eigenvalue))
    throw NumericalError("density matrix lost positivity: min eigenvalue " + std::to_string(min_eig));
}

void LindbladProblem::validate() const {
  const Eigen::Index n = H.rows();
  if (H.cols() != n || rho0.rows() != n || rho0.cols() != n)
    throw std::invalid_argument("Lindblad problem: dimension mismatch");
  if (n > 64) throw std::invalid_argument("Lindblad problem: dimension above 64");
  if (max_abs(H - H.adjoint()) > 1e-9 * std::max(1.0, max_abs(H)))
    throw std::invalid_argument("Lindblad problem: H is not Hermitian");
  for (const auto& j : jumps) {
    if (j.op.rows() != n || j.op.cols() != n) throw std::invalid_argument("jump operator dimension mismatch");
    if (!(j.rate >= 0)) throw std::invalid_argument("jump rates must be >= 0");
  }
  if (t_grid.empty()) throw std::invalid_argument("empty time grid");
  for (std::size_t k = 1; k < t_grid.size(); ++k)
    if (t_grid[k] < t_grid[k - 1]) throw std::invalid_argument("time grid must be non-decreasing");
  check_density(rho0);
}

Matrix lindblad_rhs(const LindbladProblem& p, const Matrix& rho) {
  Matrix d = -kI * (p.H * rho - rho * p.H);
  for (const auto& j : p.jumps) {
    if (j.rate == 0) continue;
    const Matrix LdL = j.op.adjoint() * j.op;
    d += j.rate * (j.op * rho * j.op.adjoint() - 0.5 * (LdL * rho + rho * LdL));
  }
  return d;
}

namespace {

std::vector<Matrix> rk4_run(const LindbladProblem& p, double h_max) {
  std::vector<Matrix> out{p.rho0};
  Matrix rho = p.rho0;
  for (std::size_t k = 1; k < p.t_grid.size(); ++k) {
    const double span = p.t_grid[k] - p.t_grid[k - 1];
    const long n = span > 0 ? static_cast<long>(std::ceil(span / h_max - 1e-9)) : 0;
    const double h = n > 0 ? span / n : 0.0;
    for (long s = 0; s < n; ++s) {
      const Matrix k1 = lindblad_rhs(p, rho);
      const Matrix k2 = lindblad_rhs(p, rho + 0.5 * h * k1);
      const Matrix k3 = lindblad_rhs(p, rho + 0.5 * h * k2);
      const Matrix k4 = lindblad_rhs(p, rho + h * k3);
      rho += (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    out.push_back(rho);
  }
  return out;
}

double generator_scale(const LindbladProblem& p) {
  double s = 2 * p.H.norm();
  for (const auto& j : p.jumps) s += 2 * j.rate * (j.op.adjoint() * j.op).norm();
  return s;
}

}  // namespace

std::vector<Matrix> lindblad_solve(const LindbladProblem& p, const LindbladOptions& opts) {
  p.validate();
  const double scale = generator_scale(p);
  double h = scale > 0 ? 0.25 / scale : (p.t_grid.back() - p.t_grid.front());
  if (!(h > 0)) h = 1.0;
  std::vector<Matrix> coarse = rk4_run(p, h);
  for (int halving = 0;; ++halving) {
    if (halving >= opts.max_halvings)
      throw NumericalError("Lindblad integration: step-size underflow before reaching tolerance");
    h /= 2;
    std::vector<Matrix> fine = rk4_run(p, h);
    double diff = 0;
    for (std::size_t k = 0; k < fine.size(); ++k) diff = std::max(diff, max_abs(fine[k] - coarse[k]));
    coarse = std::move(fine);
    if (diff < opts.tol) break;
  }
  for (std::size_t k = 0; k < coarse.size(); ++k) {
    try {
      check_density(coarse[k]);
    } catch (const NumericalError& e) {
      throw NumericalError(std::string(e.what()) + " at t = " + std::to_string(p.t_grid[k]) + " s");
    }
  }
  return coarse;
}

namespace {

// One Lanczos step exp(-i H h) psi; returns false when successive Krylov
// approximations still differ by more than tol after max_dim vectors.
bool lanczos_step(const MatVec& H, Vector& psi, double h, const KrylovOptions& opts,
                  std::vector<Vector>& V, Vector& w) {
  const double nrm = psi.norm();
  if (nrm == 0) return true;
  const int m_max = opts.max_dim;
  std::vector<double> alpha, beta;
  V.resize(m_max + 1);
  V[0] = psi / nrm;
  Eigen::VectorXcd y, y_prev;
  int settled = 0;
  for (int j = 0; j < m_max; ++j) {
    H(V[j], w);
    const double a = w.dot(V[j]).real();
    alpha.push_back(a);
    w -= a * V[j];
    if (j > 0) w -= beta[j - 1] * V[j - 1];
    for (int i = 0; i <= j; ++i) w -= V[i].dot(w) * V[i];  // full reorthogonalization
    const double b = w.norm();

    const int m = j + 1;
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
      T(i, i) = alpha[i];
      if (i + 1 < m) T(i, i + 1) = T(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    const Eigen::VectorXd& lam = es.eigenvalues();
    const Eigen::MatrixXd& Q = es.eigenvectors();
    Eigen::VectorXcd c(m);
    for (int i = 0; i < m; ++i) c[i] = std::exp(Complex(0, -lam[i] * h)) * Q(0, i);
    y = Q.cast<Complex>() * c;

    // V is orthonormal, so the change of the state is the change of y.
    if (m >= 2) {
      const double change = (y.head(m - 1) - y_prev).squaredNorm() + std::norm(y[m - 1]);
      settled = std::sqrt(change) < opts.tol ? settled + 1 : 0;
    }
    y_prev = y;
    const bool breakdown = b <= 1e-14 * std::max(1.0, std::abs(a));
    if (breakdown || settled >= 2) {
      psi.setZero();
      for (int i = 0; i < m; ++i) psi += y[i] * V[i];
      psi *= nrm;
      return true;
    }
    beta.push_back(b);
    V[j + 1] = w / b;
  }
  return false;
}

}  // namespace

std::vector<Vector> exact_evolve(const MatVec& H, const Vector& psi0,
                                 const std::vector<double>& t_grid, const KrylovOptions& opts) {
  if (t_grid.empty()) throw std::invalid_argument("empty time grid");
  if (opts.max_dim < 2 || !(opts.max_step > 0)) throw std::invalid_argument("bad Krylov options");
  std::vector<Vector> out{psi0};
  Vector psi = psi0;
  std::vector<Vector> V;
  Vector w(psi0.size());
  for (std::size_t k = 1; k < t_grid.size(); ++k) {
    double remaining = t_grid[k] - t_grid[k - 1];
    if (remaining < 0) throw std::invalid_argument("time grid must be non-decreasing");
    double h = opts.max_step;
    while (remaining > 0) {
      const double step = std::min(h, remaining);
      Vector trial = psi;
      if (lanczos_step(H, trial, step, opts, V, w)) {
        psi = std::move(trial);
        remaining -= step;
        if (remaining < 1e-12 * step) remaining = 0;
      } else {
        h = step / 2;
        if (h < opts.max_step * 1e-6) throw NumericalError("Krylov propagation: tolerance not met");
      }
    }
    if (!psi.allFinite()) throw NumericalError("Krylov propagation produced non-finite amplitudes");
    out.push_back(psi);
  }
  return out;
}

std::vector<Vector> exact_evolve(const SparseMatrix& H, const Vector& psi0,
                                 const std::vector<double>& t_grid, const KrylovOptions& opts) {
  if (H.rows() != psi0.size() || H.cols() != psi0.size())
    throw std::invalid_argument("exact_evolve: dimension mismatch");
  return exact_evolve([&H](const Vector& in, Vector& o) { o.noalias() = H * in; }, psi0, t_grid, opts);
}

std::vector<Vector> dense_evolve(const Matrix& H, const Vector& psi0, const std::vector<double>& t_grid) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (H + H.adjoint()));
  const Vector c0 = es.eigenvectors().adjoint() * psi0;
  std::vector<Vector> out;
  for (double t : t_grid) {
    const double dt = t - t_grid.front();
    Vector c(c0.size());
    for (Eigen::Index i = 0; i < c.size(); ++i) c[i] = std::exp(Complex(0, -es.eigenvalues()[i] * dt)) * c0[i];
    out.push_back(es.eigenvectors() * c);
  }
  return out;
}

PopulationTrace exact_three_site_trace(const EffectiveParams& ep, int n_fock,
                                       const std::vector<double>& t_grid, LowModeSplit split,
                                       const KrylovOptions& opts) {
  const ChainLayout chain = three_site_layout(n_fock, false);
  const SparseMatrix H = build_hamiltonian_terms(ep, chain, split).total();
  std::vector<int> digits(chain.layout.size(), 0);
  digits[chain.sites[kSiteA].qubit] = 1;
  const StateVector psi0 = basis_state(chain.layout, digits);
  const auto states = exact_evolve(H, psi0.amplitudes, t_grid, opts);

  const std::vector<int> qubits{chain.sites[kSiteA].qubit, chain.sites[kSiteB].qubit,
                                chain.sites[kSiteC].qubit};
  PopulationTrace tr;
  tr.times = t_grid;
  tr.labels = {"A", "B", "C"};
  tr.mean.resize(static_cast<Eigen::Index>(states.size()), 3);
  tr.se = Eigen::MatrixXd::Zero(tr.mean.rows(), 3);
  for (std::size_t k = 0; k < states.size(); ++k) {
    const auto p = populations(states[k], chain.layout, qubits);
    for (int r = 0; r < 3; ++r) tr.mean(k, r) = p[r];
  }
  tr.expectation = tr.mean;
  return tr;
}

namespace {

Matrix projector(const HilbertLayout& L, int q, int value) {
  Matrix p = Matrix::Zero(2, 2);
  p(value, value) = 1.0;
  return embed(p, {q}, L);
}

// Kraus operators on the full space for one op.
std::vector<Matrix> full_kraus(const GateOp& g, const HilbertLayout& L) {
  const int t = g.targets.empty() ? -1 : g.targets[0];
  switch (g.kind) {
    case GateKind::Measure:
      return {projector(L, t, 0), projector(L, t, 1)};
    case GateKind::Reset:
      return {projector(L, t, 0), embed(pauli_x(), {t}, L) * projector(L, t, 1)};
    case GateKind::AmpDamp:
    case GateKind::Dephase: {
      const auto ks = kraus_ops(g.kind == GateKind::AmpDamp ? ChannelKind::Amp : ChannelKind::Dep, g.params[0]);
      std::vector<Matrix> out;
      for (const auto& k : ks.ops) out.push_back(embed(k, {t}, L));
      return out;
    }
    case GateKind::PhotonLoss: {
      const int n = L.dim(t);
      const double p = g.params[0];
      Matrix k0 = Matrix::Zero(n, n);
      for (int i = 0; i < n; ++i) k0(i, i) = std::sqrt(std::max(0.0, 1 - p * i));
      return {embed(k0, {t}, L), embed(std::sqrt(p) * annihilation(n), {t}, L)};
    }
    default:
      return {embed(gate_matrix(g, L), g.targets, L)};
  }
}

Matrix apply_all(const std::vector<std::vector<Matrix>>& ops, Matrix rho) {
  for (const auto& ks : ops) {
    if (ks.size() == 1) {
      rho = ks[0] * rho * ks[0].adjoint();
      continue;
    }
    Matrix next = Matrix::Zero(rho.rows(), rho.cols());
    for (const auto& k : ks) next += k * rho * k.adjoint();
    rho = std::move(next);
  }
  return rho;
}

}  // namespace

Eigen::MatrixXd circuit_density_populations(const CompiledProgram& program, const Matrix& rho0) {
  const auto& L = program.layout;
  const auto n = static_cast<Eigen::Index>(L.total_dim());
  if (n > 256) throw std::invalid_argument("density-matrix execution limited to dimension 256");
  if (rho0.rows() != n || rho0.cols() != n) throw std::invalid_argument("rho0 does not match the layout");
  std::vector<std::vector<Matrix>> prep, step;
  for (const auto& g : program.preparation) prep.push_back(full_kraus(g, L));
  for (const auto& g : program.step()) step.push_back(full_kraus(g, L));

  const auto steps = program.readout_steps();
  Eigen::MatrixXd out(steps.size(), program.readout_qubits.size());
  Matrix rho = apply_all(prep, rho0);
  int at = 0;
  for (std::size_t k = 0; k < steps.size(); ++k) {
    for (; at < steps[k]; ++at) rho = apply_all(step, rho);
    for (std::size_t r = 0; r < program.readout_qubits.size(); ++r) {
      double s = 0;
      for (Eigen::Index i = 0; i < n; ++i)
        if (L.digit(static_cast<std::size_t>(i), program.readout_qubits[r])) s += rho(i, i).real();
      out(k, r) = s;
    }
  }
  return out;
}

Eigen::MatrixXd circuit_density_populations(const CompiledProgram& program) {
  const Vector v = vacuum_state(program.layout).amplitudes;
  return circuit_density_populations(program, v * v.adjoint());
}

LindbladProblem spin_boson_problem(const SpinBosonParams& sb, const std::vector<double>& t_grid) {
  const auto rates = lindblad_rates(sb);
  LindbladProblem p;
  p.H = spin_boson_hamiltonian(sb);
  Matrix sp = Matrix::Zero(2, 2), sm = Matrix::Zero(2, 2);
  sp(0, 1) = 1.0;
  sm(1, 0) = 1.0;
  p.jumps = {{sp, rates.relax}, {sm, rates.excite}, {pauli_z(), rates.dephase}};
  Vector plus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  p.rho0 = plus * plus.adjoint();
  p.t_grid = t_grid;
  return p;
}

}  // namespace cqed
