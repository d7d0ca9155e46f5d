#include "cqed/channels.hpp"

#include <cmath>

namespace cqed {

double angle_from_rate(ChannelKind kind, double gamma, double tau, AngleFormula formula) {
  if (!(gamma >= 0) || !std::isfinite(gamma)) throw std::invalid_argument("rate must be >= 0");
  if (!(tau > 0) || !std::isfinite(tau)) throw std::invalid_argument("step must be > 0");
  const double x = gamma * tau;
  if (formula == AngleFormula::FirstOrder) {
    if (x > 1) throw std::invalid_argument("first-order angle needs gamma * tau <= 1");
    return 2 * std::asin(std::sqrt(x));
  }
  if (kind == ChannelKind::Dep) return 2 * std::asin(std::sqrt(-0.5 * std::expm1(-2 * x)));
  return 2 * std::acos(std::exp(-0.5 * x));
}

double KrausSet::completeness_error() const {
  if (ops.empty()) return 1.0;
  Matrix s = Matrix::Zero(ops.front().cols(), ops.front().cols());
  for (const auto& a : ops) s += a.adjoint() * a;
  return max_abs(s - Matrix::Identity(s.rows(), s.cols()));
}

KrausSet kraus_ops(ChannelKind kind, double p) {
  if (!(p >= 0 && p <= 1)) throw std::invalid_argument("channel probability outside [0,1]");
  Matrix a0 = Matrix::Zero(2, 2), a1 = Matrix::Zero(2, 2);
  switch (kind) {
    case ChannelKind::Amp:
      a0(0, 1) = std::sqrt(p);
      a1(0, 0) = 1.0;
      a1(1, 1) = std::sqrt(1 - p);
      break;
    case ChannelKind::Exc:
      a0(1, 0) = std::sqrt(p);
      a1(0, 0) = std::sqrt(1 - p);
      a1(1, 1) = 1.0;
      break;
    case ChannelKind::Dep:
      a0 = std::sqrt(p) * pauli_z();
      a1 = std::sqrt(1 - p) * Matrix::Identity(2, 2);
      break;
  }
  return {{a0, a1}};
}

Matrix apply_kraus(const KrausSet& k, const Matrix& rho) {
  Matrix out = Matrix::Zero(rho.rows(), rho.cols());
  for (const auto& a : k.ops) out += a * rho * a.adjoint();
  return out;
}

std::vector<GateOp> dilation_circuit(ChannelKind kind, double theta, int system, int ancilla) {
  if (system == ancilla) throw std::invalid_argument("system and ancilla must differ");
  switch (kind) {
    case ChannelKind::Amp:
      return {gate::cry(system, ancilla, theta), gate::cnot(ancilla, system),
              gate::measure(ancilla), gate::reset(ancilla)};
    case ChannelKind::Exc:
      return {gate::x(system), gate::cry(system, ancilla, theta), gate::x(system),
              gate::cnot(ancilla, system), gate::measure(ancilla), gate::reset(ancilla)};
    case ChannelKind::Dep:
      return {gate::ry(ancilla, theta), gate::cz(system, ancilla), gate::measure(ancilla),
              gate::reset(ancilla)};
  }
  return {};
}

std::vector<GateOp> compose_general_channel(const ChannelRates& rates, double tau, int system,
                                            int ancilla, AngleFormula formula) {
  std::vector<GateOp> out;
  auto add = [&](ChannelKind kind, double gamma, const char* tag) {
    if (gamma == 0) return;
    for (auto g : dilation_circuit(kind, angle_from_rate(kind, gamma, tau, formula), system, ancilla)) {
      g.tag = tag;
      out.push_back(std::move(g));
    }
  };
  if (system == ancilla) throw std::invalid_argument("system and ancilla must differ");
  add(ChannelKind::Amp, rates.amp, "diss:amp");
  add(ChannelKind::Exc, rates.exc, "diss:exc");
  add(ChannelKind::Dep, rates.dep, "diss:dep");
  return out;
}

void validate_density(const Matrix& rho, double tol) {
  if (rho.rows() != rho.cols()) throw std::invalid_argument("density matrix must be square");
  if (max_abs(rho - rho.adjoint()) > tol) throw std::invalid_argument("density matrix not Hermitian");
  if (std::abs(rho.trace() - Complex(1.0)) > tol) throw std::invalid_argument("density matrix trace != 1");
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol) throw std::invalid_argument("density matrix not positive");
}

Matrix analytic_density(ChannelKind kind, const Matrix& rho0, double gamma, double t) {
  if (rho0.rows() != 2) throw std::invalid_argument("analytic_density: single-qubit states only");
  validate_density(rho0);
  Matrix r = rho0;
  switch (kind) {
    case ChannelKind::Amp:
      r(1, 1) = std::exp(-gamma * t) * rho0(1, 1);
      r(0, 0) = 1.0 - r(1, 1);
      r(0, 1) *= std::exp(-0.5 * gamma * t);
      r(1, 0) *= std::exp(-0.5 * gamma * t);
      break;
    case ChannelKind::Exc:
      r(0, 0) = std::exp(-gamma * t) * rho0(0, 0);
      r(1, 1) = 1.0 - r(0, 0);
      r(0, 1) *= std::exp(-0.5 * gamma * t);
      r(1, 0) *= std::exp(-0.5 * gamma * t);
      break;
    case ChannelKind::Dep:
      r(0, 1) *= std::exp(-2 * gamma * t);
      r(1, 0) *= std::exp(-2 * gamma * t);
      break;
  }
  return r;
}

}  // namespace cqed
