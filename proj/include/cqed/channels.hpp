#pragma once

// Single-qubit Markovian channels: Kraus forms, ancilla dilation circuits and
// closed-form solutions. Jump operators: amp = sigma^+ = |0><1| (relaxation),
// exc = sigma^- = |1><0|, dep = sigma_z.

#include <cmath>
#include <vector>

#include "cqed/isa.hpp"

namespace cqed {

enum class ChannelKind { Amp, Exc, Dep };

// Exact: cos(t/2) = e^{-g tau/2} (amp, exc), sin^2(t/2) = (1 - e^{-2 g tau})/2 (dep).
// FirstOrder: t = 2 asin(sqrt(g tau)) for every kind.
enum class AngleFormula { Exact, FirstOrder };

double angle_from_rate(ChannelKind kind, double gamma, double tau,
                       AngleFormula formula = AngleFormula::Exact);
inline double probability_from_angle(double theta) {
  const double s = std::sin(theta / 2);
  return s * s;
}

struct ChannelSpec {
  ChannelKind kind;
  double rate;  // s^-1
  double step;  // s
  AngleFormula formula = AngleFormula::Exact;

  double angle() const { return angle_from_rate(kind, rate, step, formula); }
  double probability() const { return probability_from_angle(angle()); }
};

struct KrausSet {
  std::vector<Matrix> ops;

  double completeness_error() const;
};

KrausSet kraus_ops(ChannelKind kind, double p);
Matrix apply_kraus(const KrausSet& k, const Matrix& rho);

std::vector<GateOp> dilation_circuit(ChannelKind kind, double theta, int system, int ancilla);

struct ChannelRates {
  double amp = 0, exc = 0, dep = 0;

  bool any() const { return amp > 0 || exc > 0 || dep > 0; }
};

// amp, then exc, then dep, each with its own measure + reset of the shared
// ancilla. Zero-rate sub-channels are identities and are left out.
std::vector<GateOp> compose_general_channel(const ChannelRates& rates, double tau, int system,
                                            int ancilla,
                                            AngleFormula formula = AngleFormula::Exact);

// Throws std::invalid_argument unless rho is Hermitian, unit trace and
// positive semidefinite, each to tol.
void validate_density(const Matrix& rho, double tol = 1e-10);

Matrix analytic_density(ChannelKind kind, const Matrix& rho0, double gamma, double t);

}  // namespace cqed
