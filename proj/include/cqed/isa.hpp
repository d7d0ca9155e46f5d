#pragma once

// cQED instruction set: truncated-matrix realizations and a line-oriented IR.
//
// Conventions: R_j(t) = exp(-i t s_j / 2), RXX(t) = exp(-i t/2 XX),
// D(b) = exp(b a^+ - b* a), R(t) = exp(i t n), SNAP(phi) = sum exp(-i phi_n)|n><n|,
// BS(t, p) = exp(-i t/2 (e^{ip} a1^+ a2 + e^{-ip} a1 a2^+)),
// CD(b) = exp(s_z (x) (b a^+ - b* a)), CR(t) = exp(s_z (x) i t n).
// Target order for two-subsystem gates is the local tensor order
// (control first; qubit before qumode for CD/CR).

#include <string>
#include <vector>

#include "cqed/hilbert.hpp"

namespace cqed {

enum class GateKind {
  Rx, Ry, Rz, X, Z, H, CNOT, SWAP, RXX, RYY,
  D, R, SNAP, BS, CD, CR,
  CRy, CZ,  // controlled gates of the dilation circuits
  Measure, Reset,
  AmpDamp, Dephase, PhotonLoss  // stochastic Kraus events (hardware noise)
};

struct GateOp {
  GateKind kind;
  std::vector<int> targets;
  std::vector<double> params;  // complex amplitudes are stored as (re, im)
  std::string tag;              // provenance: Hamiltonian term / step
};

const char* kind_name(GateKind k);
GateKind kind_from_name(const std::string& name);
bool is_unitary_kind(GateKind k);
bool is_noise_kind(GateKind k);

namespace gate {
GateOp rx(int q, double theta);
GateOp ry(int q, double theta);
GateOp rz(int q, double theta);
GateOp x(int q);
GateOp z(int q);
GateOp h(int q);
GateOp cnot(int control, int target);
GateOp swap(int a, int b);
GateOp rxx(int a, int b, double theta);
GateOp ryy(int a, int b, double theta);
GateOp d(int mode, Complex beta);
GateOp r(int mode, double theta);
GateOp snap(int mode, std::vector<double> phases);
GateOp bs(int mode1, int mode2, double theta, double phi);
GateOp cd(int qubit, int mode, Complex beta);
GateOp cr(int qubit, int mode, double theta);
GateOp cry(int control, int target, double theta);
GateOp cz(int control, int target);
GateOp measure(int q);
GateOp reset(int q);
GateOp amp_damp(int q, double p);
GateOp dephase(int q, double p);
GateOp photon_loss(int mode, double p);
}  // namespace gate

// Reduces angles into the nominal ranges (single-qubit/RXX/RYY/BS theta in
// [0, 4pi), R/CR theta in [0, 2pi), BS phi in [0, pi)). The realized unitary
// is unchanged. Throws on non-finite parameters.
void normalize(GateOp& g);

Complex beta_of(const GateOp& g);

// Local unitary on the target subspace; dims are the target dimensions.
Matrix gate_matrix(const GateOp& g, const std::vector<int>& dims);
Matrix gate_matrix(const GateOp& g, const HilbertLayout& layout);

// Checks arity and target kinds against the layout.
void validate_op(const GateOp& g, const HilbertLayout& layout);

std::vector<GateOp> decompose_swap(int a, int b);

// 4 BS + 4 CD stand-in for one CNOT in the cavity-only architecture. Only the
// gate census is meaningful; the parameters are placeholders.
std::vector<GateOp> decompose_cnot_cavity_only(int control_qubit, int control_mode,
                                               int target_qubit, int target_mode);

struct Circuit {
  HilbertLayout layout;
  std::vector<GateOp> ops;

  void append(GateOp g) { ops.push_back(std::move(g)); }
  void append(const std::vector<GateOp>& gs) { ops.insert(ops.end(), gs.begin(), gs.end()); }
};

void validate_circuit(const Circuit& c);

// Dense product of all unitary ops (small layouts only).
Matrix circuit_unitary(const Circuit& c);
Matrix ops_unitary(const std::vector<GateOp>& ops, const HilbertLayout& layout);

// One op per line: KIND target... param... [# tag]; params at 17 significant digits.
std::string to_text(const Circuit& c);
std::vector<GateOp> parse_ops(const std::string& text);

}  // namespace cqed
