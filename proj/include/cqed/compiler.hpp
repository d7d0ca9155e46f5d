#pragma once

// Second-order Trotterization of the effective Hamiltonian into ISA circuits.
//
// Every sub-block emitted here is an exact exponential of one Hamiltonian
// summand; the only approximation is the palindromic product of blocks.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cqed/channels.hpp"
#include "cqed/isa.hpp"
#include "cqed/model.hpp"

namespace cqed {

struct TrotterPlan {
  double tau = 1e-14;  // s
  int n_steps = 200;
  double w1 = 0.0;  // share of H0 moved into the H1 exponential
  double w2 = 0.0;  // share of H0 moved into each of the XX and YY exponentials
  int order = 2;
  LowModeSplit split = LowModeSplit::Quarter;

  void validate() const;
};

// Hardware adjacency of the chain: q_k-m_k, q_k-x_k, x_k-l_k, x_k-q_{k+1}.
struct Topology {
  std::vector<std::pair<int, int>> edges;

  bool adjacent(int a, int b) const;
};

Topology chain_topology(const ChainLayout& chain);

// Throws std::invalid_argument naming the first multi-subsystem op that
// touches a non-adjacent pair.
void validate_connectivity(const std::vector<GateOp>& ops, const Topology& topo);

// Single-site blocks. Angles follow exp(-i H tau) for the named summand.
std::vector<GateOp> compile_h0(const MultiSiteParams& mp, const ChainLayout& chain, double tau,
                               double weight = 1.0);
std::vector<GateOp> compile_h1(const MultiSiteParams& mp, const ChainLayout& chain, double tau);
std::vector<GateOp> compile_h0(const EffectiveParams& ep, const ChainLayout& chain, double tau);
std::vector<GateOp> compile_h1(const EffectiveParams& ep, const ChainLayout& chain, double tau);

// exp(i theta sigma_z(site) (l + l^+)) via SWAP . CD(i theta) . SWAP.
std::vector<GateOp> compile_dispersive_lowfreq(const ChainLayout& chain, int site, double theta);

enum class Neighbor { Next, Prev };

// exp(i theta sigma_x(site) sigma_x(partner) (x) M), M = l + l^+ of the site's
// low mode (with_mode) or the identity. Next uses the CNOT/SWAP route through
// the site's aux qubit; Prev routes through the previous site's aux qubit.
std::vector<GateOp> compile_xx(const ChainLayout& chain, int site, Neighbor n, bool with_mode,
                               double theta);
// Same with sigma_y sigma_y: Rz(-pi/2) on both qubits, XX block, Rz(pi/2).
std::vector<GateOp> compile_yy(const ChainLayout& chain, int site, Neighbor n, bool with_mode,
                               double theta);

struct CompiledProgram {
  HilbertLayout layout;
  std::vector<GateOp> preparation;
  std::vector<GateOp> unitary_layer;      // palindrome
  std::vector<GateOp> dissipation_layer;  // after the unitary layer
  std::size_t forward_half_size = 0;       // ops in the first half of unitary_layer
  std::vector<int> readout_qubits;
  std::vector<std::string> readout_labels;
  double tau = 0.0;
  int n_steps = 0;
  int readout_stride = 1;

  std::vector<GateOp> step() const;
  std::vector<GateOp> forward_half() const;
  // Step indices (0 = initial state) at which populations are read out.
  std::vector<int> readout_steps() const;
  bool is_stochastic() const;
};

struct DissipationSpec {
  std::vector<ChannelRates> site_rates;  // per site, chain order; empty = none
  AngleFormula formula = AngleFormula::Exact;
};

struct ChainProgramOptions {
  int excited_site = -1;           // -1: the first interior site
  std::vector<int> readout_sites;  // empty: all sites in chain order
  int readout_stride = 1;
};

CompiledProgram compile_step(const MultiSiteParams& mp, const ChainLayout& chain,
                             const TrotterPlan& plan, const DissipationSpec& diss = {},
                             const ChainProgramOptions& opts = {});

// Three-site program on three_site_layout(n_fock): initial |A> (x) vacuum,
// readout order (A, B, C). Rates are given in (A, B, C) order.
struct ThreeSiteRates {
  ChannelRates a, b, c;
};

CompiledProgram compile_three_site(const EffectiveParams& ep, int n_fock, const TrotterPlan& plan,
                                   const std::optional<ThreeSiteRates>& rates = std::nullopt,
                                   AngleFormula formula = AngleFormula::Exact,
                                   int readout_stride = 1);

// One system qubit plus ancilla: U = exp(-i H_S tau), then the general
// channel with (relax, excite, dephase) -> (amp, exc, dep). Initial |+>.
CompiledProgram compile_spin_boson(const SpinBosonParams& sb, double tau, int n_steps,
                                   AngleFormula formula = AngleFormula::Exact,
                                   int readout_stride = 1);

struct TrotterErrorReport {
  double alpha_comm;
  double tau_scale;  // 1/sqrt(alpha_comm): the step should be well below this
};

// Nested-commutator bound with spectral norms from power iteration.
TrotterErrorReport trotter_error_coeff(const HamiltonianTerms& terms, double w1 = 0.0,
                                       double w2 = 0.0);

struct GateTally {
  long cnot = 0;  // CNOT-class: CNOT, RXX/RYY, 3 per SWAP
  long cd = 0;
  long snap = 0;  // SNAP and CR
  long bs = 0;
  long single_qubit = 0;
  long single_qumode = 0;  // D, R
  long other = 0;  // measure, reset, noise events, dilation gates

  bool operator==(const GateTally&) const = default;
};

GateTally count_gates(const std::vector<GateOp>& ops);
// Each CNOT-class gate replaced by the 4 BS + 4 CD template.
GateTally count_gates_cavity_only(const std::vector<GateOp>& ops);

enum class Architecture { Transmon, CavityOnly };

struct ResourceReport {
  int n_sites;
  Architecture arch;
  GateTally formula;
  std::optional<GateTally> walked;  // N = 3: tally of the compiled step
};

ResourceReport resource_count(int n_sites, Architecture arch);

}  // namespace cqed
