#pragma once

// Chemical parameters, the displaced/rotating-frame derivation of the cQED
// parameters, and the effective Hamiltonian terms.
//
// Frequencies are the "converted" Hz values used directly as H/hbar
// coefficients with t in seconds. Spin-boson energies are in eV.

#include <string>
#include <vector>

#include "cqed/hilbert.hpp"

namespace cqed {

struct ChromophoreParams {
  double omega_g_a = 4.95e13, omega_e_a = 4.63e13;
  double omega_g_b = 4.98e13, omega_e_b = 4.62e13;
  double omega_g_c = 4.92e13, omega_e_c = 4.65e13;
  double omega_l = 6.00e12;
  double J_AB0 = 3.00e12, J_AC0 = 2.70e12;
  double eta_AB = -0.1, eta_AC = 0.15;
  double S_a = 0.005, S_b = 0.004, S_c = 0.006, S_l = 0.05;
  double gamma_amp_all = 3.15e12, gamma_dep_all = 9.00e11;

  // Throws ConfigError when an invariant fails.
  void validate() const;
};

struct EffectiveParams {
  double omega_a, omega_b, omega_c, omega_l;
  double chi_a, chi_b, chi_c;
  double omega_qa, omega_qb, omega_qc;
  double delta_ab, delta_ac;
  double g_cd_a, g_cd_b, g_cd_c, g_cd_l;
  double g_ab, g_ac, g_abl, g_acl;

  // Row name -> value, in table order.
  std::vector<std::pair<std::string, double>> rows() const;
};

EffectiveParams derive_effective(const ChromophoreParams& cp);

// How the g_cd,l sigma_z^a (l + l^+) coupling is split over the XX and YY terms:
// Quarter puts g/4 in each (the default), Half puts g/2 in each.
enum class LowModeSplit { Quarter, Half };

// Linear chain of chromophore modules. Each site has a high-frequency qubit and
// cavity; sites 1..N-1 (0-based 0..N-2) carry an auxiliary qubit that couples to
// the next site's qubit; interior sites also carry the low-frequency cavity.
// Subsystem order follows the hardware chain:
//   q_0 m_0 x_0 | q_1 m_1 x_1 l_1 | ... | q_{N-1} m_{N-1}
// The auxiliary qubits double as dilation ancillas and SWAP mediators.
struct SiteRoles {
  int qubit = -1;
  int mode = -1;
  int aux_qubit = -1;
  int low_mode = -1;
};

struct ChainLayout {
  HilbertLayout layout;
  std::vector<SiteRoles> sites;
  std::vector<std::string> names;

  std::vector<int> system_qubits() const;
  // Aux qubit adjacent to the site qubit: its own, or the previous site's.
  int ancilla_for(int site) const;
};

// with_aux = false drops the auxiliary qubits (Hamiltonian-only space).
ChainLayout chain_layout(int n_sites, int n_fock, bool with_aux = true);

// Three-site chain with sites ordered (C, A, B): A is the interior site.
inline constexpr int kSiteC = 0, kSiteA = 1, kSiteB = 2;
ChainLayout three_site_layout(int n_fock, bool with_aux = true);

struct HamiltonianTerms {
  SparseMatrix h0, h1, h2xx, h2yy;
  SparseMatrix total() const { return h0 + h1 + h2xx + h2yy; }
};

// Direct construction of the four three-site terms from the effective
// parameters. Layout must come from three_site_layout.
HamiltonianTerms build_hamiltonian_terms(const EffectiveParams& ep, const ChainLayout& chain,
                                         LowModeSplit split = LowModeSplit::Quarter);

struct SiteParams {
  double omega_hi = 0, omega_lo = 0, omega_q = 0, chi = 0, g_cd_hi = 0, g_cd_lo = 0;
};

// Coefficients of the edge between sites k and k+1 as they appear in each
// endpoint's H_2 (the builder applies the 1/2).
struct EdgeParams {
  double g_left = 0, g_right = 0;
  double g_vib_left = 0, g_vib_right = 0;
};

struct MultiSiteParams {
  std::vector<SiteParams> sites;
  std::vector<EdgeParams> edges;  // size N-1

  int n_sites() const { return static_cast<int>(sites.size()); }
  void validate() const;
};

// N = 3 chain (C, A, B) equivalent to the three-site effective Hamiltonian.
MultiSiteParams multisite_from_effective(const EffectiveParams& ep);

HamiltonianTerms build_multisite_site_terms(const MultiSiteParams& mp, const ChainLayout& chain,
                                            int site, LowModeSplit split = LowModeSplit::Quarter);
std::vector<HamiltonianTerms> build_multisite_terms(const MultiSiteParams& mp,
                                                    const ChainLayout& chain,
                                                    LowModeSplit split = LowModeSplit::Quarter);

// Spin-boson bath model.
inline constexpr double kHbarEvS = 6.582e-16;       // eV s
inline constexpr double kBoltzmannEvK = 8.617333262e-5;  // eV / K
inline constexpr double kEvPerWavenumber = 1.239841984e-4;

struct SpinBosonParams {
  double E0 = 0.2;           // eV
  double eta = 0.3;          // eV
  double omega_c_cm = 30.0;  // cm^-1
  double T = 77.0;           // K
  double eta_x = 1.0 / 3, eta_y = 1.0 / 3, eta_z = 1.0 / 3;
  double eta_I = 0.0;  // no jump operator; kept for completeness

  void validate() const;
  bool operator==(const SpinBosonParams&) const = default;
};

struct SpinBosonRates {
  double relax, excite, dephase;  // s^-1
};

double debye_spectral_density(double omega, double eta, double omega_c);
double debye_slope_at_zero(double eta, double omega_c);
SpinBosonRates lindblad_rates(const SpinBosonParams& sb);

// H_S/hbar = -E0 sigma_z / hbar (rad/s) for the one-qubit model.
Matrix spin_boson_hamiltonian(const SpinBosonParams& sb);

}  // namespace cqed

namespace cqed {

// JSON files use the struct field names (omega_g_a, ..., gamma_dep_all).
// Unknown fields are rejected with ConfigError.
ChromophoreParams parse_chromophore_params(const std::string& json_text);
std::string to_json_text(const ChromophoreParams& cp);
ChromophoreParams load_chromophore_params(const std::string& path);

}  // namespace cqed
