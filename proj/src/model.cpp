#include "cqed/model.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace cqed {

namespace {

using json = nlohmann::json;

Matrix quadrature(int n) {
  const Matrix b = annihilation(n);
  return b + b.adjoint();
}

// Field table shared by JSON I/O.
template <class F>
void for_each_field(ChromophoreParams& cp, F&& f) {
  f("omega_g_a", cp.omega_g_a);
  f("omega_e_a", cp.omega_e_a);
  f("omega_g_b", cp.omega_g_b);
  f("omega_e_b", cp.omega_e_b);
  f("omega_g_c", cp.omega_g_c);
  f("omega_e_c", cp.omega_e_c);
  f("omega_l", cp.omega_l);
  f("J_AB0", cp.J_AB0);
  f("J_AC0", cp.J_AC0);
  f("eta_AB", cp.eta_AB);
  f("eta_AC", cp.eta_AC);
  f("S_a", cp.S_a);
  f("S_b", cp.S_b);
  f("S_c", cp.S_c);
  f("S_l", cp.S_l);
  f("gamma_amp_all", cp.gamma_amp_all);
  f("gamma_dep_all", cp.gamma_dep_all);
}

}  // namespace

void ChromophoreParams::validate() const {
  for (double w : {omega_g_a, omega_e_a, omega_g_b, omega_e_b, omega_g_c, omega_e_c, omega_l})
    if (!(w > 0) || !std::isfinite(w)) throw ConfigError("mode frequencies must be positive");
  for (double s : {S_a, S_b, S_c, S_l})
    if (!(s >= 0)) throw ConfigError("Huang-Rhys factors must be non-negative");
  if (S_l > 0.1) throw ConfigError("S_l must lie in [0, 0.1]");
  for (double v : {J_AB0, J_AC0, eta_AB, eta_AC})
    if (!std::isfinite(v)) throw ConfigError("couplings must be finite");
  if (!(gamma_amp_all >= 0) || !(gamma_dep_all >= 0))
    throw ConfigError("dissipation rates must be non-negative");
}

std::vector<std::pair<std::string, double>> EffectiveParams::rows() const {
  return {{"omega_a", omega_a},   {"omega_b", omega_b},   {"omega_c", omega_c},
          {"omega_l", omega_l},   {"chi_a", chi_a},       {"chi_b", chi_b},
          {"chi_c", chi_c},       {"omega_qa", omega_qa}, {"omega_qb", omega_qb},
          {"omega_qc", omega_qc}, {"delta_ab", delta_ab}, {"delta_ac", delta_ac},
          {"g_cd_a", g_cd_a},     {"g_cd_b", g_cd_b},     {"g_cd_c", g_cd_c},
          {"g_cd_l", g_cd_l},     {"g_ab", g_ab},         {"g_ac", g_ac},
          {"g_abl", g_abl},       {"g_acl", g_acl}};
}

EffectiveParams derive_effective(const ChromophoreParams& cp) {
  for (double s : {cp.S_a, cp.S_b, cp.S_c, cp.S_l})
    if (s < 0) throw ConfigError("negative Huang-Rhys factor");
  if (cp.omega_g_a + cp.omega_e_a == 0 || cp.omega_g_b + cp.omega_e_b == 0 ||
      cp.omega_g_c + cp.omega_e_c == 0 || cp.omega_l == 0)
    throw ConfigError("zero mode frequency");

  EffectiveParams ep{};
  ep.omega_a = 0.5 * (cp.omega_g_a + cp.omega_e_a);
  ep.omega_b = 0.5 * (cp.omega_g_b + cp.omega_e_b);
  ep.omega_c = 0.5 * (cp.omega_g_c + cp.omega_e_c);
  ep.omega_l = cp.omega_l;
  for (double w : {ep.omega_a, ep.omega_b, ep.omega_c, ep.omega_l})
    if (w == 0) throw std::invalid_argument("zero mode frequency");

  ep.chi_a = cp.omega_e_a - cp.omega_g_a;
  ep.chi_b = cp.omega_e_b - cp.omega_g_b;
  ep.chi_c = cp.omega_e_c - cp.omega_g_c;

  const double g_a = std::sqrt(cp.S_a) * cp.omega_e_a;
  const double g_b = std::sqrt(cp.S_b) * cp.omega_e_b;
  const double g_c = std::sqrt(cp.S_c) * cp.omega_e_c;
  ep.g_cd_a = g_a * cp.omega_g_a / ep.omega_a;
  ep.g_cd_b = g_b * cp.omega_g_b / ep.omega_b;
  ep.g_cd_c = g_c * cp.omega_g_c / ep.omega_c;
  ep.g_cd_l = std::sqrt(cp.S_l) * cp.omega_l;

  auto shift = [](double omega_e, double S, double chi, double g, double omega) {
    return omega_e * S + chi / 2 + chi * g * g / (4 * omega * omega) - g * g / omega;
  };
  // The low-mode correction enters as g_cd,l^2 / omega_l^2, exactly as derived.
  ep.omega_qa = shift(cp.omega_e_a, cp.S_a, ep.chi_a, g_a, ep.omega_a) + cp.omega_l * cp.S_l -
                ep.g_cd_l * ep.g_cd_l / (ep.omega_l * ep.omega_l);
  ep.omega_qb = shift(cp.omega_e_b, cp.S_b, ep.chi_b, g_b, ep.omega_b);
  ep.omega_qc = shift(cp.omega_e_c, cp.S_c, ep.chi_c, g_c, ep.omega_c);
  ep.delta_ab = ep.omega_qa - ep.omega_qb;
  ep.delta_ac = ep.omega_qa - ep.omega_qc;

  ep.g_ab = cp.J_AB0;
  ep.g_ac = cp.J_AC0;
  ep.g_abl = cp.J_AB0 * cp.eta_AB;
  ep.g_acl = cp.J_AC0 * cp.eta_AC;
  return ep;
}

std::vector<int> ChainLayout::system_qubits() const {
  std::vector<int> q;
  for (const auto& s : sites) q.push_back(s.qubit);
  return q;
}

int ChainLayout::ancilla_for(int site) const {
  const auto& s = sites.at(site);
  if (s.aux_qubit >= 0) return s.aux_qubit;
  if (site > 0 && sites[site - 1].aux_qubit >= 0) return sites[site - 1].aux_qubit;
  throw std::invalid_argument("no auxiliary qubit adjacent to site " + std::to_string(site));
}

ChainLayout chain_layout(int n_sites, int n_fock, bool with_aux) {
  if (n_sites < 2) throw std::invalid_argument("chain needs at least two sites");
  ChainLayout c;
  for (int k = 0; k < n_sites; ++k) {
    const std::string name =
        n_sites == 3 ? std::string(1, "CAB"[k]) : std::to_string(k + 1);
    c.names.push_back(name);
    SiteRoles r;
    r.qubit = c.layout.add_qubit("q" + name);
    r.mode = c.layout.add_qumode(n_fock, "m" + name);
    if (with_aux && k < n_sites - 1) r.aux_qubit = c.layout.add_qubit("x" + name);
    if (k > 0 && k < n_sites - 1) r.low_mode = c.layout.add_qumode(n_fock, "l" + name);
    c.sites.push_back(r);
  }
  return c;
}

ChainLayout three_site_layout(int n_fock, bool with_aux) {
  return chain_layout(3, n_fock, with_aux);
}

HamiltonianTerms build_hamiltonian_terms(const EffectiveParams& ep, const ChainLayout& chain,
                                         LowModeSplit split) {
  if (chain.sites.size() != 3 || chain.sites[kSiteA].low_mode < 0)
    throw std::invalid_argument("build_hamiltonian_terms: not a three-site layout");
  const auto& L = chain.layout;
  const int qa = chain.sites[kSiteA].qubit, qb = chain.sites[kSiteB].qubit,
            qc = chain.sites[kSiteC].qubit;
  const int ma = chain.sites[kSiteA].mode, mb = chain.sites[kSiteB].mode,
            mc = chain.sites[kSiteC].mode, ml = chain.sites[kSiteA].low_mode;
  const int na = L.dim(ma), nb = L.dim(mb), nc = L.dim(mc), nl = L.dim(ml);
  const Matrix X = pauli_x(), Y = pauli_y(), Z = pauli_z();

  HamiltonianTerms t;
  t.h0 = ep.omega_a * embed_sparse(number_op(na), {ma}, L) +
         ep.omega_b * embed_sparse(number_op(nb), {mb}, L) +
         ep.omega_c * embed_sparse(number_op(nc), {mc}, L) +
         ep.omega_l * embed_sparse(number_op(nl), {ml}, L) -
         0.5 * ep.delta_ab * embed_sparse(Z, {qb}, L) -
         0.5 * ep.delta_ac * embed_sparse(Z, {qc}, L);

  auto dispersive = [&](double chi, double g, int q, int m) {
    const int n = L.dim(m);
    return SparseMatrix(-0.5 * chi * embed_sparse(kron(Z, number_op(n)), {q, m}, L) +
                        0.5 * g * embed_sparse(kron(Z, quadrature(n)), {q, m}, L));
  };
  t.h1 = dispersive(ep.chi_a, ep.g_cd_a, qa, ma) + dispersive(ep.chi_b, ep.g_cd_b, qb, mb) +
         dispersive(ep.chi_c, ep.g_cd_c, qc, mc);

  const double low = split == LowModeSplit::Quarter ? 0.25 : 0.5;
  auto coupling = [&](const Matrix& P) {
    return SparseMatrix(
        low * ep.g_cd_l * embed_sparse(kron(Z, quadrature(nl)), {qa, ml}, L) +
        0.5 * ep.g_ab * embed_sparse(kron(P, P), {qa, qb}, L) +
        0.5 * ep.g_ac * embed_sparse(kron(P, P), {qa, qc}, L) +
        0.5 * ep.g_abl * embed_sparse(kron({P, P, quadrature(nl)}), {qa, qb, ml}, L) +
        0.5 * ep.g_acl * embed_sparse(kron({P, P, quadrature(nl)}), {qa, qc, ml}, L));
  };
  t.h2xx = coupling(X);
  t.h2yy = coupling(Y);
  return t;
}

void MultiSiteParams::validate() const {
  const int n = n_sites();
  if (n < 3) throw std::invalid_argument("multi-site model needs N >= 3");
  if (static_cast<int>(edges.size()) != n - 1)
    throw std::invalid_argument("multi-site model needs N-1 edges");
  for (int k : {0, n - 1})
    if (sites[k].omega_lo != 0 || sites[k].g_cd_lo != 0)
      throw std::invalid_argument("boundary sites carry no low-frequency mode");
  if (edges.front().g_vib_left != 0 || edges.back().g_vib_right != 0)
    throw std::invalid_argument("vibronic coupling needs a low-frequency mode on its own site");
}

MultiSiteParams multisite_from_effective(const EffectiveParams& ep) {
  MultiSiteParams mp;
  mp.sites.resize(3);
  mp.sites[kSiteC] = {ep.omega_c, 0, ep.delta_ac, ep.chi_c, ep.g_cd_c, 0};
  mp.sites[kSiteA] = {ep.omega_a, ep.omega_l, 0, ep.chi_a, ep.g_cd_a, ep.g_cd_l};
  mp.sites[kSiteB] = {ep.omega_b, 0, ep.delta_ab, ep.chi_b, ep.g_cd_b, 0};
  // Each endpoint carries the electronic coefficient; only A has a low mode,
  // so it carries the whole vibronic coupling (twice the per-site share).
  mp.edges.resize(2);
  mp.edges[0] = {ep.g_ac, ep.g_ac, 0.0, 2 * ep.g_acl};  // C - A
  mp.edges[1] = {ep.g_ab, ep.g_ab, 2 * ep.g_abl, 0.0};  // A - B
  return mp;
}

HamiltonianTerms build_multisite_site_terms(const MultiSiteParams& mp, const ChainLayout& chain,
                                            int site, LowModeSplit split) {
  mp.validate();
  if (static_cast<int>(chain.sites.size()) != mp.n_sites())
    throw std::invalid_argument("layout/site count mismatch");
  const auto& L = chain.layout;
  const auto& sp = mp.sites.at(site);
  const auto& r = chain.sites.at(site);
  const Matrix X = pauli_x(), Y = pauli_y(), Z = pauli_z();
  const int nh = L.dim(r.mode);

  HamiltonianTerms t;
  t.h0 = sp.omega_hi * embed_sparse(number_op(nh), {r.mode}, L) -
         0.5 * sp.omega_q * embed_sparse(Z, {r.qubit}, L);
  if (r.low_mode >= 0)
    t.h0 += sp.omega_lo * embed_sparse(number_op(L.dim(r.low_mode)), {r.low_mode}, L);
  t.h1 = -0.5 * sp.chi * embed_sparse(kron(Z, number_op(nh)), {r.qubit, r.mode}, L) +
         0.5 * sp.g_cd_hi * embed_sparse(kron(Z, quadrature(nh)), {r.qubit, r.mode}, L);

  const double low = split == LowModeSplit::Quarter ? 0.25 : 0.5;
  auto coupling = [&](const Matrix& P) {
    const auto n = static_cast<Eigen::Index>(L.total_dim());
    SparseMatrix h(n, n);
    if (r.low_mode >= 0)
      h += low * sp.g_cd_lo *
           embed_sparse(kron(Z, quadrature(L.dim(r.low_mode))), {r.qubit, r.low_mode}, L);
    // sigma+ sigma- + h.c. = (XX + YY)/2, and the H_2 coefficient carries 1/2.
    auto edge_term = [&](int other, double g_el, double g_vib) {
      const int q2 = chain.sites[other].qubit;
      if (g_el != 0) h += 0.25 * g_el * embed_sparse(kron(P, P), {r.qubit, q2}, L);
      if (g_vib != 0) {
        if (r.low_mode < 0) throw std::invalid_argument("vibronic term without low mode");
        h += 0.25 * g_vib *
             embed_sparse(kron({P, P, quadrature(L.dim(r.low_mode))}), {r.qubit, q2, r.low_mode}, L);
      }
    };
    if (site > 0) edge_term(site - 1, mp.edges[site - 1].g_right, mp.edges[site - 1].g_vib_right);
    if (site < mp.n_sites() - 1) edge_term(site + 1, mp.edges[site].g_left, mp.edges[site].g_vib_left);
    return h;
  };
  t.h2xx = coupling(X);
  t.h2yy = coupling(Y);
  return t;
}

std::vector<HamiltonianTerms> build_multisite_terms(const MultiSiteParams& mp,
                                                    const ChainLayout& chain, LowModeSplit split) {
  std::vector<HamiltonianTerms> out;
  for (int k = 0; k < mp.n_sites(); ++k) out.push_back(build_multisite_site_terms(mp, chain, k, split));
  return out;
}

void SpinBosonParams::validate() const {
  if (!(T > 0)) throw ConfigError("temperature must be positive");
  if (!(eta >= 0)) throw ConfigError("system-bath coupling must be non-negative");
  for (double w : {E0, omega_c_cm, eta_x, eta_y, eta_z, eta_I})
    if (!std::isfinite(w)) throw ConfigError("spin-boson parameters must be finite");
}

double debye_spectral_density(double omega, double eta, double omega_c) {
  return eta * omega * omega_c / (omega * omega + omega_c * omega_c);
}

double debye_slope_at_zero(double eta, double omega_c) { return eta / omega_c; }

SpinBosonRates lindblad_rates(const SpinBosonParams& sb) {
  sb.validate();
  const double beta = 1.0 / (kBoltzmannEvK * sb.T);
  const double wc = sb.omega_c_cm * kEvPerWavenumber;
  const double w = 2 * sb.E0;
  const double xy = sb.eta_x * sb.eta_x + sb.eta_y * sb.eta_y;
  const double J = debye_spectral_density(w, sb.eta, wc);
  // 1 - e^{-beta w} written with expm1; the excitation row J(-w)/(1 - e^{beta w})
  // equals J(w) e^{-beta w}/(1 - e^{-beta w}).
  const double denom = -std::expm1(-beta * w);
  SpinBosonRates r{};
  r.relax = 2 * xy * J / denom / kHbarEvS;
  r.excite = 2 * xy * J * std::exp(-beta * w) / denom / kHbarEvS;
  r.dephase = sb.eta_z * sb.eta_z * debye_slope_at_zero(sb.eta, wc) / beta / kHbarEvS;
  return r;
}

Matrix spin_boson_hamiltonian(const SpinBosonParams& sb) {
  return -(sb.E0 / kHbarEvS) * pauli_z();
}

ChromophoreParams parse_chromophore_params(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("parameter file: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("parameter file must hold a JSON object");
  ChromophoreParams cp;
  std::size_t known = 0;
  for_each_field(cp, [&](const char* name, double& v) {
    if (j.contains(name)) {
      if (!j[name].is_number()) throw ConfigError(std::string("field ") + name + " must be a number");
      v = j[name].get<double>();
      ++known;
    }
  });
  if (known != j.size()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      bool found = false;
      for_each_field(cp, [&](const char* name, double&) { found |= it.key() == name; });
      if (!found) throw ConfigError("unknown parameter field '" + it.key() + "'");
    }
  }
  cp.validate();
  return cp;
}

std::string to_json_text(const ChromophoreParams& cp_in) {
  ChromophoreParams cp = cp_in;
  json j = json::object();
  for_each_field(cp, [&](const char* name, double& v) { j[name] = v; });
  return j.dump(2);
}

ChromophoreParams load_chromophore_params(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open parameter file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_chromophore_params(ss.str());
}

}  // namespace cqed
