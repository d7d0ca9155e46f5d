#include "cqed/compiler.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace cqed {

namespace {

using std::numbers::pi;

struct Block {
  std::string tag;
  std::vector<GateOp> ops;
};

double low_share(LowModeSplit s) { return s == LowModeSplit::Quarter ? 0.25 : 0.5; }

const SiteRoles& site_at(const ChainLayout& chain, int site) {
  if (site < 0 || site >= static_cast<int>(chain.sites.size()))
    throw std::invalid_argument("site index out of range");
  return chain.sites[site];
}

// Blocks of the forward half step (duration tau / 2).
std::vector<Block> forward_blocks(const MultiSiteParams& mp, const ChainLayout& chain,
                                  const TrotterPlan& plan) {
  const double th = 0.5 * plan.tau;
  const int n = mp.n_sites();
  std::vector<Block> blocks;
  auto push = [&](std::string tag, std::vector<GateOp> ops) {
    if (!ops.empty()) blocks.push_back({std::move(tag), std::move(ops)});
  };

  const double w0 = 1.0 - plan.w1 - 2 * plan.w2;
  if (w0 > 0) push("H0", compile_h0(mp, chain, th, w0));

  if (plan.w1 > 0) push("H1:H0", compile_h0(mp, chain, th, plan.w1));
  for (int k = 0; k < n; ++k) {
    const auto& s = mp.sites[k];
    const auto& r = chain.sites[k];
    if (s.chi != 0) push("H1:CR" + chain.names[k], {gate::cr(r.qubit, r.mode, 0.5 * s.chi * th)});
    if (s.g_cd_hi != 0)
      push("H1:CD" + chain.names[k], {gate::cd(r.qubit, r.mode, Complex(0, -0.5 * s.g_cd_hi * th))});
  }

  for (bool yy : {false, true}) {
    const std::string term = yy ? "YY" : "XX";
    if (plan.w2 > 0) push(term + ":H0", compile_h0(mp, chain, th, plan.w2));
    auto pair_block = [&](int site, Neighbor nb, bool with_mode, double theta) {
      return yy ? compile_yy(chain, site, nb, with_mode, theta)
                : compile_xx(chain, site, nb, with_mode, theta);
    };
    for (int k = 0; k < n; ++k)
      if (chain.sites[k].low_mode >= 0 && mp.sites[k].g_cd_lo != 0)
        push(term + ":low" + chain.names[k],
             compile_dispersive_lowfreq(chain, k, -low_share(plan.split) * mp.sites[k].g_cd_lo * th));
    for (int k = 0; k + 1 < n; ++k) {
      const double c = 0.25 * (mp.edges[k].g_left + mp.edges[k].g_right);
      if (c != 0)
        push(term + ":" + chain.names[k] + chain.names[k + 1],
             pair_block(k, Neighbor::Next, false, -c * th));
    }
    for (int k = 0; k < n; ++k) {
      if (chain.sites[k].low_mode < 0) continue;
      if (k > 0 && mp.edges[k - 1].g_vib_right != 0)
        push(term + ":" + chain.names[k] + chain.names[k - 1] + "l",
             pair_block(k, Neighbor::Prev, true, -0.25 * mp.edges[k - 1].g_vib_right * th));
      if (k + 1 < n && mp.edges[k].g_vib_left != 0)
        push(term + ":" + chain.names[k] + chain.names[k + 1] + "l",
             pair_block(k, Neighbor::Next, true, -0.25 * mp.edges[k].g_vib_left * th));
    }
  }
  return blocks;
}

double spectral_norm_hermitian(const std::function<Vector(const Vector&)>& apply, Eigen::Index n) {
  Rng rng = make_rng(0x5eed, 17);
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = Complex(uniform01(rng) - 0.5, uniform01(rng) - 0.5);
  v.normalize();
  double lambda = 0.0;
  for (int it = 0; it < 5000; ++it) {
    Vector w = apply(apply(v));
    const double next = std::sqrt(w.norm());
    if (next == 0.0) return 0.0;
    v = w / w.norm();
    if (it > 10 && std::abs(next - lambda) <= 1e-12 * next) return next;
    lambda = next;
  }
  return lambda;
}

}  // namespace

void TrotterPlan::validate() const {
  if (!(tau > 0) || !std::isfinite(tau)) throw std::invalid_argument("Trotter step must be > 0");
  if (n_steps < 0) throw std::invalid_argument("step count must be >= 0");
  if (order != 2) throw std::invalid_argument("only the second-order formula is supported");
  if (w1 < 0 || w1 > 1 || w2 < 0 || w2 > 0.5 || w1 + 2 * w2 > 1)
    throw std::invalid_argument("H0 weights out of range");
}

bool Topology::adjacent(int a, int b) const {
  for (const auto& [x, y] : edges)
    if ((x == a && y == b) || (x == b && y == a)) return true;
  return false;
}

Topology chain_topology(const ChainLayout& chain) {
  Topology t;
  const int n = static_cast<int>(chain.sites.size());
  for (int k = 0; k < n; ++k) {
    const auto& r = chain.sites[k];
    t.edges.emplace_back(r.qubit, r.mode);
    if (r.aux_qubit >= 0) {
      t.edges.emplace_back(r.qubit, r.aux_qubit);
      if (r.low_mode >= 0) t.edges.emplace_back(r.aux_qubit, r.low_mode);
      if (k + 1 < n) t.edges.emplace_back(r.aux_qubit, chain.sites[k + 1].qubit);
    }
  }
  return t;
}

void validate_connectivity(const std::vector<GateOp>& ops, const Topology& topo) {
  for (std::size_t i = 0; i < ops.size(); ++i) {
    const auto& g = ops[i];
    for (std::size_t a = 0; a < g.targets.size(); ++a)
      for (std::size_t b = a + 1; b < g.targets.size(); ++b)
        if (!topo.adjacent(g.targets[a], g.targets[b]))
          throw std::invalid_argument("op " + std::to_string(i) + " (" + kind_name(g.kind) +
                                      ") couples non-adjacent subsystems " +
                                      std::to_string(g.targets[a]) + " and " +
                                      std::to_string(g.targets[b]));
  }
}

std::vector<GateOp> compile_h0(const MultiSiteParams& mp, const ChainLayout& chain, double tau,
                               double weight) {
  std::vector<GateOp> ops;
  if (tau == 0 || weight == 0) return ops;
  for (int k = 0; k < mp.n_sites(); ++k) {
    const auto& s = mp.sites[k];
    const auto& r = site_at(chain, k);
    if (s.omega_hi != 0) ops.push_back(gate::r(r.mode, -weight * tau * s.omega_hi));
    if (r.low_mode >= 0 && s.omega_lo != 0)
      ops.push_back(gate::r(r.low_mode, -weight * tau * s.omega_lo));
  }
  for (int k = 0; k < mp.n_sites(); ++k)
    if (mp.sites[k].omega_q != 0)
      ops.push_back(gate::rz(chain.sites[k].qubit, -weight * tau * mp.sites[k].omega_q));
  return ops;
}

std::vector<GateOp> compile_h1(const MultiSiteParams& mp, const ChainLayout& chain, double tau) {
  std::vector<GateOp> ops;
  if (tau == 0) return ops;
  for (int k = 0; k < mp.n_sites(); ++k) {
    const auto& s = mp.sites[k];
    const auto& r = site_at(chain, k);
    if (s.chi != 0) ops.push_back(gate::cr(r.qubit, r.mode, 0.5 * s.chi * tau));
    if (s.g_cd_hi != 0) ops.push_back(gate::cd(r.qubit, r.mode, Complex(0, -0.5 * s.g_cd_hi * tau)));
  }
  return ops;
}

std::vector<GateOp> compile_h0(const EffectiveParams& ep, const ChainLayout& chain, double tau) {
  return compile_h0(multisite_from_effective(ep), chain, tau);
}

std::vector<GateOp> compile_h1(const EffectiveParams& ep, const ChainLayout& chain, double tau) {
  return compile_h1(multisite_from_effective(ep), chain, tau);
}

std::vector<GateOp> compile_dispersive_lowfreq(const ChainLayout& chain, int site, double theta) {
  const auto& r = site_at(chain, site);
  if (r.low_mode < 0 || r.aux_qubit < 0)
    throw std::invalid_argument("site has no low-frequency mode/aux qubit");
  return {gate::swap(r.qubit, r.aux_qubit), gate::cd(r.aux_qubit, r.low_mode, Complex(0, theta)),
          gate::swap(r.qubit, r.aux_qubit)};
}

std::vector<GateOp> compile_xx(const ChainLayout& chain, int site, Neighbor nb, bool with_mode,
                               double theta) {
  const auto& r = site_at(chain, site);
  const int n = static_cast<int>(chain.sites.size());
  if (with_mode && (r.low_mode < 0 || r.aux_qubit < 0))
    throw std::invalid_argument("compile_xx: site has no low-frequency mode");

  if (nb == Neighbor::Next) {
    if (site + 1 >= n || r.aux_qubit < 0) throw std::invalid_argument("compile_xx: no next neighbor");
    const int p = chain.sites[site + 1].qubit, x = r.aux_qubit;
    if (!with_mode) return {gate::swap(x, p), gate::rxx(r.qubit, x, -2 * theta), gate::swap(x, p)};
    return {gate::h(r.qubit), gate::h(p), gate::swap(p, x), gate::cnot(r.qubit, x),
            gate::cd(x, r.low_mode, Complex(0, theta)),
            gate::cnot(r.qubit, x), gate::swap(p, x), gate::h(r.qubit), gate::h(p)};
  }

  if (site == 0 || chain.sites[site - 1].aux_qubit < 0)
    throw std::invalid_argument("compile_xx: no previous neighbor");
  const int p = chain.sites[site - 1].qubit, m = chain.sites[site - 1].aux_qubit;
  if (!with_mode) return {gate::swap(p, m), gate::rxx(m, r.qubit, -2 * theta), gate::swap(p, m)};
  return {gate::h(r.qubit), gate::h(p), gate::swap(p, m), gate::cnot(m, r.qubit),
          gate::swap(r.qubit, r.aux_qubit), gate::cd(r.aux_qubit, r.low_mode, Complex(0, theta)),
          gate::swap(r.qubit, r.aux_qubit), gate::cnot(m, r.qubit), gate::swap(p, m),
          gate::h(r.qubit), gate::h(p)};
}

std::vector<GateOp> compile_yy(const ChainLayout& chain, int site, Neighbor nb, bool with_mode,
                               double theta) {
  const int q = site_at(chain, site).qubit;
  const int p = nb == Neighbor::Next ? site_at(chain, site + 1).qubit : site_at(chain, site - 1).qubit;
  std::vector<GateOp> ops{gate::rz(q, -pi / 2), gate::rz(p, -pi / 2)};
  auto xx = compile_xx(chain, site, nb, with_mode, theta);
  ops.insert(ops.end(), xx.begin(), xx.end());
  ops.push_back(gate::rz(q, pi / 2));
  ops.push_back(gate::rz(p, pi / 2));
  return ops;
}

std::vector<GateOp> CompiledProgram::step() const {
  std::vector<GateOp> ops = unitary_layer;
  ops.insert(ops.end(), dissipation_layer.begin(), dissipation_layer.end());
  return ops;
}

std::vector<GateOp> CompiledProgram::forward_half() const {
  return {unitary_layer.begin(), unitary_layer.begin() + static_cast<long>(forward_half_size)};
}

std::vector<int> CompiledProgram::readout_steps() const {
  std::vector<int> s;
  const int stride = std::max(1, readout_stride);
  for (int k = 0; k <= n_steps; k += stride) s.push_back(k);
  if (s.back() != n_steps) s.push_back(n_steps);
  return s;
}

bool CompiledProgram::is_stochastic() const {
  auto stochastic = [](const GateOp& g) { return !is_unitary_kind(g.kind); };
  return std::any_of(unitary_layer.begin(), unitary_layer.end(), stochastic) ||
         std::any_of(dissipation_layer.begin(), dissipation_layer.end(), stochastic) ||
         std::any_of(preparation.begin(), preparation.end(), stochastic);
}

CompiledProgram compile_step(const MultiSiteParams& mp, const ChainLayout& chain,
                             const TrotterPlan& plan, const DissipationSpec& diss,
                             const ChainProgramOptions& opts) {
  plan.validate();
  mp.validate();
  const int n = mp.n_sites();
  if (static_cast<int>(chain.sites.size()) != n) throw std::invalid_argument("layout/site count mismatch");

  CompiledProgram prog;
  prog.layout = chain.layout;
  prog.tau = plan.tau;
  prog.n_steps = plan.n_steps;
  prog.readout_stride = std::max(1, opts.readout_stride);

  const auto blocks = forward_blocks(mp, chain, plan);
  for (const auto& b : blocks)
    for (auto g : b.ops) {
      g.tag = b.tag;
      prog.unitary_layer.push_back(std::move(g));
    }
  prog.forward_half_size = prog.unitary_layer.size();
  for (auto it = blocks.rbegin(); it != blocks.rend(); ++it)
    for (auto g : it->ops) {
      g.tag = it->tag + "'";
      prog.unitary_layer.push_back(std::move(g));
    }

  if (!diss.site_rates.empty()) {
    if (static_cast<int>(diss.site_rates.size()) != n)
      throw std::invalid_argument("dissipation rates must be given for every site");
    for (int k = 0; k < n; ++k) {
      if (!diss.site_rates[k].any()) continue;
      auto ops = compose_general_channel(diss.site_rates[k], plan.tau, chain.sites[k].qubit,
                                         chain.ancilla_for(k), diss.formula);
      for (auto& g : ops) g.tag += ":" + chain.names[k];
      prog.dissipation_layer.insert(prog.dissipation_layer.end(), ops.begin(), ops.end());
    }
  }

  const int excited = opts.excited_site >= 0 ? opts.excited_site : (n > 2 ? 1 : 0);
  prog.preparation.push_back(gate::x(site_at(chain, excited).qubit));
  prog.preparation.back().tag = "prep";

  std::vector<int> sites = opts.readout_sites;
  if (sites.empty())
    for (int k = 0; k < n; ++k) sites.push_back(k);
  for (int k : sites) {
    prog.readout_qubits.push_back(site_at(chain, k).qubit);
    prog.readout_labels.push_back(chain.names[k]);
  }

  validate_circuit({prog.layout, prog.step()});
  validate_connectivity(prog.step(), chain_topology(chain));
  return prog;
}

CompiledProgram compile_three_site(const EffectiveParams& ep, int n_fock, const TrotterPlan& plan,
                                   const std::optional<ThreeSiteRates>& rates,
                                   AngleFormula formula, int readout_stride) {
  const ChainLayout chain = three_site_layout(n_fock);
  DissipationSpec diss;
  diss.formula = formula;
  if (rates) {
    diss.site_rates.resize(3);
    diss.site_rates[kSiteA] = rates->a;
    diss.site_rates[kSiteB] = rates->b;
    diss.site_rates[kSiteC] = rates->c;
  }
  ChainProgramOptions opts;
  opts.excited_site = kSiteA;
  opts.readout_sites = {kSiteA, kSiteB, kSiteC};
  opts.readout_stride = readout_stride;
  return compile_step(multisite_from_effective(ep), chain, plan, diss, opts);
}

CompiledProgram compile_spin_boson(const SpinBosonParams& sb, double tau, int n_steps,
                                   AngleFormula formula, int readout_stride) {
  if (!(tau > 0)) throw std::invalid_argument("Trotter step must be > 0");
  const auto rates = lindblad_rates(sb);
  CompiledProgram prog;
  const int s = prog.layout.add_qubit("s");
  const int a = prog.layout.add_qubit("anc");
  prog.tau = tau;
  prog.n_steps = n_steps;
  prog.readout_stride = std::max(1, readout_stride);
  prog.preparation = {gate::h(s)};
  prog.unitary_layer = {gate::rz(s, -2 * sb.E0 / kHbarEvS * tau)};
  prog.unitary_layer.back().tag = "HS";
  prog.forward_half_size = 1;
  prog.dissipation_layer =
      compose_general_channel({rates.relax, rates.excite, rates.dephase}, tau, s, a, formula);
  prog.readout_qubits = {s};
  prog.readout_labels = {"S"};
  return prog;
}

TrotterErrorReport trotter_error_coeff(const HamiltonianTerms& t, double w1, double w2) {
  const SparseMatrix H0 = (1 - w1 - 2 * w2) * t.h0;
  const SparseMatrix H1 = w1 * t.h0 + t.h1;
  const SparseMatrix H2 = w2 * t.h0 + t.h2xx;
  const SparseMatrix H3 = w2 * t.h0 + t.h2yy;
  const SparseMatrix H123 = H1 + H2 + H3, H23 = H2 + H3;
  const Eigen::Index n = t.h0.rows();

  // ||[A,[A,B]]|| with [A,[A,B]] = A A B - 2 A B A + B A A, Hermitian for Hermitian A, B.
  auto nested = [&](const SparseMatrix& A, const SparseMatrix& B) {
    return spectral_norm_hermitian(
        [&](const Vector& v) {
          const Vector Av = A * v, Bv = B * v;
          return Vector(A * Vector(A * Bv) - 2.0 * (A * Vector(B * Av)) + B * Vector(A * Av));
        },
        n);
  };
  const double alpha = (nested(H123, H0) + nested(H23, H1) + nested(H3, H2)) / 12.0 +
                       (nested(H0, H123) + nested(H1, H23) + nested(H2, H3)) / 24.0;
  return {alpha, alpha > 0 ? 1.0 / std::sqrt(alpha) : std::numeric_limits<double>::infinity()};
}

GateTally count_gates(const std::vector<GateOp>& ops) {
  GateTally t;
  for (const auto& g : ops) {
    switch (g.kind) {
      case GateKind::CNOT:
      case GateKind::RXX:
      case GateKind::RYY:
        t.cnot += 1;
        break;
      case GateKind::SWAP:
        t.cnot += 3;
        break;
      case GateKind::CD:
        t.cd += 1;
        break;
      case GateKind::SNAP:
      case GateKind::CR:
        t.snap += 1;
        break;
      case GateKind::BS:
        t.bs += 1;
        break;
      case GateKind::Rx:
      case GateKind::Ry:
      case GateKind::Rz:
      case GateKind::X:
      case GateKind::Z:
      case GateKind::H:
        t.single_qubit += 1;
        break;
      case GateKind::D:
      case GateKind::R:
        t.single_qumode += 1;
        break;
      default:
        t.other += 1;
        break;
    }
  }
  return t;
}

GateTally count_gates_cavity_only(const std::vector<GateOp>& ops) {
  GateTally t = count_gates(ops);
  const GateTally per = count_gates(decompose_cnot_cavity_only(0, 1, 2, 3));
  t.bs += per.bs * t.cnot;
  t.cd += per.cd * t.cnot;
  t.cnot = 0;
  return t;
}

ResourceReport resource_count(int n_sites, Architecture arch) {
  if (n_sites < 3) throw std::invalid_argument("resource_count needs N >= 3");
  ResourceReport r{n_sites, arch, {}, std::nullopt};
  const long k = n_sites - 2;
  if (arch == Architecture::Transmon) {
    r.formula.cnot = 84 * k;
    r.formula.cd = 9 * k;
    r.formula.snap = 3 * k;
  } else {
    r.formula.bs = 336 * k;
    r.formula.cd = 345 * k;
    r.formula.snap = 3 * k;
  }
  if (n_sites == 3) {
    TrotterPlan plan;
    plan.n_steps = 1;
    const auto prog = compile_three_site(derive_effective(ChromophoreParams{}), 2, plan);
    r.walked = arch == Architecture::Transmon ? count_gates(prog.forward_half())
                                              : count_gates_cavity_only(prog.forward_half());
  }
  return r;
}

}  // namespace cqed
