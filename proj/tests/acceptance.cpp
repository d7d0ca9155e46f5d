// Acceptance checks: one PASS/FAIL line per criterion. Pass criterion numbers
// as arguments to run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "cqed/experiments.hpp"
#include "cqed/reference.hpp"

using namespace cqed;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::vector<double> grid(double t_end, int n) {
  std::vector<double> t(n + 1);
  for (int k = 0; k <= n; ++k) t[k] = t_end * k / n;
  return t;
}

double shot_se(double p, long shots) {
  return std::max(std::sqrt(std::max(p * (1 - p), 0.0) / shots), 1.0 / shots);
}

// Smallest k with P(Binomial(n, q) <= k) >= level.
int binomial_quantile(int n, double q, double level) {
  double pmf = std::pow(1 - q, n), cdf = pmf;
  int k = 0;
  while (cdf < level && k < n) {
    pmf *= (n - k) / double(k + 1) * q / (1 - q);
    cdf += pmf;
    ++k;
  }
  return k;
}

// Sampled and exact circuit populations against a reference, both judged
// with 3 SE at the reference value. Pointwise 3 SE fails by chance on 0.27%
// of points, so the sampled trace may exceed it on at most the 99.9% binomial
// quantile of points.
struct ThreeSigma {
  double worst_exact_z = 0, worst_sampled_z = 0;
  int exceed = 0, allowed = 0, points = 0;
  bool pass() const { return worst_exact_z < 3 && exceed <= allowed; }
};

ThreeSigma three_sigma(const Eigen::MatrixXd& sampled, const Eigen::MatrixXd& exact,
                       const Eigen::MatrixXd& ref, long shots) {
  ThreeSigma r;
  for (Eigen::Index k = 0; k < ref.rows(); ++k)
    for (Eigen::Index j = 0; j < ref.cols(); ++j) {
      const double se = shot_se(ref(k, j), shots);
      const double zs = std::abs(sampled(k, j) - ref(k, j)) / se;
      r.worst_exact_z = std::max(r.worst_exact_z, std::abs(exact(k, j) - ref(k, j)) / se);
      r.worst_sampled_z = std::max(r.worst_sampled_z, zs);
      r.exceed += zs >= 3;
      ++r.points;
    }
  r.allowed = binomial_quantile(r.points, 0.0027, 0.999);
  return r;
}

// Non-selective density execution on (system, ancilla).
Matrix dilation_density(const std::vector<GateOp>& ops, const Matrix& rho_sys) {
  HilbertLayout l;
  l.add_qubit("s");
  l.add_qubit("anc");
  Matrix anc0 = Matrix::Zero(2, 2);
  anc0(0, 0) = 1;
  Matrix rho = kron(rho_sys, anc0);
  Matrix p0 = Matrix::Zero(2, 2), p1 = Matrix::Zero(2, 2);
  p0(0, 0) = p1(1, 1) = 1;
  for (const auto& g : ops) {
    if (g.kind == GateKind::Measure || g.kind == GateKind::Reset) {
      const Matrix P0 = embed(p0, g.targets, l), P1 = embed(p1, g.targets, l);
      const Matrix F = g.kind == GateKind::Reset ? embed(pauli_x(), g.targets, l) : Matrix::Identity(4, 4);
      rho = P0 * rho * P0 + F * P1 * rho * P1 * F.adjoint();
    } else {
      const Matrix U = embed(gate_matrix(g, l), g.targets, l);
      rho = U * rho * U.adjoint();
    }
  }
  Matrix out(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out(i, j) = rho(2 * i, 2 * j) + rho(2 * i + 1, 2 * j + 1);
  return out;
}

Outcome criterion1() {
  const std::vector<std::pair<std::string, double>> printed = {
      {"omega_a", 4.79e13},   {"omega_b", 4.80e13},  {"omega_c", 4.79e13},  {"omega_l", 6.00e12},
      {"chi_a", -3.20e12},    {"chi_b", -3.60e12},   {"chi_c", -2.70e12},   {"omega_qa", -1.30e12},
      {"omega_qb", -1.80e12}, {"omega_qc", -1.35e12}, {"delta_ab", 5.00e11}, {"delta_ac", 4.99e10},
      {"g_cd_a", 3.38e12},    {"g_cd_b", 3.03e12},   {"g_cd_c", 3.70e12},   {"g_cd_l", 1.34e12},
      {"g_ab", 3.00e12},      {"g_ac", 2.70e12},     {"g_abl", -3.00e11},   {"g_acl", 4.05e11},
  };
  const auto rows = derive_effective(load_chromophore_params(CQED_DATA_DIR "/table1.json")).rows();
  int ok = 0;
  std::string bad;
  for (const auto& [name, value] : printed) {
    const auto it = std::find_if(rows.begin(), rows.end(), [&](const auto& r) { return r.first == name; });
    // Round half away from zero to three significant figures.
    const double x = it->second;
    const double s = std::pow(10.0, std::floor(std::log10(std::abs(x))) - 2);
    const double r3 = std::copysign(std::floor(std::abs(x) / s + 0.5 + 1e-9), x) * s;
    if (std::abs(r3 - value) <= 1e-9 * std::abs(value)) ++ok;
    else bad += " " + name;
  }
  return {ok == int(printed.size()), fmt("%d/%zu effective-parameter rows match the reference table to 3 s.f.%s", ok, printed.size(), bad.c_str())};
}

Outcome criterion2() {
  Matrix rho0(2, 2);
  rho0 << 0.35, Complex(0.2, -0.15), Complex(0.2, 0.15), 0.65;
  const std::vector<std::pair<ChannelKind, Matrix>> jumps = {
      {ChannelKind::Amp, [] { Matrix m = Matrix::Zero(2, 2); m(0, 1) = 1; return m; }()},
      {ChannelKind::Exc, [] { Matrix m = Matrix::Zero(2, 2); m(1, 0) = 1; return m; }()},
      {ChannelKind::Dep, pauli_z()},
  };
  double worst = 0;
  for (const auto& [kind, L] : jumps)
    for (double g : {3.15e12, 9.0e11})
      for (double t : {1e-14, 2.5e-13, 1e-12}) {
        const double theta = angle_from_rate(kind, g, t);
        const Matrix circ = dilation_density(dilation_circuit(kind, theta, 0, 1), rho0);
        const Matrix kraus = apply_kraus(kraus_ops(kind, probability_from_angle(theta)), rho0);
        const Matrix lind = lindblad_solve({Matrix::Zero(2, 2), {{L, g}}, rho0, {0.0, t}}).back();
        const Matrix ana = analytic_density(kind, rho0, g, t);
        for (const Matrix* a : {&circ, &kraus, &lind, &ana})
          for (const Matrix* b : {&circ, &kraus, &lind, &ana}) worst = std::max(worst, max_abs(*a - *b));
      }
  Matrix excited = Matrix::Zero(2, 2);
  excited(1, 1) = 1;
  Matrix lower = Matrix::Zero(2, 2);
  lower(0, 1) = 1;
  const auto env = lindblad_solve({Matrix::Zero(2, 2), {{lower, 3.15e12}}, excited, {0.0, 0.5e-12, 1e-12}});
  const double p05 = env[1](1, 1).real(), p1 = env[2](1, 1).real();
  const bool pass = worst < 1e-8 && std::abs(p05 - 0.21) <= 0.01 && std::abs(p1 - 0.04) <= 0.01;
  return {pass, fmt("pairwise max diff %.2e; envelope %.3f at 0.5 ps, %.3f at 1 ps", worst, p05, p1)};
}

Outcome criterion3() {
  ExperimentConfig c = preset_config("fig3");
  c.shots = 2000;
  const CompiledProgram prog = build_program(c);
  const PopulationTrace tr = execute(c).traces[0].second;
  const Eigen::MatrixXd exact = circuit_density_populations(prog);
  const auto rho = lindblad_solve(spin_boson_problem(c.spin_boson, tr.times));
  Eigen::MatrixXd ref(tr.points(), 1);
  for (Eigen::Index k = 0; k < tr.points(); ++k) ref(k, 0) = rho[k](1, 1).real();
  const auto r = three_sigma(tr.mean, exact, ref, c.shots);
  return {r.pass(), fmt("%.2f ps window, circuit expectation worst %.2f SE; sampled worst %.2f SE, %d/%d points "
                        "beyond 3 SE (allowed %d)",
                        tr.times.back() * 1e12, r.worst_exact_z, r.worst_sampled_z, r.exceed, r.points,
                        r.allowed)};
}

ThreeSigma three_site_check(int fock, int steps, long shots, double& secs) {
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentConfig c = preset_config("fig4");
  c.fock = fock;
  c.steps = steps;
  c.shots = shots;
  const PopulationTrace tr = execute(c).traces[0].second;
  const PopulationTrace ex = exact_three_site_trace(derive_effective(resolve_params(c)), fock, tr.times);
  secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return three_sigma(tr.mean, *tr.expectation, ex.mean, shots);
}

Outcome criterion4() {
  double t_red = 0, t_full = 0;
  const auto red = three_site_check(4, 100, 2000, t_red);
  const auto full = three_site_check(8, 200, 10000, t_full);
  const bool pass = red.pass() && full.pass() && t_red < 300 && t_full < 3600;
  return {pass, fmt("reduced (fock 4, 1 ps, 2000 shots): exact %.2f SE, sampled %d/%d beyond 3 SE (allowed %d), "
                    "%.0f s; full (fock 8, 2 ps, 10000 shots): exact %.2f SE, sampled %d/%d (allowed %d), %.0f s",
                    red.worst_exact_z, red.exceed, red.points, red.allowed, t_red, full.worst_exact_z, full.exceed,
                    full.points, full.allowed, t_full)};
}

Outcome criterion5() {
  const EffectiveParams ep = derive_effective(ChromophoreParams{});
  const int fock = 4;
  const auto t_check = grid(1e-12, 50);  // every 20 fs
  const auto ex = exact_three_site_trace(ep, fock, t_check);
  std::vector<double> err;
  for (double tau_fs : {20.0, 10.0, 5.0}) {
    TrotterPlan plan;
    plan.tau = tau_fs * 1e-15;
    plan.n_steps = static_cast<int>(std::lround(1000 / tau_fs));
    const auto prog = compile_three_site(ep, fock, plan);
    const Eigen::MatrixXd pop = circuit_expectation(prog, vacuum_state(prog.layout).amplitudes);
    const int stride = static_cast<int>(std::lround(20 / tau_fs));
    double e = 0;
    for (std::size_t k = 0; k < t_check.size(); ++k)
      e = std::max(e, (pop.row(k * stride) - ex.mean.row(k)).cwiseAbs().maxCoeff());
    err.push_back(e);
  }
  const double r1 = err[0] / err[1], r2 = err[1] / err[2];
  const bool pass = r1 >= 3.2 && r1 <= 4.8 && r2 >= 3.2 && r2 <= 4.8;
  return {pass, fmt("max |dP| over 1 ps: %.3e (20 fs), %.3e (10 fs), %.3e (5 fs); ratios %.3f, %.3f", err[0], err[1],
                    err[2], r1, r2)};
}

Outcome criterion6() {
  const auto ch = three_site_layout(4);
  const auto& L = ch.layout;
  Rng rng = make_rng(606, 0);
  auto random_state = [&] {
    std::normal_distribution<double> g;
    Vector v(static_cast<Eigen::Index>(L.total_dim()));
    for (auto& z : v) z = Complex(g(rng), g(rng));
    return Vector(v.normalized());
  };
  auto run = [&](const std::vector<GateOp>& ops, Vector v) {
    for (const auto& g : ops) apply_local_inplace(v, L, gate_matrix(g, L), g.targets);
    return v;
  };
  auto quad = [&](int m) {
    const Matrix a = annihilation(L.dim(m));
    return Matrix(a + a.adjoint());
  };
  double worst = 0;
  int blocks = 0;
  for (double theta : {0.37, -1.1}) {
    const int a = kSiteA;
    const Vector v = random_state();
    Vector expect = v;
    apply_local_inplace(expect, L, expm_hermitian(-theta * kron(pauli_z(), quad(ch.sites[a].low_mode))),
                        {ch.sites[a].qubit, ch.sites[a].low_mode});
    worst = std::max(worst, (run(compile_dispersive_lowfreq(ch, a, theta), v) - expect).cwiseAbs().maxCoeff());
    ++blocks;
    for (Neighbor nb : {Neighbor::Next, Neighbor::Prev})
      for (bool yy : {false, true})
        for (bool with_mode : {true, false}) {
          const int partner = nb == Neighbor::Next ? a + 1 : a - 1;
          const Matrix P = yy ? pauli_y() : pauli_x();
          std::vector<int> t{ch.sites[a].qubit, ch.sites[partner].qubit};
          Matrix k = kron(P, P);
          if (with_mode) {
            k = kron(k, quad(ch.sites[a].low_mode));
            t.push_back(ch.sites[a].low_mode);
          }
          const Vector w = random_state();
          Vector ref = w;
          apply_local_inplace(ref, L, expm_hermitian(-theta * k), t);
          const auto ops = yy ? compile_yy(ch, a, nb, with_mode, theta) : compile_xx(ch, a, nb, with_mode, theta);
          worst = std::max(worst, (run(ops, w) - ref).cwiseAbs().maxCoeff());
          ++blocks;
        }
  }
  return {worst < 1e-10, fmt("%d blocks on the full fock-4 layout, max amplitude error %.2e", blocks, worst)};
}

Outcome criterion7() {
  const auto t = resource_count(3, Architecture::Transmon);
  const auto cav = resource_count(3, Architecture::CavityOnly);
  bool linear = true;
  for (int n = 4; n <= 10; ++n) {
    const auto f = resource_count(n, Architecture::Transmon).formula;
    const auto g = resource_count(n, Architecture::CavityOnly).formula;
    linear &= f.cnot == 84L * (n - 2) && f.cd == 9L * (n - 2) && f.snap == 3L * (n - 2);
    linear &= g.bs == 336L * (n - 2) && g.cd == 345L * (n - 2) && g.snap == 3L * (n - 2);
  }
  const auto& w = *t.walked;
  const auto& wc = *cav.walked;
  const bool pass = w.cnot == 84 && w.cd == 9 && w.snap == 3 && wc.bs == 336 && wc.cd == 345 && wc.snap == 3 &&
                    linear;
  return {pass, fmt("walked step %ld CNOT / %ld CD / %ld SNAP; cavity-only %ld BS / %ld CD / %ld SNAP; (N-2)-linear "
                    "for N = 4..10: %s",
                    w.cnot, w.cd, w.snap, wc.bs, wc.cd, wc.snap, linear ? "yes" : "no")};
}

// Shared settings of the sampled three-site experiments below.
constexpr int kFock = 2, kSteps = 100, kSeeds = 5;
constexpr long kShots = 400;

ExperimentConfig reduced(const std::string& preset) {
  ExperimentConfig c = preset_config(preset);
  c.fock = kFock;
  c.steps = kSteps;
  c.shots = kShots;
  return c;
}

std::vector<PopulationTrace> seeds_of(ExperimentConfig c) {
  std::vector<PopulationTrace> out;
  for (int s = 0; s < kSeeds; ++s) {
    c.seed = 101 + s;
    out.push_back(execute(c).traces[0].second);
  }
  return out;
}

struct Averaged {
  Eigen::MatrixXd mean, se;
};

Averaged average(const std::vector<PopulationTrace>& runs) {
  Averaged a{Eigen::MatrixXd::Zero(runs[0].points(), runs[0].mean.cols()),
             Eigen::MatrixXd::Zero(runs[0].points(), runs[0].mean.cols())};
  for (const auto& r : runs) {
    a.mean += r.mean;
    a.se += r.se.cwiseAbs2();
  }
  a.mean /= double(runs.size());
  a.se = a.se.cwiseSqrt() / double(runs.size());
  return a;
}

// Interior local maxima whose prominence exceeds 3 combined SE of peak and base.
int count_peaks(const Eigen::VectorXd& y, const Eigen::VectorXd& se, long shots_total) {
  const Eigen::Index n = y.size();
  int peaks = 0;
  for (Eigen::Index i = 1; i + 1 < n; ++i) {
    if (!(y[i] > y[i - 1] && y[i] >= y[i + 1])) continue;
    Eigen::Index lo = i, ro = i;
    double lmin = y[i], rmin = y[i];
    for (Eigen::Index j = i - 1; j >= 0 && y[j] <= y[i]; --j)
      if (y[j] < lmin) lmin = y[j], lo = j;
    for (Eigen::Index j = i + 1; j < n && y[j] <= y[i]; ++j)
      if (y[j] < rmin) rmin = y[j], ro = j;
    const Eigen::Index base = lmin > rmin ? lo : ro;
    const double prom = y[i] - std::max(lmin, rmin);
    const double s_peak = std::max(se[i], 1.0 / shots_total), s_base = std::max(se[base], 1.0 / shots_total);
    peaks += prom > 3 * std::sqrt(s_peak * s_peak + s_base * s_base);
  }
  return peaks;
}

Outcome criterion8() {
  // (a) Dephasing conserves the excitation up to shot noise and the Trotter drift of the circuit.
  ExperimentConfig deph = reduced("fig6");
  deph.seed = 7;
  const PopulationTrace dt = execute(deph).traces[0].second;
  const auto noiseless = build_program(reduced("fig4"));
  const Eigen::MatrixXd ideal = circuit_expectation(noiseless, vacuum_state(noiseless.layout).amplitudes);
  const double drift = (ideal.rowwise().sum().array() - 1.0).abs().maxCoeff();
  double worst_a = 0;
  bool pass_a = true;
  for (Eigen::Index k = 0; k < dt.points(); ++k) {
    const double dev = std::abs(dt.mean.row(k).sum() - 1.0);
    const double bound = 3 * std::max(dt.se.row(k).sum(), 1.0 / kShots) + drift;
    worst_a = std::max(worst_a, dev / bound);
    pass_a &= dev <= bound;
  }

  // (b) B's peak population responds to its own damping rate.
  const double g_b = ChromophoreParams{}.gamma_amp_all;
  auto b_peaks = [&](double rate) {
    ExperimentConfig c = reduced("fig5");
    c.gamma_amp_b = rate;
    std::vector<double> p;
    for (const auto& r : seeds_of(c)) p.push_back(r.mean.col(1).maxCoeff());
    return p;
  };
  auto mean_se = [](const std::vector<double>& v) {
    const double m = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
    double ss = 0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::pair{m, std::sqrt(ss / (v.size() - 1) / v.size())};
  };
  const auto [m0, s0] = mean_se(b_peaks(g_b));
  const auto [mlo, slo] = mean_se(b_peaks(g_b / 3));
  const auto [mhi, shi] = mean_se(b_peaks(g_b * 3));
  const double z_lo = (mlo - m0) / std::hypot(slo, s0), z_hi = (m0 - mhi) / std::hypot(shi, s0);
  const bool pass_b = z_lo > 3 && z_hi > 3;

  // (c) Secondary oscillation peaks, damping-only versus damping plus dephasing.
  auto peak_total = [&](const std::string& preset) {
    const auto avg = average(seeds_of(reduced(preset)));
    int n = 0;
    for (Eigen::Index j = 0; j < avg.mean.cols(); ++j)
      n += count_peaks(avg.mean.col(j), avg.se.col(j), kShots * kSeeds);
    return n;
  };
  const int peaks_amp = peak_total("fig5"), peaks_both = peak_total("fig8");
  const bool pass_c = peaks_both < peaks_amp;

  return {pass_a && pass_b && pass_c,
          fmt("(a) %s: worst |sum P - 1| at %.2f of bound (Trotter drift %.2e); (b) %s: B peak %.4f (gamma_b/3 "
              "%.4f, z %.1f; 3 gamma_b %.4f, z %.1f); (c) %s: significant peaks %d damping-only vs %d combined",
              pass_a ? "pass" : "fail", worst_a, drift, pass_b ? "pass" : "fail", m0, mlo, z_lo, mhi, z_hi,
              pass_c ? "pass" : "fail", peaks_amp, peaks_both)};
}

double mean_rmse(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return ((a - b).colwise().squaredNorm() / double(a.rows())).cwiseSqrt().mean();
}

Outcome criterion9() {
  CdNoiseParams cd;
  const double beta = derive_effective(ChromophoreParams{}).g_cd_l * 1e-14 / 2;
  const double e30 = cd_gate_error(beta, cd);
  cd.alpha = 20;
  const double e20 = cd_gate_error(beta, cd);
  auto sf3 = [](double x, double want) { return std::abs(x - want) <= 0.005 * std::pow(10.0, std::floor(std::log10(want))); };
  const bool pass_cd = sf3(e30, 1.14e-5) && sf3(e20, 1.71e-5) && std::abs(CdNoiseParams{}.kappa_all() - 16e3) < 1e-9;

  const ExperimentConfig base = reduced("fig4");
  const CompiledProgram prog = build_program(base);
  const Eigen::MatrixXd ideal = circuit_expectation(prog, vacuum_state(prog.layout).amplitudes);
  auto rmse_per_seed = [&](double eps) {
    NoiseModel nm;
    nm.eps_cnot = eps;
    const CompiledProgram p = inject_noise(prog, nm);
    std::vector<double> out;
    for (int s = 0; s < kSeeds; ++s) {
      RunOptions o;
      o.shots = kShots;
      o.seed = 900 + s;
      out.push_back(mean_rmse(run_experiment(p, o).mean, ideal));
    }
    return out;
  };
  const std::vector<double> eps{1e-5, 1e-4, 1e-3, 1e-2};
  const auto r0 = rmse_per_seed(0.0);
  std::vector<std::vector<double>> r;
  for (double e : eps) r.push_back(rmse_per_seed(e));
  auto mean = [](const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); };
  bool monotone = mean(r[0]) < mean(r[1]);
  for (std::size_t i = 1; i + 1 < r.size(); ++i) monotone &= mean(r[i]) < mean(r[i + 1]);
  // Paired t-test over seeds, eps = 1e-5 against noiseless; two-sided 95% with 4 dof.
  std::vector<double> d(kSeeds);
  for (int s = 0; s < kSeeds; ++s) d[s] = r[0][s] - r0[s];
  const double md = mean(d);
  double ss = 0;
  for (double x : d) ss += (x - md) * (x - md);
  const double sd = std::sqrt(ss / (kSeeds - 1));
  const double t = sd > 0 ? md / (sd / std::sqrt(double(kSeeds))) : (md == 0 ? 0.0 : INFINITY);
  const bool pass_t = std::abs(t) < 2.776;
  return {pass_cd && monotone && pass_t,
          fmt("eps_CD %.3g (alpha 30), %.3g (alpha 20), kappa_all %.0f Hz; mean RMSE noiseless %.4f, eps 1e-5 %.4f, "
              "1e-4 %.4f, 1e-3 %.4f, 1e-2 %.4f (%s); paired t(1e-5 vs 0) = %.2f",
              e30, e20, CdNoiseParams{}.kappa_all(), mean(r0), mean(r[0]), mean(r[1]), mean(r[2]), mean(r[3]),
              monotone ? "monotone" : "not monotone", t)};
}

Outcome criterion10() {
  ExperimentConfig base = preset_config("appD");
  base.fock = kFock;
  base.steps = kSteps;
  std::vector<ConvergenceTable> all;
  // Shot class at a shot count that resolves B and C; tau and Fock classes run end to end at low shots.
  ConvergenceSpec shots;
  shots.classes = {"shots"};
  shots.shots = {1000, 500};
  base.shots = 1000;
  for (auto& t : convergence_sweep(base, shots)) all.push_back(t);
  ConvergenceSpec rest;
  rest.classes = {"tau", "fock"};
  rest.tau_fs = {10, 20};
  rest.fock = {3, 2};
  base.shots = 50;
  for (auto& t : convergence_sweep(base, rest)) all.push_back(t);

  bool finite = true;
  for (const auto& t : all)
    for (const auto& r : t.rows)
      for (double v : r.nrmse_percent) finite &= std::isfinite(v) && v >= 0;
  const auto& self = all[0].rows[0].nrmse_percent;
  const bool single_digit = std::all_of(self.begin(), self.end(), [](double v) { return v < 10; });
  std::string rows;
  for (const auto& t : all)
    for (const auto& r : t.rows)
      rows += fmt(" [%s%s: %.1f/%.1f/%.1f]", r.comparison.c_str(), r.self_baseline ? "*" : "", r.nrmse_percent[0],
                  r.nrmse_percent[1], r.nrmse_percent[2]);
  std::printf("%s", convergence_csv(all).c_str());
  return {finite && single_digit && all.size() == 3,
          fmt("3 tables; 1000-shot self-baseline A/B/C %.1f%%/%.1f%%/%.1f%%;%s", self[0], self[1], self[2],
              rows.c_str())};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Outcome()>> criteria = {criterion1, criterion2, criterion3, criterion4, criterion5,
                                                          criterion6, criterion7, criterion8, criterion9, criterion10};
  std::set<int> pick;
  for (int i = 1; i < argc; ++i) pick.insert(std::atoi(argv[i]));
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i + 1);
    if (!pick.empty() && !pick.count(id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s criterion %d: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", id, o.detail.c_str(), s);
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
