#include "cqed/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <sstream>
#include <thread>

namespace cqed {

void CdNoiseParams::validate() const {
  if (kappa_1c < 0 || kappa_1q < 0 || kappa_phi_q < 0 || n_th < 0 || n_th > 1)
    throw ConfigError("CD noise rates must be >= 0 and n_th in [0, 1]");
  if (!(alpha > 0) || !(chi_disp > 0)) throw ConfigError("CD noise needs alpha > 0 and chi > 0");
}

bool NoiseModel::empty() const {
  return eps_cnot == 0.0 && (!cd || cd->kappa_all() == 0.0);
}

void NoiseModel::validate() const {
  if (!(eps_cnot >= 0 && eps_cnot <= 1)) throw ConfigError("eps_cnot must lie in [0, 1]");
  if (cd) cd->validate();
}

double cd_gate_error(double beta_abs, const CdNoiseParams& p) {
  return p.kappa_all() * p.gate_time(beta_abs);
}

namespace {

bool cnot_class(GateKind k) {
  return k == GateKind::CNOT || k == GateKind::RXX || k == GateKind::RYY;
}

void check_probability(double p, const char* what) {
  if (!(p >= 0 && p <= 1))
    throw ConfigError(std::string("noise probability for ") + what + " outside [0, 1]");
}

}  // namespace

CompiledProgram inject_noise(const CompiledProgram& program, const NoiseModel& nm) {
  nm.validate();
  if (nm.empty()) return program;
  const double eps = nm.eps_cnot;

  auto noisy = [&](const std::vector<GateOp>& ops, std::size_t split, std::size_t* split_out) {
    std::vector<GateOp> out;
    auto after_cnot = [&](int target, const std::string& tag) {
      if (eps == 0) return;
      out.push_back(gate::amp_damp(target, eps));
      out.push_back(gate::dephase(target, eps / 2));
      out[out.size() - 2].tag = out.back().tag = tag + ":cnot-noise";
    };
    for (std::size_t i = 0; i < ops.size(); ++i) {
      if (i == split && split_out) *split_out = out.size();
      const GateOp& g = ops[i];
      if (g.kind == GateKind::SWAP && eps > 0) {
        for (auto c : decompose_swap(g.targets[0], g.targets[1])) {
          c.tag = g.tag;
          out.push_back(c);
          after_cnot(c.targets[1], g.tag);
        }
        continue;
      }
      out.push_back(g);
      if (cnot_class(g.kind)) after_cnot(g.targets[1], g.tag);
      if (g.kind == GateKind::CD && nm.cd) {
        const CdNoiseParams& cd = *nm.cd;
        const double t = cd.gate_time(std::abs(beta_of(g)));
        const double pa = cd.kappa_1q * t, pd = cd.kappa_phi_q * t, pl = cd.kappa_1c * t;
        check_probability(pa, "CD qubit decay");
        check_probability(pd, "CD qubit dephasing");
        check_probability(pl * (program.layout.dim(g.targets[1]) - 1), "CD photon loss");
        const std::string tag = g.tag + ":cd-noise";
        if (pa > 0) out.push_back(gate::amp_damp(g.targets[0], pa)), out.back().tag = tag;
        if (pd > 0) out.push_back(gate::dephase(g.targets[0], pd)), out.back().tag = tag;
        if (pl > 0) out.push_back(gate::photon_loss(g.targets[1], pl)), out.back().tag = tag;
      }
    }
    if (split >= ops.size() && split_out) *split_out = out.size();
    return out;
  };

  CompiledProgram out = program;
  out.unitary_layer = noisy(program.unitary_layer, program.forward_half_size, &out.forward_half_size);
  out.dissipation_layer = noisy(program.dissipation_layer, 0, nullptr);
  return out;
}

// ---------------------------------------------------------------------------
// Kernels

struct ExecutionPlan::Kernel {
  enum class Type { Dense, Blocks, Diagonal, FullDiagonal, Monomial, Measure, Reset, AmpDamp, Dephase, PhotonLoss };
  Type type = Type::Dense;
  LocalAction act;
  Matrix op;                   // Dense
  std::vector<Matrix> blocks;  // Blocks: block-diagonal in the first target's digit
  Vector diag;                 // Diagonal (local) / FullDiagonal (global)
  std::vector<int> src;        // Monomial: out[i] = phase[i] * in[src[i]]
  Vector phase;
  int target = -1;
  int dim = 0;
  double p = 0.0;
};

namespace {

using Kernel = ExecutionPlan::Kernel;
using KT = Kernel::Type;

constexpr double kZeroTol = 0.0;

bool is_diagonal(const Matrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (i != j && std::abs(m(i, j)) > kZeroTol) return false;
  return true;
}

bool monomial(const Matrix& m, std::vector<int>& src, Vector& phase) {
  const Eigen::Index d = m.rows();
  src.assign(d, -1);
  phase.resize(d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      if (std::abs(m(i, j)) > kZeroTol) {
        if (src[i] >= 0) return false;
        src[i] = static_cast<int>(j);
        phase[i] = m(i, j);
      }
  return std::all_of(src.begin(), src.end(), [](int s) { return s >= 0; });
}

// Splits m into nb equal diagonal blocks when all off-block entries vanish.
bool block_split(const Matrix& m, int nb, std::vector<Matrix>& blocks) {
  const Eigen::Index d = m.rows(), b = d / nb;
  if (nb < 2 || b < 2 || b * nb != d) return false;
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      if (i / b != j / b && std::abs(m(i, j)) > kZeroTol) return false;
  blocks.clear();
  for (int k = 0; k < nb; ++k) blocks.push_back(m.block(k * b, k * b, b, b));
  return true;
}

Kernel make_kernel(const GateOp& g, const HilbertLayout& layout) {
  Kernel k;
  switch (g.kind) {
    case GateKind::Measure:
    case GateKind::Reset:
      k.type = g.kind == GateKind::Measure ? KT::Measure : KT::Reset;
      k.target = g.targets[0];
      return k;
    case GateKind::AmpDamp:
    case GateKind::Dephase:
    case GateKind::PhotonLoss:
      k.type = g.kind == GateKind::AmpDamp ? KT::AmpDamp
               : g.kind == GateKind::Dephase ? KT::Dephase
                                             : KT::PhotonLoss;
      k.target = g.targets[0];
      k.p = g.params.at(0);
      k.dim = layout.dim(k.target);
      k.act = LocalAction(layout, {k.target});
      if (k.type == KT::PhotonLoss && k.p * (k.dim - 1) > 1)
        throw ConfigError("photon-loss probability too large for the Fock truncation");
      return k;
    default:
      break;
  }
  const Matrix m = gate_matrix(g, layout);
  k.act = LocalAction(layout, g.targets);
  if (is_diagonal(m)) {
    k.type = KT::Diagonal;
    k.diag = m.diagonal();
  } else if (monomial(m, k.src, k.phase)) {
    k.type = KT::Monomial;
  } else if (g.targets.size() > 1 && block_split(m, layout.dim(g.targets[0]), k.blocks)) {
    k.type = KT::Blocks;
  } else {
    k.type = KT::Dense;
    k.op = m;
  }
  return k;
}

void apply_dense(const LocalAction& act, const Complex* m, std::size_t d, std::size_t first,
                 Complex* a, Complex* in, Complex* out) {
  const auto& off = act.offsets();
  for (std::size_t base : act.bases()) {
    for (std::size_t j = 0; j < d; ++j) in[j] = a[base + off[first + j]];
    for (std::size_t i = 0; i < d; ++i) out[i] = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      const Complex v = in[j];
      if (v.real() == 0.0 && v.imag() == 0.0) continue;
      const Complex* col = m + j * d;
      for (std::size_t i = 0; i < d; ++i) out[i] += col[i] * v;
    }
    for (std::size_t i = 0; i < d; ++i) a[base + off[first + i]] = out[i];
  }
}

// Per-thread gather/scatter buffers.
Complex* scratch(std::size_t n, int which) {
  thread_local std::vector<Complex> buf[2];
  if (buf[which].size() < n) buf[which].resize(n);
  return buf[which].data();
}

// Norm^2 of the qubit = 1 branch.
double branch_one(const Kernel& k, const Vector& amps) {
  const std::size_t o = k.act.offsets()[1];
  double s = 0;
  for (std::size_t base : k.act.bases()) s += std::norm(amps[base + o]);
  return s;
}

void apply_kernel(const Kernel& k, Vector& amps, const HilbertLayout& layout, Rng& rng) {
  Complex* a = amps.data();
  switch (k.type) {
    case KT::FullDiagonal:
      amps.array() *= k.diag.array();
      return;
    case KT::Diagonal:
      k.act.apply_diagonal(k.diag, amps);
      return;
    case KT::Monomial: {
      const auto& off = k.act.offsets();
      const std::size_t d = off.size();
      Complex* in = scratch(d, 0);
      for (std::size_t base : k.act.bases()) {
        for (std::size_t j = 0; j < d; ++j) in[j] = a[base + off[j]];
        for (std::size_t i = 0; i < d; ++i) a[base + off[i]] = k.phase[i] * in[k.src[i]];
      }
      return;
    }
    case KT::Dense: {
      const std::size_t d = k.act.local_dim();
      apply_dense(k.act, k.op.data(), d, 0, a, scratch(d, 0), scratch(d, 1));
      return;
    }
    case KT::Blocks: {
      const std::size_t b = static_cast<std::size_t>(k.blocks[0].rows());
      Complex* in = scratch(b, 0);
      Complex* out = scratch(b, 1);
      for (std::size_t q = 0; q < k.blocks.size(); ++q)
        apply_dense(k.act, k.blocks[q].data(), b, q * b, a, in, out);
      return;
    }
    case KT::Measure:
      measure_qubit_inplace(amps, layout, k.target, rng);
      return;
    case KT::Reset:
      reset_qubit_inplace(amps, layout, k.target, rng);
      return;
    case KT::AmpDamp: {
      if (k.p == 0) return;
      const std::size_t o = k.act.offsets()[1];
      const double p1 = branch_one(k, amps);
      const double total = amps.squaredNorm();
      if (uniform01(rng) * total < k.p * p1) {
        const double s = 1.0 / std::sqrt(p1);
        for (std::size_t base : k.act.bases()) {
          a[base] = a[base + o] * s;
          a[base + o] = 0.0;
        }
      } else {
        const double keep = std::sqrt(1 - k.p);
        const double s = 1.0 / std::sqrt(total - k.p * p1);
        for (std::size_t base : k.act.bases()) {
          a[base] *= s;
          a[base + o] *= keep * s;
        }
      }
      return;
    }
    case KT::Dephase: {
      if (k.p == 0 || uniform01(rng) >= k.p) return;
      const std::size_t o = k.act.offsets()[1];
      for (std::size_t base : k.act.bases()) a[base + o] = -a[base + o];
      return;
    }
    case KT::PhotonLoss: {
      if (k.p == 0) return;
      const auto& off = k.act.offsets();
      double nbar = 0, total = 0;
      for (std::size_t base : k.act.bases())
        for (int n = 0; n < k.dim; ++n) {
          const double w = std::norm(a[base + off[n]]);
          nbar += n * w;
          total += w;
        }
      if (uniform01(rng) * total < k.p * nbar) {
        const double s = 1.0 / std::sqrt(nbar);
        for (std::size_t base : k.act.bases()) {
          for (int n = 0; n + 1 < k.dim; ++n)
            a[base + off[n]] = std::sqrt(double(n + 1)) * s * a[base + off[n + 1]];
          a[base + off[k.dim - 1]] = 0.0;
        }
      } else {
        const double s = 1.0 / std::sqrt(total - k.p * nbar);
        for (std::size_t base : k.act.bases())
          for (int n = 0; n < k.dim; ++n) a[base + off[n]] *= std::sqrt(1 - k.p * n) * s;
      }
      return;
    }
  }
}

constexpr std::size_t kMaxFusedDim = std::size_t(1) << 23;

std::vector<Kernel> build_kernels(const std::vector<GateOp>& ops, const HilbertLayout& layout) {
  std::vector<Kernel> raw;
  raw.reserve(ops.size());
  for (const auto& g : ops) {
    validate_op(g, layout);
    raw.push_back(make_kernel(g, layout));
  }
  if (layout.total_dim() > kMaxFusedDim) return raw;

  // Fuse runs of diagonal gates into one full-space diagonal.
  std::vector<Kernel> out;
  for (std::size_t i = 0; i < raw.size();) {
    std::size_t j = i;
    while (j < raw.size() && raw[j].type == KT::Diagonal) ++j;
    if (j - i >= 2) {
      Kernel f;
      f.type = KT::FullDiagonal;
      f.diag = Vector::Ones(static_cast<Eigen::Index>(layout.total_dim()));
      for (std::size_t k = i; k < j; ++k) raw[k].act.apply_diagonal(raw[k].diag, f.diag);
      out.push_back(std::move(f));
      i = j;
    } else {
      out.push_back(std::move(raw[i]));
      ++i;
    }
  }
  return out;
}

// Samples one basis index from |amps|^2 and returns its readout bitmask.
std::uint32_t sample_readout(const Vector& amps, const HilbertLayout& layout,
                             const std::vector<int>& qubits, Rng& rng) {
  const double total = amps.squaredNorm();
  if (!std::isfinite(total) || total <= 0) throw NumericalError("non-finite or zero state norm");
  const double target = uniform01(rng) * total;
  double acc = 0;
  Eigen::Index idx = amps.size() - 1;
  for (Eigen::Index i = 0; i < amps.size(); ++i) {
    acc += std::norm(amps[i]);
    if (acc > target) {
      idx = i;
      break;
    }
  }
  std::uint32_t mask = 0;
  for (std::size_t r = 0; r < qubits.size(); ++r)
    if (layout.digit(static_cast<std::size_t>(idx), qubits[r])) mask |= 1u << r;
  return mask;
}

// Joint distribution of the readout qubits.
std::vector<double> readout_distribution(const Vector& amps, const HilbertLayout& layout,
                                         const std::vector<int>& qubits) {
  std::vector<double> p(std::size_t(1) << qubits.size(), 0.0);
  for (Eigen::Index i = 0; i < amps.size(); ++i) {
    std::uint32_t mask = 0;
    for (std::size_t r = 0; r < qubits.size(); ++r)
      if (layout.digit(static_cast<std::size_t>(i), qubits[r])) mask |= 1u << r;
    p[mask] += std::norm(amps[i]);
  }
  double total = 0;
  for (double x : p) total += x;
  if (!std::isfinite(total) || total <= 0) throw NumericalError("non-finite or zero state norm");
  for (double& x : p) x /= total;
  return p;
}

void check_initial(const CompiledProgram& program, const Vector& initial) {
  if (static_cast<std::size_t>(initial.size()) != program.layout.total_dim())
    throw std::invalid_argument("initial state does not match the program layout");
  if (std::abs(initial.norm() - 1.0) > 1e-9) throw std::invalid_argument("initial state not normalized");
  if (program.readout_qubits.size() > 16) throw std::invalid_argument("at most 16 readout qubits");
}

template <class F>
void parallel_shots(long shots, int threads, F&& body) {
  const int t = std::max(1, std::min<int>(threads, static_cast<int>(std::min<long>(shots, 1024))));
  if (t == 1) {
    body(0, 0L, shots);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(t);
  for (int w = 0; w < t; ++w)
    pool.emplace_back([&, w] {
      try {
        body(w, shots * w / t, shots * (w + 1) / t);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

ExecutionPlan::ExecutionPlan(const CompiledProgram& program) : program_(program) {
  prep_ = build_kernels(program_.preparation, program_.layout);
  step_ = build_kernels(program_.step(), program_.layout);
  stochastic_ = program_.is_stochastic();
  for (int q : program_.readout_qubits)
    if (!program_.layout.is_qubit(q)) throw std::invalid_argument("readout target is not a qubit");
}

ExecutionPlan::ExecutionPlan(const ExecutionPlan&) = default;
ExecutionPlan::ExecutionPlan(ExecutionPlan&&) noexcept = default;
ExecutionPlan::~ExecutionPlan() = default;

void ExecutionPlan::prepare(Vector& amps, Rng& rng) const {
  for (const auto& k : prep_) apply_kernel(k, amps, program_.layout, rng);
}

void ExecutionPlan::step(Vector& amps, Rng& rng) const {
  for (const auto& k : step_) apply_kernel(k, amps, program_.layout, rng);
}

ShotRecord run_shot(const ExecutionPlan& plan, const Vector& initial,
                    const std::vector<int>& readout_steps, Rng& rng, ReadoutMode mode) {
  const auto& prog = plan.program();
  const auto& layout = prog.layout;
  ShotRecord rec;
  rec.outcomes.reserve(readout_steps.size());
  Vector amps = initial;
  plan.prepare(amps, rng);
  int at = 0;
  for (int target : readout_steps) {
    if (target < at) throw std::invalid_argument("readout steps must be non-decreasing");
    for (; at < target; ++at) plan.step(amps, rng);
    const std::uint32_t m = sample_readout(amps, layout, prog.readout_qubits, rng);
    rec.outcomes.push_back(m);
    if (mode == ReadoutMode::Collapse)
      for (std::size_t r = 0; r < prog.readout_qubits.size(); ++r)
        project_qubit_inplace(amps, layout, prog.readout_qubits[r], (m >> r) & 1u);
  }
  return rec;
}

Eigen::MatrixXd circuit_expectation(const CompiledProgram& program, const Vector& initial) {
  check_initial(program, initial);
  const ExecutionPlan plan(program);
  if (plan.stochastic()) throw std::invalid_argument("circuit_expectation needs a deterministic program");
  const auto steps = program.readout_steps();
  Eigen::MatrixXd out(steps.size(), program.readout_qubits.size());
  Rng rng = make_rng(0, 0);
  Vector amps = initial;
  plan.prepare(amps, rng);
  int at = 0;
  for (std::size_t k = 0; k < steps.size(); ++k) {
    for (; at < steps[k]; ++at) plan.step(amps, rng);
    const auto p = populations(amps, program.layout, program.readout_qubits);
    for (std::size_t r = 0; r < p.size(); ++r) out(k, r) = p[r];
  }
  return out;
}

PopulationTrace run_experiment(const CompiledProgram& program, const Vector& initial,
                               const RunOptions& opts) {
  if (opts.shots < 1) throw ConfigError("shots must be >= 1");
  check_initial(program, initial);
  const ExecutionPlan plan(program);
  const auto steps = program.readout_steps();
  const std::size_t n_pts = steps.size(), n_r = program.readout_qubits.size();
  const auto& layout = program.layout;

  PopulationTrace tr;
  tr.labels = program.readout_labels;
  tr.shots = opts.shots;
  for (int s : steps) tr.times.push_back(s * program.tau);

  std::vector<std::vector<long>> counts(std::max(1, opts.threads), std::vector<long>(n_pts * n_r, 0));
  auto tally = [&](std::vector<long>& c, std::size_t k, std::uint32_t m) {
    for (std::size_t r = 0; r < n_r; ++r)
      if ((m >> r) & 1u) ++c[k * n_r + r];
  };

  if (!plan.stochastic() && opts.mode != ReadoutMode::Collapse) {
    // One evolution; shots sample the stored joint distributions.
    std::vector<std::vector<double>> cdf;
    Eigen::MatrixXd expect(n_pts, n_r);
    Rng unused = make_rng(opts.seed, 0);
    Vector amps = initial;
    plan.prepare(amps, unused);
    int at = 0;
    for (std::size_t k = 0; k < n_pts; ++k) {
      for (; at < steps[k]; ++at) plan.step(amps, unused);
      auto p = readout_distribution(amps, layout, program.readout_qubits);
      for (std::size_t r = 0; r < n_r; ++r) {
        double s = 0;
        for (std::size_t m = 0; m < p.size(); ++m)
          if ((m >> r) & 1u) s += p[m];
        expect(k, r) = s;
      }
      for (std::size_t m = 1; m < p.size(); ++m) p[m] += p[m - 1];
      cdf.push_back(std::move(p));
    }
    tr.expectation = expect;
    parallel_shots(opts.shots, opts.threads, [&](int w, long lo, long hi) {
      for (long s = lo; s < hi; ++s) {
        Rng rng = make_rng(opts.seed, static_cast<std::uint64_t>(s));
        for (std::size_t k = 0; k < n_pts; ++k) {
          const double u = uniform01(rng) * cdf[k].back();
          const auto it = std::upper_bound(cdf[k].begin(), cdf[k].end(), u);
          const auto m = static_cast<std::uint32_t>(
              std::min<std::ptrdiff_t>(it - cdf[k].begin(), cdf[k].size() - 1));
          tally(counts[w], k, m);
        }
      }
    });
  } else if (opts.mode == ReadoutMode::Fresh) {
    parallel_shots(opts.shots, opts.threads, [&](int w, long lo, long hi) {
      for (long s = lo; s < hi; ++s)
        for (std::size_t k = 0; k < n_pts; ++k) {
          Rng rng = make_rng(opts.seed, static_cast<std::uint64_t>(s) * n_pts + k);
          const auto rec = run_shot(plan, initial, {steps[k]}, rng, ReadoutMode::Snapshot);
          tally(counts[w], k, rec.outcomes[0]);
        }
    });
  } else {
    parallel_shots(opts.shots, opts.threads, [&](int w, long lo, long hi) {
      for (long s = lo; s < hi; ++s) {
        Rng rng = make_rng(opts.seed, static_cast<std::uint64_t>(s));
        const auto rec = run_shot(plan, initial, steps, rng, opts.mode);
        for (std::size_t k = 0; k < n_pts; ++k) tally(counts[w], k, rec.outcomes[k]);
      }
    });
  }

  tr.mean.resize(n_pts, n_r);
  tr.se.resize(n_pts, n_r);
  for (std::size_t k = 0; k < n_pts; ++k)
    for (std::size_t r = 0; r < n_r; ++r) {
      long c = 0;
      for (const auto& w : counts) c += w[k * n_r + r];
      const double p = static_cast<double>(c) / opts.shots;
      tr.mean(k, r) = p;
      tr.se(k, r) = std::sqrt(p * (1 - p) / opts.shots);
    }
  return tr;
}

PopulationTrace run_experiment(const CompiledProgram& program, const RunOptions& opts) {
  return run_experiment(program, vacuum_state(program.layout).amplitudes, opts);
}

std::vector<PopulationTrace> cnot_sweep(const CompiledProgram& base, const std::vector<double>& eps,
                                        const RunOptions& opts) {
  std::vector<PopulationTrace> out;
  for (double e : eps) {
    NoiseModel nm;
    nm.eps_cnot = e;
    out.push_back(run_experiment(inject_noise(base, nm), opts));
  }
  return out;
}

std::string trace_csv(const PopulationTrace& trace) {
  std::string s = "time_ps";
  for (const auto& l : trace.labels) s += ",P_" + l + ",SE_" + l;
  s += '\n';
  char buf[40];
  for (Eigen::Index k = 0; k < trace.points(); ++k) {
    std::snprintf(buf, sizeof buf, "%.9g", trace.times[k] * 1e12);
    s += buf;
    for (Eigen::Index r = 0; r < trace.mean.cols(); ++r) {
      std::snprintf(buf, sizeof buf, ",%.9g", trace.mean(k, r));
      s += buf;
      std::snprintf(buf, sizeof buf, ",%.9g", trace.se(k, r));
      s += buf;
    }
    s += '\n';
  }
  return s;
}

void write_trace_csv(const std::string& path, const PopulationTrace& trace) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << trace_csv(trace);
  if (!f) throw std::runtime_error("write failed: " + path);
}

PopulationTrace read_trace_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read " + path);
  std::string line;
  std::getline(f, line);
  std::vector<std::string> cols;
  {
    std::stringstream ss(line);
    std::string c;
    while (std::getline(ss, c, ',')) cols.push_back(c);
  }
  if (cols.empty() || cols[0] != "time_ps" || cols.size() % 2 != 1)
    throw std::invalid_argument("not a population trace CSV: " + path);
  PopulationTrace tr;
  for (std::size_t i = 1; i < cols.size(); i += 2) tr.labels.push_back(cols[i].substr(2));
  std::vector<std::vector<double>> rows;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string c;
    std::vector<double> row;
    while (std::getline(ss, c, ',')) row.push_back(std::stod(c));
    if (row.size() != cols.size()) throw std::invalid_argument("ragged CSV row in " + path);
    rows.push_back(std::move(row));
  }
  const auto n = static_cast<Eigen::Index>(rows.size()), m = static_cast<Eigen::Index>(tr.labels.size());
  tr.mean.resize(n, m);
  tr.se.resize(n, m);
  for (Eigen::Index k = 0; k < n; ++k) {
    tr.times.push_back(rows[k][0] * 1e-12);
    for (Eigen::Index r = 0; r < m; ++r) {
      tr.mean(k, r) = rows[k][1 + 2 * r];
      tr.se(k, r) = rows[k][2 + 2 * r];
    }
  }
  return tr;
}

}  // namespace cqed
