#pragma once

// Shot-based execution of compiled programs: mid-circuit measurement/reset,
// Monte-Carlo wavefunction noise, and population-trace aggregation.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cqed/compiler.hpp"

namespace cqed {

struct CdNoiseParams {
  double kappa_1c = 1e3;     // cavity photon loss, s^-1
  double kappa_1q = 1e4;     // qubit decay, s^-1
  double kappa_phi_q = 5e3;  // qubit dephasing, s^-1
  double n_th = 0.0;         // accepted for completeness, not modeled
  double alpha = 30.0;       // displaced-frame amplitude
  double chi_disp = 2 * 3.14159265358979323846 * 5e4;  // rad/s

  double kappa_all() const { return kappa_1c + kappa_1q + kappa_phi_q; }
  double gate_time(double beta_abs) const { return beta_abs / (alpha * chi_disp); }
  void validate() const;
};

struct NoiseModel {
  double eps_cnot = 0.0;  // amp(eps) then dep(eps / 2) on the target of every CNOT-class gate
  std::optional<CdNoiseParams> cd;

  bool empty() const;
  void validate() const;
};

// kappa_all * |beta| / (alpha chi).
double cd_gate_error(double beta_abs, const CdNoiseParams& p);

// Returns a copy with noise events after every CNOT-class and CD gate. SWAPs
// are expanded to three CNOTs when CNOT noise is on. Throws ConfigError when
// a composed probability leaves [0, 1].
CompiledProgram inject_noise(const CompiledProgram& program, const NoiseModel& nm);

// Immutable kernels for one program; shared read-only by all shots.
class ExecutionPlan {
 public:
  explicit ExecutionPlan(const CompiledProgram& program);
  ExecutionPlan(const ExecutionPlan&);
  ExecutionPlan(ExecutionPlan&&) noexcept;
  ~ExecutionPlan();

  const CompiledProgram& program() const { return program_; }
  bool stochastic() const { return stochastic_; }

  void prepare(Vector& amps, Rng& rng) const;
  void step(Vector& amps, Rng& rng) const;

  struct Kernel;

 private:
  CompiledProgram program_;
  std::vector<Kernel> prep_, step_;
  bool stochastic_ = false;
};

enum class ReadoutMode {
  Snapshot,  // sample the terminal measurement from the running trajectory without collapse
  Fresh,     // independent trajectory from t = 0 for every (shot, point)
  Collapse,  // measure the readout qubits and continue from the collapsed state
};

struct RunOptions {
  long shots = 1000;
  std::uint64_t seed = 1;
  int threads = 1;
  ReadoutMode mode = ReadoutMode::Snapshot;
};

// Joint readout outcome per readout point; bit r is readout qubit r.
struct ShotRecord {
  std::vector<std::uint32_t> outcomes;
};

ShotRecord run_shot(const ExecutionPlan& plan, const Vector& initial,
                    const std::vector<int>& readout_steps, Rng& rng,
                    ReadoutMode mode = ReadoutMode::Snapshot);

struct PopulationTrace {
  std::vector<double> times;  // s
  std::vector<std::string> labels;
  Eigen::MatrixXd mean;  // points x labels, excited-state frequency
  Eigen::MatrixXd se;    // sqrt(p (1 - p) / shots)
  long shots = 0;
  // Exact circuit expectation, available when the program is deterministic.
  std::optional<Eigen::MatrixXd> expectation;

  Eigen::Index points() const { return mean.rows(); }
};

// Deterministic for fixed seed regardless of thread count. Deterministic
// programs are evolved once and sampled; stochastic ones run per-shot
// trajectories.
PopulationTrace run_experiment(const CompiledProgram& program, const Vector& initial,
                               const RunOptions& opts);
PopulationTrace run_experiment(const CompiledProgram& program, const RunOptions& opts);

// Excited-state populations of the noiseless circuit at each readout step.
Eigen::MatrixXd circuit_expectation(const CompiledProgram& program, const Vector& initial);

std::vector<PopulationTrace> cnot_sweep(const CompiledProgram& base, const std::vector<double>& eps,
                                        const RunOptions& opts);

void write_trace_csv(const std::string& path, const PopulationTrace& trace);
std::string trace_csv(const PopulationTrace& trace);
PopulationTrace read_trace_csv(const std::string& path);

}  // namespace cqed
