#pragma once

// Experiment configuration, figure presets, sweeps and trace comparison.

#include <optional>
#include <string>
#include <vector>

#include "cqed/engine.hpp"
#include "cqed/model.hpp"

namespace cqed {

enum class ModelKind { ThreeSite, SpinBoson };

struct ConvergenceSpec {
  std::vector<double> tau_fs{5, 10, 20, 40};  // first entry is the reference
  std::vector<long> shots{20000, 10000, 5000, 2500};
  std::vector<int> fock{16, 8, 4, 2};
  std::vector<std::string> classes{"tau", "shots", "fock"};
  int seeds = 5;

  bool operator==(const ConvergenceSpec&) const = default;
};

struct ExperimentConfig {
  std::string preset;  // name only; values below are already resolved
  ModelKind model = ModelKind::ThreeSite;
  std::string params_file;  // chromophore JSON; empty = built-in table
  double tau_fs = 10.0;
  int steps = 200;
  int fock = 8;
  long shots = 10000;
  std::uint64_t seed = 1;
  int threads = 1;
  int readout_stride = 1;
  ReadoutMode readout = ReadoutMode::Snapshot;
  LowModeSplit split = LowModeSplit::Quarter;
  bool exact_angles = true;

  // Dissipation toggles use the parameter-file rates unless overridden.
  bool amp = false, dep = false;
  std::optional<double> gamma_amp_all, gamma_amp_a, gamma_amp_b, gamma_amp_c;
  std::optional<double> gamma_dep_all, gamma_dep_a, gamma_dep_b, gamma_dep_c;

  double noise_cnot = 0.0;
  bool noise_cd = false;
  double cd_alpha = 30.0;

  SpinBosonParams spin_boson;
  std::vector<double> sweep_eps_cnot;  // non-empty: CNOT-infidelity sweep
  std::optional<ConvergenceSpec> convergence;

  std::string out = "out";
  bool emit_circuit = false;

  // Throws ConfigError on violated invariants.
  void validate() const;
  bool operator==(const ExperimentConfig&) const = default;
};

// Unknown fields and malformed values throw ConfigError. A "preset" field is
// applied first and the remaining fields override it.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);
std::string config_to_json(const ExperimentConfig& c);

std::vector<std::string> preset_names();
ExperimentConfig preset_config(const std::string& name);

// Per-site rates in (A, B, C) order after toggles and overrides.
ThreeSiteRates resolve_rates(const ExperimentConfig& c, const ChromophoreParams& cp);
ChromophoreParams resolve_params(const ExperimentConfig& c);

// Compiled program for the config with hardware noise injected.
CompiledProgram build_program(const ExperimentConfig& c);

struct RmseReport {
  std::vector<std::string> labels;
  std::vector<double> rmse;
};

// Per-label root-mean-square difference; the grids must match.
RmseReport rmse_report(const PopulationTrace& a, const PopulationTrace& b);

// Restricts a trace to the given times (each must be on its grid).
PopulationTrace restrict_to(const PopulationTrace& t, const std::vector<double>& times);
// Times present in every trace.
std::vector<double> common_times(const std::vector<PopulationTrace>& traces);

// Mean pairwise RMSE over group_a x group_b, divided by the range of the
// mean of `scale` per label, in percent. Traces are compared on their
// common time grid.
std::vector<double> ensemble_nrmse(const std::vector<PopulationTrace>& group_a,
                                   const std::vector<PopulationTrace>& group_b,
                                   const std::vector<PopulationTrace>& scale);

struct ConvergenceRow {
  std::string comparison;  // e.g. "5 - 10 fs"
  bool self_baseline = false;
  std::vector<double> nrmse_percent;
};

struct ConvergenceTable {
  std::string cls;
  std::vector<std::string> labels;
  std::vector<ConvergenceRow> rows;
};

// Bipartite 5-vs-5 comparison per class; the first value of each class is the
// reference. The base config supplies every other setting.
std::vector<ConvergenceTable> convergence_sweep(const ExperimentConfig& base,
                                                const ConvergenceSpec& spec);
std::string convergence_csv(const std::vector<ConvergenceTable>& tables);

struct RunOutput {
  std::vector<std::pair<std::string, PopulationTrace>> traces;  // name -> trace
  std::vector<ConvergenceTable> tables;  // convergence sweeps
  std::vector<std::string> files;
};

// Runs without touching the disk.
RunOutput execute(const ExperimentConfig& c);
// Runs and writes CSV, manifest and plot spec per trace into c.out.
RunOutput run(const ExperimentConfig& c);

std::string manifest_json(const ExperimentConfig& c, const std::string& trace_name,
                          double runtime_s);
std::string plot_spec_json(const ExperimentConfig& c, const PopulationTrace& trace,
                           const std::string& trace_name);
const char* version_string();

}  // namespace cqed
