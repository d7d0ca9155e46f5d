// Command-line runner for presets, config files, resource counts and circuits.

#include <cstdio>
#include <iostream>

#include "CLI11.hpp"
#include "cqed/experiments.hpp"
#include "json.hpp"

using namespace cqed;

namespace {

int print_resources(int n_sites, const std::string& arch) {
  const ResourceReport r =
      resource_count(n_sites, arch == "transmon" ? Architecture::Transmon : Architecture::CavityOnly);
  auto tally = [&](const GateTally& t) {
    nlohmann::json j;
    if (r.arch == Architecture::Transmon) j["cnot"] = t.cnot;
    else j["bs"] = t.bs;
    j["cd"] = t.cd;
    j["snap"] = t.snap;
    return j;
  };
  nlohmann::json j = tally(r.formula);
  j["arch"] = arch;
  j["n_sites"] = n_sites;
  if (r.walked) j["walked"] = tally(*r.walked);
  std::cout << j.dump() << '\n';
  return 0;
}

int print_derived(const std::string& params_file) {
  const ChromophoreParams cp = params_file.empty() ? ChromophoreParams{} : load_chromophore_params(params_file);
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [name, v] : derive_effective(cp).rows()) j[name] = v;
  std::cout << j.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid oscillator-qubit simulator for dissipative vibronic dynamics"};
  app.set_version_flag("--version", version_string());

  std::string command, preset, config_path, arch = "transmon", exact = "on", readout, split, params;
  int resources = 0;
  bool list = false, print_config = false, derive = false;
  std::optional<double> tau_fs, noise_cnot, cd_alpha;
  std::optional<int> steps, fock, threads, stride;
  std::optional<long> shots;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  bool emit = false, noise_cd = false, amp = false, dep = false;
  std::optional<double> ga_all, ga_a, ga_b, ga_c, gd_all, gd_a, gd_b, gd_c;

  app.add_option("command", command, "Optional command word")->check(CLI::IsMember({"run"}));
  app.add_option("--preset", preset, "Figure preset")->check(CLI::IsMember(preset_names()));
  app.add_option("--config", config_path, "Experiment config JSON (or a run manifest)");
  app.add_option("--params", params, "Chromophore parameter JSON");
  app.add_option("--tau-fs", tau_fs, "Trotter step in fs");
  app.add_option("--steps", steps, "Number of Trotter steps");
  app.add_option("--fock", fock, "Fock truncation per mode");
  app.add_option("--shots", shots, "Shots per time point");
  app.add_option("--seed", seed, "RNG seed");
  app.add_option("--threads", threads, "Worker threads for shots");
  app.add_option("--stride", stride, "Read out every k-th step");
  app.add_option("--out", out, "Output directory");
  app.add_option("--readout", readout, "snapshot, fresh or collapse")
      ->check(CLI::IsMember({"snapshot", "fresh", "collapse"}));
  app.add_option("--split", split, "Low-mode split: quarter or half")->check(CLI::IsMember({"quarter", "half"}));
  app.add_flag("--emit-circuit", emit, "Write the IR of one Trotter step");
  app.add_option("--resources", resources, "Print gate counts per Trotter step for N sites");
  app.add_option("--arch", arch, "transmon or cavity")->check(CLI::IsMember({"transmon", "cavity"}));
  app.add_option("--noise-cnot", noise_cnot, "CNOT infidelity");
  app.add_flag("--noise-cd", noise_cd, "Conditional-displacement gate noise");
  app.add_option("--cd-alpha", cd_alpha, "Displaced-frame amplitude for CD noise");
  app.add_flag("--amp", amp, "Enable amplitude damping at the parameter-file rate");
  app.add_flag("--dep", dep, "Enable dephasing at the parameter-file rate");
  app.add_option("--gamma-amp-all", ga_all, "Amplitude damping rate on every site (s^-1)");
  app.add_option("--gamma-amp-a", ga_a, "Amplitude damping rate on A");
  app.add_option("--gamma-amp-b", ga_b, "Amplitude damping rate on B");
  app.add_option("--gamma-amp-c", ga_c, "Amplitude damping rate on C");
  app.add_option("--gamma-dep-all", gd_all, "Dephasing rate on every site (s^-1)");
  app.add_option("--gamma-dep-a", gd_a, "Dephasing rate on A");
  app.add_option("--gamma-dep-b", gd_b, "Dephasing rate on B");
  app.add_option("--gamma-dep-c", gd_c, "Dephasing rate on C");
  app.add_option("--exact-angles", exact, "on: exact channel angles, off: first order")
      ->check(CLI::IsMember({"on", "off"}));
  app.add_flag("--list-presets", list, "List presets and exit");
  app.add_flag("--print-config", print_config, "Print the resolved config and exit");
  app.add_flag("--derive", derive, "Print the derived cQED parameters and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (list) {
      for (const auto& p : preset_names()) std::cout << p << '\n';
      return 0;
    }
    if (derive) return print_derived(params);
    if (resources > 0) return print_resources(resources, arch);

    ExperimentConfig c = !preset.empty() ? preset_config(preset) : ExperimentConfig{};
    if (!config_path.empty()) {
      ExperimentConfig file = load_config(config_path);
      if (!preset.empty() && file.preset.empty()) file.preset = preset;
      c = file;
    }
    if (!params.empty()) c.params_file = params;
    if (tau_fs) c.tau_fs = *tau_fs;
    if (steps) c.steps = *steps;
    if (fock) c.fock = *fock;
    if (shots) c.shots = *shots;
    if (seed) c.seed = *seed;
    if (threads) c.threads = *threads;
    if (stride) c.readout_stride = *stride;
    if (out) c.out = *out;
    if (!readout.empty())
      c.readout = readout == "snapshot" ? ReadoutMode::Snapshot
                  : readout == "fresh"  ? ReadoutMode::Fresh
                                        : ReadoutMode::Collapse;
    if (!split.empty()) c.split = split == "quarter" ? LowModeSplit::Quarter : LowModeSplit::Half;
    if (emit) c.emit_circuit = true;
    if (noise_cnot) c.noise_cnot = *noise_cnot;
    if (noise_cd) c.noise_cd = true;
    if (cd_alpha) c.cd_alpha = *cd_alpha;
    if (amp) c.amp = true;
    if (dep) c.dep = true;
    if (ga_all) c.gamma_amp_all = ga_all;
    if (ga_a) c.gamma_amp_a = ga_a;
    if (ga_b) c.gamma_amp_b = ga_b;
    if (ga_c) c.gamma_amp_c = ga_c;
    if (gd_all) c.gamma_dep_all = gd_all;
    if (gd_a) c.gamma_dep_a = gd_a;
    if (gd_b) c.gamma_dep_b = gd_b;
    if (gd_c) c.gamma_dep_c = gd_c;
    if (app.count("--exact-angles")) c.exact_angles = exact == "on";
    c.validate();

    if (print_config) {
      std::cout << config_to_json(c) << '\n';
      return 0;
    }
    const RunOutput r = run(c);
    for (const auto& f : r.files) std::cout << f << '\n';
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical abort: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
