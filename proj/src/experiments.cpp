#include "cqed/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#ifndef CQED_VERSION
#define CQED_VERSION "0.1.0"
#endif

namespace cqed {

using json = nlohmann::json;

const char* version_string() { return CQED_VERSION; }

namespace {

[[noreturn]] void bad_field(const std::string& key, const char* want) {
  throw ConfigError("config field '" + key + "' must be " + want);
}

double as_number(const json& v, const std::string& key) {
  if (!v.is_number()) bad_field(key, "a number");
  return v.get<double>();
}

long as_integer(const json& v, const std::string& key) {
  if (!v.is_number_integer()) bad_field(key, "an integer");
  return v.get<long>();
}

bool as_bool(const json& v, const std::string& key) {
  if (!v.is_boolean()) bad_field(key, "true or false");
  return v.get<bool>();
}

std::string as_string(const json& v, const std::string& key) {
  if (!v.is_string()) bad_field(key, "a string");
  return v.get<std::string>();
}

std::optional<double> as_optional(const json& v, const std::string& key) {
  if (v.is_null()) return std::nullopt;
  return as_number(v, key);
}

template <class T, class F>
std::vector<T> as_list(const json& v, const std::string& key, F&& item) {
  if (!v.is_array()) bad_field(key, "an array");
  std::vector<T> out;
  for (const auto& x : v) out.push_back(item(x, key));
  return out;
}

const char* readout_name(ReadoutMode m) {
  switch (m) {
    case ReadoutMode::Snapshot: return "snapshot";
    case ReadoutMode::Fresh: return "fresh";
    case ReadoutMode::Collapse: return "collapse";
  }
  return "snapshot";
}

ReadoutMode readout_from(const std::string& s) {
  if (s == "snapshot") return ReadoutMode::Snapshot;
  if (s == "fresh") return ReadoutMode::Fresh;
  if (s == "collapse") return ReadoutMode::Collapse;
  throw ConfigError("readout must be snapshot, fresh or collapse");
}

void apply_spin_boson(SpinBosonParams& sb, const json& j) {
  if (!j.is_object()) bad_field("spin_boson", "an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    const double v = as_number(it.value(), "spin_boson." + k);
    if (k == "E0") sb.E0 = v;
    else if (k == "eta") sb.eta = v;
    else if (k == "omega_c_cm") sb.omega_c_cm = v;
    else if (k == "T") sb.T = v;
    else if (k == "eta_x") sb.eta_x = v;
    else if (k == "eta_y") sb.eta_y = v;
    else if (k == "eta_z") sb.eta_z = v;
    else if (k == "eta_I") sb.eta_I = v;
    else throw ConfigError("unknown config field 'spin_boson." + k + "'");
  }
}

ConvergenceSpec parse_convergence(const json& j) {
  if (!j.is_object()) bad_field("convergence", "an object");
  ConvergenceSpec s;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string k = "convergence." + it.key();
    const json& v = it.value();
    if (it.key() == "tau_fs") s.tau_fs = as_list<double>(v, k, as_number);
    else if (it.key() == "shots") s.shots = as_list<long>(v, k, as_integer);
    else if (it.key() == "fock")
      s.fock = as_list<int>(v, k, [](const json& x, const std::string& kk) { return int(as_integer(x, kk)); });
    else if (it.key() == "classes") s.classes = as_list<std::string>(v, k, as_string);
    else if (it.key() == "seeds") s.seeds = static_cast<int>(as_integer(v, k));
    else throw ConfigError("unknown config field '" + k + "'");
  }
  return s;
}

void apply_field(ExperimentConfig& c, const std::string& k, const json& v) {
  if (k == "preset") c.preset = as_string(v, k);
  else if (k == "model") {
    const auto s = as_string(v, k);
    if (s == "three_site") c.model = ModelKind::ThreeSite;
    else if (s == "spin_boson") c.model = ModelKind::SpinBoson;
    else throw ConfigError("model must be three_site or spin_boson");
  } else if (k == "params_file") c.params_file = as_string(v, k);
  else if (k == "tau_fs") c.tau_fs = as_number(v, k);
  else if (k == "steps") c.steps = static_cast<int>(as_integer(v, k));
  else if (k == "fock") c.fock = static_cast<int>(as_integer(v, k));
  else if (k == "shots") c.shots = as_integer(v, k);
  else if (k == "seed") {
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<long>() < 0))
      bad_field(k, "a non-negative integer");
    c.seed = v.get<std::uint64_t>();
  } else if (k == "threads") c.threads = static_cast<int>(as_integer(v, k));
  else if (k == "readout_stride") c.readout_stride = static_cast<int>(as_integer(v, k));
  else if (k == "readout") c.readout = readout_from(as_string(v, k));
  else if (k == "split") {
    const auto s = as_string(v, k);
    if (s == "quarter") c.split = LowModeSplit::Quarter;
    else if (s == "half") c.split = LowModeSplit::Half;
    else throw ConfigError("split must be quarter or half");
  } else if (k == "exact_angles") c.exact_angles = as_bool(v, k);
  else if (k == "amp") c.amp = as_bool(v, k);
  else if (k == "dep") c.dep = as_bool(v, k);
  else if (k == "gamma_amp_all") c.gamma_amp_all = as_optional(v, k);
  else if (k == "gamma_amp_a") c.gamma_amp_a = as_optional(v, k);
  else if (k == "gamma_amp_b") c.gamma_amp_b = as_optional(v, k);
  else if (k == "gamma_amp_c") c.gamma_amp_c = as_optional(v, k);
  else if (k == "gamma_dep_all") c.gamma_dep_all = as_optional(v, k);
  else if (k == "gamma_dep_a") c.gamma_dep_a = as_optional(v, k);
  else if (k == "gamma_dep_b") c.gamma_dep_b = as_optional(v, k);
  else if (k == "gamma_dep_c") c.gamma_dep_c = as_optional(v, k);
  else if (k == "noise_cnot") c.noise_cnot = as_number(v, k);
  else if (k == "noise_cd") c.noise_cd = as_bool(v, k);
  else if (k == "cd_alpha") c.cd_alpha = as_number(v, k);
  else if (k == "spin_boson") apply_spin_boson(c.spin_boson, v);
  else if (k == "sweep_eps_cnot") c.sweep_eps_cnot = as_list<double>(v, k, as_number);
  else if (k == "convergence") {
    if (v.is_null()) c.convergence.reset();
    else c.convergence = parse_convergence(v);
  } else if (k == "out") c.out = as_string(v, k);
  else if (k == "emit_circuit") c.emit_circuit = as_bool(v, k);
  else throw ConfigError("unknown config field '" + k + "'");
}

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

void ExperimentConfig::validate() const {
  if (!(tau_fs > 0) || !std::isfinite(tau_fs)) throw ConfigError("tau_fs must be > 0");
  if (steps < 0) throw ConfigError("steps must be >= 0");
  if (fock < 2) throw ConfigError("fock must be >= 2");
  if (shots < 1) throw ConfigError("shots must be >= 1");
  if (threads < 1) throw ConfigError("threads must be >= 1");
  if (readout_stride < 1) throw ConfigError("readout_stride must be >= 1");
  if (model == ModelKind::ThreeSite && 32.0 * std::pow(double(fock), 4) > double(1 << 25))
    throw ConfigError("fock truncation too large for the state-vector engine");
  for (const auto& g : {gamma_amp_all, gamma_amp_a, gamma_amp_b, gamma_amp_c, gamma_dep_all,
                        gamma_dep_a, gamma_dep_b, gamma_dep_c})
    if (g && !(*g >= 0 && std::isfinite(*g))) throw ConfigError("rates must be finite and >= 0");
  if (!(noise_cnot >= 0 && noise_cnot <= 1)) throw ConfigError("noise_cnot must lie in [0, 1]");
  if (!(cd_alpha > 0)) throw ConfigError("cd_alpha must be > 0");
  for (double e : sweep_eps_cnot)
    if (!(e >= 0 && e <= 1)) throw ConfigError("sweep_eps_cnot entries must lie in [0, 1]");
  if (convergence) {
    const auto& s = *convergence;
    if (s.seeds < 1) throw ConfigError("convergence.seeds must be >= 1");
    if (s.tau_fs.empty() || s.shots.empty() || s.fock.empty())
      throw ConfigError("convergence value lists must be non-empty");
    for (double t : s.tau_fs)
      if (!(t > 0)) throw ConfigError("convergence.tau_fs entries must be > 0");
    for (long n : s.shots)
      if (n < 1) throw ConfigError("convergence.shots entries must be >= 1");
    for (int f : s.fock)
      if (f < 2) throw ConfigError("convergence.fock entries must be >= 2");
    for (const auto& cls : s.classes)
      if (cls != "tau" && cls != "shots" && cls != "fock")
        throw ConfigError("convergence class must be tau, shots or fock");
  }
  spin_boson.validate();
}

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  ExperimentConfig c;
  if (j.contains("preset")) {
    const std::string name = as_string(j["preset"], "preset");
    if (!name.empty()) c = preset_config(name);
  }
  for (auto it = j.begin(); it != j.end(); ++it) apply_field(c, it.key(), it.value());
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  // A run manifest embeds its resolved config.
  try {
    const json j = json::parse(ss.str());
    if (j.is_object() && j.contains("tool") && j.contains("config")) return parse_config(j["config"].dump());
  } catch (const json::exception&) {
  }
  return parse_config(ss.str());
}

std::string config_to_json(const ExperimentConfig& c) {
  json j;
  j["preset"] = c.preset;
  j["model"] = c.model == ModelKind::ThreeSite ? "three_site" : "spin_boson";
  j["params_file"] = c.params_file;
  j["tau_fs"] = c.tau_fs;
  j["steps"] = c.steps;
  j["fock"] = c.fock;
  j["shots"] = c.shots;
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  j["readout_stride"] = c.readout_stride;
  j["readout"] = readout_name(c.readout);
  j["split"] = c.split == LowModeSplit::Quarter ? "quarter" : "half";
  j["exact_angles"] = c.exact_angles;
  j["amp"] = c.amp;
  j["dep"] = c.dep;
  j["gamma_amp_all"] = opt_json(c.gamma_amp_all);
  j["gamma_amp_a"] = opt_json(c.gamma_amp_a);
  j["gamma_amp_b"] = opt_json(c.gamma_amp_b);
  j["gamma_amp_c"] = opt_json(c.gamma_amp_c);
  j["gamma_dep_all"] = opt_json(c.gamma_dep_all);
  j["gamma_dep_a"] = opt_json(c.gamma_dep_a);
  j["gamma_dep_b"] = opt_json(c.gamma_dep_b);
  j["gamma_dep_c"] = opt_json(c.gamma_dep_c);
  j["noise_cnot"] = c.noise_cnot;
  j["noise_cd"] = c.noise_cd;
  j["cd_alpha"] = c.cd_alpha;
  const auto& sb = c.spin_boson;
  j["spin_boson"] = {{"E0", sb.E0},       {"eta", sb.eta},     {"omega_c_cm", sb.omega_c_cm},
                     {"T", sb.T},         {"eta_x", sb.eta_x}, {"eta_y", sb.eta_y},
                     {"eta_z", sb.eta_z}, {"eta_I", sb.eta_I}};
  j["sweep_eps_cnot"] = c.sweep_eps_cnot;
  if (c.convergence) {
    const auto& s = *c.convergence;
    j["convergence"] = {{"tau_fs", s.tau_fs}, {"shots", s.shots}, {"fock", s.fock},
                        {"classes", s.classes}, {"seeds", s.seeds}};
  } else {
    j["convergence"] = nullptr;
  }
  j["out"] = c.out;
  j["emit_circuit"] = c.emit_circuit;
  return j.dump(2);
}

std::vector<std::string> preset_names() {
  return {"fig3", "fig4", "fig5", "fig6", "fig8", "fig9", "fig10", "appD"};
}

ExperimentConfig preset_config(const std::string& name) {
  ExperimentConfig c;
  c.preset = name;
  if (name == "fig3") {
    c.model = ModelKind::SpinBoson;
    c.shots = 2000;
  } else if (name == "fig4") {
  } else if (name == "fig5") {
    c.amp = true;
  } else if (name == "fig6") {
    c.dep = true;
  } else if (name == "fig8") {
    c.amp = c.dep = true;
  } else if (name == "fig9") {
    c.sweep_eps_cnot = {1e-2, 1e-3, 1e-4, 1e-5};
  } else if (name == "fig10") {
    c.noise_cd = true;
  } else if (name == "appD") {
    c.amp = c.dep = true;
    c.convergence = ConvergenceSpec{};
  } else {
    std::string known;
    for (const auto& n : preset_names()) known += " " + n;
    throw ConfigError("unknown preset '" + name + "' (known:" + known + ")");
  }
  return c;
}

ChromophoreParams resolve_params(const ExperimentConfig& c) {
  ChromophoreParams cp = c.params_file.empty() ? ChromophoreParams{} : load_chromophore_params(c.params_file);
  cp.validate();
  return cp;
}

ThreeSiteRates resolve_rates(const ExperimentConfig& c, const ChromophoreParams& cp) {
  auto pick = [](bool on, const std::optional<double>& all, double base, const std::optional<double>& site) {
    if (site) return *site;
    if (on || all) return all ? *all : base;
    return 0.0;
  };
  ThreeSiteRates r;
  r.a.amp = pick(c.amp, c.gamma_amp_all, cp.gamma_amp_all, c.gamma_amp_a);
  r.b.amp = pick(c.amp, c.gamma_amp_all, cp.gamma_amp_all, c.gamma_amp_b);
  r.c.amp = pick(c.amp, c.gamma_amp_all, cp.gamma_amp_all, c.gamma_amp_c);
  r.a.dep = pick(c.dep, c.gamma_dep_all, cp.gamma_dep_all, c.gamma_dep_a);
  r.b.dep = pick(c.dep, c.gamma_dep_all, cp.gamma_dep_all, c.gamma_dep_b);
  r.c.dep = pick(c.dep, c.gamma_dep_all, cp.gamma_dep_all, c.gamma_dep_c);
  return r;
}

CompiledProgram build_program(const ExperimentConfig& c) {
  c.validate();
  const double tau = c.tau_fs * 1e-15;
  const AngleFormula formula = c.exact_angles ? AngleFormula::Exact : AngleFormula::FirstOrder;
  CompiledProgram prog;
  try {
    if (c.model == ModelKind::SpinBoson) {
      prog = compile_spin_boson(c.spin_boson, tau, c.steps, formula, c.readout_stride);
    } else {
      const ChromophoreParams cp = resolve_params(c);
      TrotterPlan plan;
      plan.tau = tau;
      plan.n_steps = c.steps;
      plan.split = c.split;
      const ThreeSiteRates r = resolve_rates(c, cp);
      const bool diss = r.a.any() || r.b.any() || r.c.any();
      prog = compile_three_site(derive_effective(cp), c.fock, plan,
                                diss ? std::optional<ThreeSiteRates>(r) : std::nullopt, formula,
                                c.readout_stride);
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("cannot compile config: ") + e.what());
  }
  NoiseModel nm;
  nm.eps_cnot = c.noise_cnot;
  if (c.noise_cd) {
    CdNoiseParams cd;
    cd.alpha = c.cd_alpha;
    nm.cd = cd;
  }
  return inject_noise(prog, nm);
}

namespace {

PopulationTrace run_single(const ExperimentConfig& c) {
  const CompiledProgram prog = build_program(c);
  RunOptions o;
  o.shots = c.shots;
  o.seed = c.seed;
  o.threads = c.threads;
  o.mode = c.readout;
  return run_experiment(prog, o);
}

std::string base_name(const ExperimentConfig& c) { return c.preset.empty() ? "run" : c.preset; }

std::string fmt_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

// (name, config) pairs for plain and sweep runs.
std::vector<std::pair<std::string, ExperimentConfig>> plan_runs(const ExperimentConfig& c) {
  std::vector<std::pair<std::string, ExperimentConfig>> runs;
  if (c.sweep_eps_cnot.empty()) {
    runs.emplace_back(base_name(c), c);
    return runs;
  }
  std::vector<double> eps{0.0};
  eps.insert(eps.end(), c.sweep_eps_cnot.begin(), c.sweep_eps_cnot.end());
  for (double e : eps) {
    ExperimentConfig r = c;
    r.sweep_eps_cnot.clear();
    r.noise_cnot = e;
    runs.emplace_back(base_name(c) + "_eps" + fmt_g(e), r);
  }
  return runs;
}

bool same_time(double a, double b) {
  return std::abs(a - b) <= 1e-9 * std::max({std::abs(a), std::abs(b), 1e-15});
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
  if (!f) throw std::runtime_error("write failed: " + path);
}

const char* caption_for(const std::string& preset) {
  if (preset == "fig3") return "Spin-boson model: excited-state population of the system qubit.";
  if (preset == "fig4") return "Three-site dynamics without dissipation.";
  if (preset == "fig5") return "Three-site dynamics with amplitude damping.";
  if (preset == "fig6") return "Three-site dynamics with dephasing.";
  if (preset == "fig8") return "Three-site dynamics with amplitude damping and dephasing.";
  if (preset == "fig9") return "Three-site dynamics under CNOT infidelity.";
  if (preset == "fig10") return "Three-site dynamics with conditional-displacement gate noise.";
  if (preset == "appD") return "Convergence sweep over step size, shots and Fock truncation.";
  return "Excited-state populations.";
}

}  // namespace

RunOutput execute(const ExperimentConfig& c) {
  c.validate();
  RunOutput out;
  if (c.convergence) {
    out.tables = convergence_sweep(c, *c.convergence);
    return out;
  }
  for (const auto& [name, cfg] : plan_runs(c)) out.traces.emplace_back(name, run_single(cfg));
  return out;
}

std::string manifest_json(const ExperimentConfig& c, const std::string& trace_name, double runtime_s) {
  json j;
  j["tool"] = "cqedsim";
  j["version"] = version_string();
  j["trace"] = trace_name;
  j["seed"] = c.seed;
  j["runtime_s"] = runtime_s;
  j["config"] = json::parse(config_to_json(c));
  return j.dump(2);
}

std::string plot_spec_json(const ExperimentConfig& c, const PopulationTrace& trace,
                           const std::string& trace_name) {
  json j;
  j["preset"] = c.preset;
  j["trace"] = trace_name;
  j["csv"] = trace_name + ".csv";
  j["caption"] = caption_for(c.preset);
  j["x"] = {{"column", "time_ps"}, {"label", "Time (ps)"}};
  j["y"] = {{"label", "Excited-state population"}, {"range", {0.0, 1.0}}};
  json series = json::array();
  for (const auto& l : trace.labels)
    series.push_back({{"label", l}, {"y", "P_" + l}, {"error", "SE_" + l}});
  j["series"] = series;
  return j.dump(2);
}

RunOutput run(const ExperimentConfig& c) {
  c.validate();
  namespace fs = std::filesystem;
  fs::create_directories(c.out);
  RunOutput out;
  auto path = [&](const std::string& f) { return (fs::path(c.out) / f).string(); };

  if (c.convergence) {
    const auto t0 = std::chrono::steady_clock::now();
    out.tables = convergence_sweep(c, *c.convergence);
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const std::string name = base_name(c) + "_convergence";
    write_text(path(name + ".csv"), convergence_csv(out.tables));
    write_text(path(name + ".manifest.json"), manifest_json(c, name, dt));
    out.files = {path(name + ".csv"), path(name + ".manifest.json")};
    return out;
  }

  for (const auto& [name, cfg] : plan_runs(c)) {
    const auto t0 = std::chrono::steady_clock::now();
    const CompiledProgram prog = build_program(cfg);
    if (cfg.emit_circuit) {
      Circuit circ{prog.layout, prog.preparation};
      circ.append(prog.step());
      write_text(path(name + ".circuit.txt"), to_text(circ));
      out.files.push_back(path(name + ".circuit.txt"));
    }
    RunOptions o;
    o.shots = cfg.shots;
    o.seed = cfg.seed;
    o.threads = cfg.threads;
    o.mode = cfg.readout;
    PopulationTrace tr = run_experiment(prog, o);
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_trace_csv(path(name + ".csv"), tr);
    write_text(path(name + ".manifest.json"), manifest_json(cfg, name, dt));
    write_text(path(name + ".plot.json"), plot_spec_json(cfg, tr, name));
    for (const char* ext : {".csv", ".manifest.json", ".plot.json"}) out.files.push_back(path(name + ext));
    out.traces.emplace_back(name, std::move(tr));
  }
  return out;
}

RmseReport rmse_report(const PopulationTrace& a, const PopulationTrace& b) {
  if (a.points() != b.points() || a.times.size() != b.times.size())
    throw std::invalid_argument("rmse_report: time grids differ in length");
  for (std::size_t k = 0; k < a.times.size(); ++k)
    if (!same_time(a.times[k], b.times[k])) throw std::invalid_argument("rmse_report: time grids differ");
  if (a.labels != b.labels) throw std::invalid_argument("rmse_report: labels differ");
  RmseReport r;
  r.labels = a.labels;
  for (Eigen::Index j = 0; j < a.mean.cols(); ++j)
    r.rmse.push_back(a.points() == 0 ? 0.0
                                     : std::sqrt((a.mean.col(j) - b.mean.col(j)).squaredNorm() / a.points()));
  return r;
}

PopulationTrace restrict_to(const PopulationTrace& t, const std::vector<double>& times) {
  PopulationTrace out;
  out.labels = t.labels;
  out.shots = t.shots;
  out.mean.resize(static_cast<Eigen::Index>(times.size()), t.mean.cols());
  out.se.resize(out.mean.rows(), t.mean.cols());
  std::size_t k = 0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    while (k < t.times.size() && !same_time(t.times[k], times[i]) && t.times[k] < times[i]) ++k;
    if (k == t.times.size() || !same_time(t.times[k], times[i]))
      throw std::invalid_argument("restrict_to: time not on the trace grid");
    out.times.push_back(t.times[k]);
    out.mean.row(i) = t.mean.row(k);
    out.se.row(i) = t.se.row(k);
  }
  return out;
}

std::vector<double> common_times(const std::vector<PopulationTrace>& traces) {
  if (traces.empty()) return {};
  std::vector<double> out = traces[0].times;
  for (std::size_t i = 1; i < traces.size(); ++i) {
    std::vector<double> keep;
    for (double t : out)
      for (double u : traces[i].times)
        if (same_time(t, u)) {
          keep.push_back(t);
          break;
        }
    out = std::move(keep);
  }
  return out;
}

std::vector<double> ensemble_nrmse(const std::vector<PopulationTrace>& group_a,
                                   const std::vector<PopulationTrace>& group_b,
                                   const std::vector<PopulationTrace>& scale) {
  if (group_a.empty() || group_b.empty() || scale.empty())
    throw std::invalid_argument("ensemble_nrmse: empty group");
  std::vector<PopulationTrace> all = group_a;
  all.insert(all.end(), group_b.begin(), group_b.end());
  all.insert(all.end(), scale.begin(), scale.end());
  const auto grid = common_times(all);
  if (grid.size() < 2) throw std::invalid_argument("ensemble_nrmse: traces share fewer than two time points");

  const auto n_lab = group_a[0].labels.size();
  std::vector<double> acc(n_lab, 0.0);
  for (const auto& a : group_a) {
    const auto ra = restrict_to(a, grid);
    for (const auto& b : group_b) {
      const auto r = rmse_report(ra, restrict_to(b, grid));
      for (std::size_t j = 0; j < n_lab; ++j) acc[j] += r.rmse[j];
    }
  }
  Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(grid.size()), n_lab);
  for (const auto& s : scale) mean += restrict_to(s, grid).mean;
  mean /= static_cast<double>(scale.size());

  std::vector<double> out(n_lab);
  const double pairs = static_cast<double>(group_a.size() * group_b.size());
  for (std::size_t j = 0; j < n_lab; ++j) {
    const double range = mean.col(j).maxCoeff() - mean.col(j).minCoeff();
    const double rmse = acc[j] / pairs;
    out[j] = range > 0 ? 100.0 * rmse / range : (rmse == 0 ? 0.0 : INFINITY);
  }
  return out;
}

std::vector<ConvergenceTable> convergence_sweep(const ExperimentConfig& base, const ConvergenceSpec& spec) {
  ExperimentConfig b = base;
  b.convergence.reset();
  b.sweep_eps_cnot.clear();
  b.validate();
  const double t_end_fs = base.tau_fs * base.steps;

  auto group = [&](ExperimentConfig c, std::uint64_t first_seed) {
    std::vector<PopulationTrace> g;
    for (int s = 0; s < spec.seeds; ++s) {
      c.seed = first_seed + static_cast<std::uint64_t>(s);
      g.push_back(run_single(c));
    }
    return g;
  };

  std::vector<ConvergenceTable> tables;
  for (const auto& cls : spec.classes) {
    std::vector<ExperimentConfig> variants;
    std::vector<std::string> names;
    std::string unit;
    if (cls == "tau") {
      unit = " fs";
      for (double t : spec.tau_fs) {
        ExperimentConfig c = b;
        c.tau_fs = t;
        c.steps = static_cast<int>(std::lround(t_end_fs / t));
        variants.push_back(c);
        names.push_back(fmt_g(t));
      }
    } else if (cls == "shots") {
      unit = " shots";
      for (long n : spec.shots) {
        ExperimentConfig c = b;
        c.shots = n;
        variants.push_back(c);
        names.push_back(std::to_string(n));
      }
    } else {
      unit = " Fock levels";
      for (int f : spec.fock) {
        ExperimentConfig c = b;
        c.fock = f;
        variants.push_back(c);
        names.push_back(std::to_string(f));
      }
    }
    const auto ref_a = group(variants[0], base.seed);
    ConvergenceTable t;
    t.cls = cls;
    t.labels = ref_a[0].labels;
    for (std::size_t v = 0; v < variants.size(); ++v) {
      const auto other = group(variants[v], base.seed + 1000 + 100 * v);
      ConvergenceRow row;
      row.comparison = names[0] + " - " + names[v] + unit;
      row.self_baseline = v == 0;
      row.nrmse_percent = ensemble_nrmse(ref_a, other, ref_a);
      t.rows.push_back(std::move(row));
    }
    tables.push_back(std::move(t));
  }
  return tables;
}

std::string convergence_csv(const std::vector<ConvergenceTable>& tables) {
  std::ostringstream os;
  os << "class,comparison,self_baseline";
  if (!tables.empty())
    for (const auto& l : tables[0].labels) os << ",NRMSE_" << l << "_percent";
  os << '\n';
  char buf[32];
  for (const auto& t : tables)
    for (const auto& r : t.rows) {
      os << t.cls << ',' << r.comparison << ',' << (r.self_baseline ? 1 : 0);
      for (double v : r.nrmse_percent) {
        std::snprintf(buf, sizeof buf, ",%.4g", v);
        os << buf;
      }
      os << '\n';
    }
  return os.str();
}

}  // namespace cqed
