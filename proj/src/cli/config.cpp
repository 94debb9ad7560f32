#include "tripod/cli/config.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>

namespace tripod::cli {

using nlohmann::json;

const char* to_string(Experiment e) {
  switch (e) {
    case Experiment::Efficiency: return "efficiency";
    case Experiment::Convergence: return "convergence";
    case Experiment::Regime: return "regime";
    case Experiment::Protocol: return "protocol";
    case Experiment::MaxwellBloch: return "maxwell_bloch";
  }
  return "?";
}

const char* to_string(Solver s) {
  switch (s) {
    case Solver::Analytic: return "analytic";
    case Solver::Goursat: return "goursat";
    case Solver::MaxwellBloch: return "mb";
  }
  return "?";
}

Solver parse_solver(const std::string& s) {
  if (s == "analytic") return Solver::Analytic;
  if (s == "goursat") return Solver::Goursat;
  if (s == "mb") return Solver::MaxwellBloch;
  throw ConfigError("unknown solver '" + s + "' (expected analytic, goursat or mb)");
}

namespace {

Experiment parse_experiment(const std::string& s) {
  for (auto e : {Experiment::Efficiency, Experiment::Convergence, Experiment::Regime,
                 Experiment::Protocol, Experiment::MaxwellBloch})
    if (s == to_string(e)) return e;
  throw ConfigError("unknown experiment '" + s + "'");
}

protocol::SwitchKind parse_switch(const std::string& s) {
  for (auto k : {protocol::SwitchKind::NuToZero, protocol::SwitchKind::ControlsOff,
                 protocol::SwitchKind::RetrievalSwap})
    if (s == protocol::to_string(k)) return k;
  throw ConfigError("unknown switch kind '" + s + "'");
}

const char* to_string(PulseShape s) {
  return s == PulseShape::GaussianDifference ? "gaussian_difference" : "tabulated";
}

PulseShape parse_shape(const std::string& s) {
  if (s == "gaussian_difference") return PulseShape::GaussianDifference;
  if (s == "tabulated") return PulseShape::Tabulated;
  throw ConfigError("unknown pulse shape '" + s + "'");
}

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) throw ConfigError(where + ": unknown key '" + k + "'");
}

std::string path(const std::string& where, const std::string& key) {
  return where.empty() ? key : where + "." + key;
}

void read(const json& j, const char* key, double& out, const std::string& where) {
  if (!j.contains(key)) return;
  const auto& v = j.at(key);
  if (!v.is_number()) throw ConfigError(path(where, key) + ": expected a number");
  out = v.get<double>();
  if (!std::isfinite(out)) throw ConfigError(path(where, key) + ": must be finite");
}

bool is_count(const json& v) {
  return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
}

void read(const json& j, const char* key, std::size_t& out, const std::string& where) {
  if (!j.contains(key)) return;
  const auto& v = j.at(key);
  if (!is_count(v)) throw ConfigError(path(where, key) + ": expected a non-negative integer");
  out = v.get<std::size_t>();
}

void read(const json& j, const char* key, bool& out, const std::string& where) {
  if (!j.contains(key)) return;
  const auto& v = j.at(key);
  if (!v.is_boolean()) throw ConfigError(path(where, key) + ": expected true or false");
  out = v.get<bool>();
}

void read(const json& j, const char* key, std::string& out, const std::string& where) {
  if (!j.contains(key)) return;
  const auto& v = j.at(key);
  if (!v.is_string()) throw ConfigError(path(where, key) + ": expected a string");
  out = v.get<std::string>();
}

void read(const json& j, const char* key, std::optional<double>& out, const std::string& where) {
  if (!j.contains(key)) return;
  if (j.at(key).is_null()) {
    out.reset();
    return;
  }
  double v = 0.0;
  read(j, key, v, where);
  out = v;
}

void read_list(const json& j, const char* key, std::vector<double>& out, const std::string& where) {
  if (!j.contains(key)) return;
  const auto& v = j.at(key);
  if (v.is_number()) {
    out = {v.get<double>()};
    return;
  }
  if (!v.is_array()) throw ConfigError(path(where, key) + ": expected a number or a list of numbers");
  out.clear();
  for (const auto& x : v) {
    if (!x.is_number()) throw ConfigError(path(where, key) + ": expected numbers");
    out.push_back(x.get<double>());
  }
}

std::pair<std::size_t, std::size_t> read_pair(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2 || !is_count(v[0]) || !is_count(v[1]))
    throw ConfigError(where + ": expected [n_tau, n_zeta]");
  return {v[0].get<std::size_t>(), v[1].get<std::size_t>()};
}

json complex_list(const std::vector<cplx>& v) {
  json a = json::array();
  for (const auto& z : v) a.push_back({z.real(), z.imag()});
  return a;
}

std::vector<cplx> read_complex_list(const json& v, const std::string& where) {
  if (!v.is_array()) throw ConfigError(where + ": expected a list");
  std::vector<cplx> out;
  for (const auto& x : v) {
    if (x.is_number()) {
      out.emplace_back(x.get<double>(), 0.0);
    } else if (x.is_array() && x.size() == 2 && x[0].is_number() && x[1].is_number()) {
      out.emplace_back(x[0].get<double>(), x[1].get<double>());
    } else {
      throw ConfigError(where + ": expected numbers or [re, im] pairs");
    }
  }
  return out;
}

void read_pulse(const json& j, PulseSpec& p) {
  const std::string w = "pulse";
  check_keys(j, {"shape", "amplitude", "tau_p", "center_offset", "detuned_carrier", "times", "values"}, w);
  std::string shape = to_string(p.shape);
  read(j, "shape", shape, w);
  p.shape = parse_shape(shape);
  read(j, "amplitude", p.amplitude, w);
  read(j, "tau_p", p.tau_p, w);
  read(j, "center_offset", p.center_offset, w);
  read(j, "detuned_carrier", p.detuned_carrier, w);
  read_list(j, "times", p.times, w);
  if (j.contains("values")) p.values = read_complex_list(j.at("values"), "pulse.values");
}

void overlay(ExperimentConfig& c, const json& j) {
  check_keys(j, {"preset", "name", "experiment", "solver", "nu0_tau_p", "beta", "zeta_L_over_tau_p", "pulse",
                 "tau", "goursat", "quadrature", "output", "convergence", "regime", "protocol", "medium",
                 "maxwell_bloch"},
             "config");
  read(j, "name", c.name, "");
  if (j.contains("experiment")) {
    std::string s;
    read(j, "experiment", s, "");
    c.experiment = parse_experiment(s);
  }
  if (j.contains("solver")) {
    std::string s;
    read(j, "solver", s, "");
    c.solver = parse_solver(s);
  }
  read_list(j, "nu0_tau_p", c.nu0_tau_p, "");
  read(j, "beta", c.beta, "");
  read_list(j, "zeta_L_over_tau_p", c.zeta_L_over_tau_p, "");
  if (j.contains("pulse")) read_pulse(j.at("pulse"), c.pulse);
  if (j.contains("tau")) {
    const auto& t = j.at("tau");
    check_keys(t, {"max", "samples", "long_tail", "long_tail_max", "long_tail_samples"}, "tau");
    read(t, "max", c.tau_max, "tau");
    read(t, "samples", c.tau_samples, "tau");
    read(t, "long_tail", c.long_tail, "tau");
    read(t, "long_tail_max", c.long_tail_max, "tau");
    read(t, "long_tail_samples", c.long_tail_samples, "tau");
  }
  if (j.contains("goursat")) {
    const auto& g = j.at("goursat");
    check_keys(g, {"n_tau", "n_zeta", "richardson"}, "goursat");
    read(g, "n_tau", c.grid_n_tau, "goursat");
    read(g, "n_zeta", c.grid_n_zeta, "goursat");
    read(g, "richardson", c.richardson, "goursat");
  }
  if (j.contains("quadrature")) {
    const auto& q = j.at("quadrature");
    check_keys(q, {"rel_tol"}, "quadrature");
    read(q, "rel_tol", c.rel_tol, "quadrature");
  }
  if (j.contains("output")) {
    const auto& o = j.at("output");
    check_keys(o, {"dir"}, "output");
    read(o, "dir", c.out_dir, "output");
  }
  if (j.contains("convergence")) {
    const auto& v = j.at("convergence");
    check_keys(v, {"ladder", "reference"}, "convergence");
    if (v.contains("ladder")) {
      if (!v.at("ladder").is_array()) throw ConfigError("convergence.ladder: expected a list");
      c.ladder.clear();
      for (const auto& e : v.at("ladder")) c.ladder.push_back(read_pair(e, "convergence.ladder"));
    }
    if (v.contains("reference")) {
      const auto r = read_pair(v.at("reference"), "convergence.reference");
      c.reference_n_tau = r.first;
      c.reference_n_zeta = r.second;
    }
  }
  if (j.contains("regime")) {
    const auto& r = j.at("regime");
    check_keys(r, {"tau", "optical_density", "delta_omega_eit"}, "regime");
    read(r, "tau", c.regime_tau, "regime");
    read(r, "optical_density", c.optical_density, "regime");
    read(r, "delta_omega_eit", c.delta_omega_eit, "regime");
  }
  if (j.contains("protocol")) {
    const auto& p = j.at("protocol");
    check_keys(p, {"storage_time", "switch", "retrieval_omega", "n_zeta"}, "protocol");
    read(p, "storage_time", c.storage_time, "protocol");
    if (p.contains("switch")) {
      std::string s;
      read(p, "switch", s, "protocol");
      c.switch_kind = parse_switch(s);
    }
    read(p, "retrieval_omega", c.retrieval_omega, "protocol");
    read(p, "n_zeta", c.protocol_n_zeta, "protocol");
  }
  if (j.contains("medium")) {
    const auto& m = j.at("medium");
    check_keys(m, {"omega", "gamma", "optical_density", "length", "c", "n1d"}, "medium");
    read(m, "omega", c.medium.omega, "medium");
    read(m, "gamma", c.medium.gamma, "medium");
    read(m, "optical_density", c.medium.optical_density, "medium");
    read(m, "length", c.medium.length, "medium");
    read(m, "c", c.medium.c, "medium");
    read(m, "n1d", c.medium.n1d, "medium");
  }
  if (j.contains("maxwell_bloch")) {
    const auto& m = j.at("maxwell_bloch");
    check_keys(m, {"n_z", "dt", "duration", "output_stride"}, "maxwell_bloch");
    read(m, "n_z", c.mb_n_z, "maxwell_bloch");
    read(m, "dt", c.mb_dt, "maxwell_bloch");
    read(m, "duration", c.mb_duration, "maxwell_bloch");
    read(m, "output_stride", c.mb_output_stride, "maxwell_bloch");
  }
  c.medium.beta = c.beta;
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

void ExperimentConfig::validate() const {
  auto need = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
  };
  need(!nu0_tau_p.empty(), "nu0_tau_p: at least one value required");
  for (double v : nu0_tau_p) need(std::isfinite(v), "nu0_tau_p: values must be finite");
  need(std::isfinite(beta), "beta must be finite");
  try {
    pulse.validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("pulse: ") + e.what());
  }
  need(rel_tol > 0 && rel_tol <= 1e-1, "quadrature.rel_tol must lie in (0, 0.1]");
  if (experiment == Experiment::MaxwellBloch) {
    need(solver == Solver::MaxwellBloch, "the maxwell_bloch experiment requires solver mb");
    try {
      medium.validate();
    } catch (const std::exception& e) {
      throw ConfigError(std::string("medium: ") + e.what());
    }
    need(mb_n_z >= 1, "maxwell_bloch.n_z must be >= 1");
    need(mb_dt >= 0, "maxwell_bloch.dt must be >= 0");
    need(mb_duration > 0, "maxwell_bloch.duration must be positive");
    need(mb_output_stride >= 1, "maxwell_bloch.output_stride must be >= 1");
    return;
  }
  need(solver != Solver::MaxwellBloch, std::string("solver mb is only available for the maxwell_bloch experiment"));
  need(!zeta_L_over_tau_p.empty(), "zeta_L_over_tau_p: at least one value required");
  for (double v : zeta_L_over_tau_p) need(std::isfinite(v) && v > 0, "zeta_L_over_tau_p: values must be positive");
  need(tau_max > 0, "tau.max must be positive");
  need(tau_samples >= 2, "tau.samples must be >= 2");
  if (long_tail) {
    need(long_tail_max > tau_max, "tau.long_tail_max must exceed tau.max");
    need(long_tail_samples >= 2, "tau.long_tail_samples must be >= 2");
  }
  need(grid_n_tau >= 1 && grid_n_zeta >= 1, "goursat grid counts must be >= 1");
  switch (experiment) {
    case Experiment::Convergence:
      need(solver == Solver::Goursat, "the convergence experiment requires solver goursat");
      need(ladder.size() >= 3, "convergence.ladder needs at least three grids");
      need(reference_n_tau >= 1 && reference_n_zeta >= 1, "convergence.reference counts must be >= 1");
      for (const auto& [nt, nz] : ladder)
        need(nt % reference_n_tau == 0 && nz % reference_n_zeta == 0,
             "convergence.ladder entries must be multiples of the reference grid");
      break;
    case Experiment::Regime:
      need(regime_tau > 0, "regime.tau must be positive");
      need(!optical_density || *optical_density > 0, "regime.optical_density must be positive");
      need(!delta_omega_eit || *delta_omega_eit > 0, "regime.delta_omega_eit must be positive");
      break;
    case Experiment::Protocol:
      need(storage_time >= 0, "protocol.storage_time must be >= 0");
      need(retrieval_omega > 0, "protocol.retrieval_omega must be positive");
      need(protocol_n_zeta >= 2, "protocol.n_zeta must be >= 2");
      break;
    default:
      break;
  }
}

json to_json(const ExperimentConfig& c) {
  json pulse = {{"shape", to_string(c.pulse.shape)},
                {"amplitude", c.pulse.amplitude},
                {"tau_p", c.pulse.tau_p},
                {"center_offset", c.pulse.center_offset},
                {"detuned_carrier", c.pulse.detuned_carrier},
                {"times", c.pulse.times},
                {"values", complex_list(c.pulse.values)}};
  json ladder = json::array();
  for (const auto& [nt, nz] : c.ladder) ladder.push_back({nt, nz});
  return {
      {"name", c.name},
      {"experiment", to_string(c.experiment)},
      {"solver", to_string(c.solver)},
      {"nu0_tau_p", c.nu0_tau_p},
      {"beta", c.beta},
      {"zeta_L_over_tau_p", c.zeta_L_over_tau_p},
      {"pulse", pulse},
      {"tau",
       {{"max", c.tau_max},
        {"samples", c.tau_samples},
        {"long_tail", c.long_tail},
        {"long_tail_max", c.long_tail_max},
        {"long_tail_samples", c.long_tail_samples}}},
      {"goursat", {{"n_tau", c.grid_n_tau}, {"n_zeta", c.grid_n_zeta}, {"richardson", c.richardson}}},
      {"quadrature", {{"rel_tol", c.rel_tol}}},
      {"output", {{"dir", c.out_dir}}},
      {"convergence", {{"ladder", ladder}, {"reference", {c.reference_n_tau, c.reference_n_zeta}}}},
      {"regime",
       {{"tau", c.regime_tau},
        {"optical_density", optional_json(c.optical_density)},
        {"delta_omega_eit", optional_json(c.delta_omega_eit)}}},
      {"protocol",
       {{"storage_time", c.storage_time},
        {"switch", protocol::to_string(c.switch_kind)},
        {"retrieval_omega", c.retrieval_omega},
        {"n_zeta", c.protocol_n_zeta}}},
      {"medium",
       {{"omega", c.medium.omega},
        {"gamma", c.medium.gamma},
        {"optical_density", c.medium.optical_density},
        {"length", c.medium.length},
        {"c", c.medium.c},
        {"n1d", c.medium.n1d}}},
      {"maxwell_bloch",
       {{"n_z", c.mb_n_z}, {"dt", c.mb_dt}, {"duration", c.mb_duration}, {"output_stride", c.mb_output_stride}}},
  };
}

ExperimentConfig from_json(const json& j) {
  try {
    if (!j.is_object()) throw ConfigError("config: expected a JSON object");
    ExperimentConfig c;
    if (j.contains("preset")) {
      if (!j.at("preset").is_string()) throw ConfigError("preset: expected a string");
      c = preset(j.at("preset").get<std::string>());
    }
    overlay(c, j);
    c.validate();
    return c;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) { return to_json(a) == to_json(b); }

std::vector<std::string> preset_names() {
  return {"fig2", "fig3", "convergence", "regime", "protocol", "maxwell-bloch"};
}

bool is_preset(const std::string& name) {
  for (const auto& n : preset_names())
    if (n == name) return true;
  return false;
}

ExperimentConfig preset(const std::string& name) {
  ExperimentConfig c;
  c.name = name;
  if (name == "fig2" || name == "fig3") {
    c.experiment = Experiment::Efficiency;
    c.nu0_tau_p = {1.0, 5.0, 10.0};
    c.zeta_L_over_tau_p = {1.0, 0.5, 0.25, 0.1};
    c.pulse.detuned_carrier = name == "fig3";
  } else if (name == "convergence") {
    c.experiment = Experiment::Convergence;
    c.solver = Solver::Goursat;
    c.nu0_tau_p = {5.0};
    c.zeta_L_over_tau_p = {1.0};
  } else if (name == "regime") {
    c.experiment = Experiment::Regime;
    c.nu0_tau_p = {10.0};
    c.zeta_L_over_tau_p = {1.0};
    c.pulse.detuned_carrier = true;
    c.regime_tau = 3.0;
  } else if (name == "protocol") {
    c.experiment = Experiment::Protocol;
    c.nu0_tau_p = {1.0};
    c.zeta_L_over_tau_p = {1.0};
    c.pulse.detuned_carrier = true;
  } else if (name == "maxwell-bloch") {
    c.experiment = Experiment::MaxwellBloch;
    c.solver = Solver::MaxwellBloch;
    c.nu0_tau_p = {5.0};
    c.medium.omega = 10.0;
    c.medium.gamma = 1.0;
    c.medium.optical_density = 200.0;
    c.medium.length = 1.0;
    c.medium.c = 100.0;
    c.medium.n1d = 1.0;
    // tau_p = 50 / (Omega^2 / (gamma sqrt(s)))
    c.pulse.tau_p = 50.0 * std::sqrt(200.0) / 100.0;
  } else {
    throw ConfigError("unknown preset '" + name + "'");
  }
  c.medium.beta = c.beta;
  return c;
}

ExperimentConfig load_config(const std::string& preset_or_path) {
  if (is_preset(preset_or_path)) return preset(preset_or_path);
  std::ifstream in(preset_or_path);
  if (!in) throw ConfigError("cannot open config '" + preset_or_path + "' (and it is not a preset name)");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(preset_or_path + ": " + e.what());
  }
  return from_json(j);
}

void apply_overrides(ExperimentConfig& c, const Overrides& o) {
  if (o.solver) c.solver = parse_solver(*o.solver);
  if (o.out_dir) c.out_dir = *o.out_dir;
  if (o.long_tail) c.long_tail = true;
  if (o.grid) {
    std::size_t n = 0, m = 0;
    char x = 0;
    std::istringstream is(*o.grid);
    if (o.grid->find_first_not_of("0123456789xX") != std::string::npos || !(is >> n >> x >> m) || (x != 'x' && x != 'X') || !is.eof() || n == 0 || m == 0)
      throw ConfigError("--grid expects NxM with positive integers, got '" + *o.grid + "'");
    c.grid_n_tau = n;
    c.grid_n_zeta = m;
  }
  if (o.tol) c.rel_tol = *o.tol;
  c.validate();
}

}  // namespace tripod::cli
