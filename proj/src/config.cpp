#include "cavmag/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "cavmag/errors.hpp"

namespace cavmag {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_list(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += fmt(v[i]);
  }
  return out;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Parser {
  std::vector<std::string> errors;

  bool to_double(const std::string& key, const std::string& v, double& out) {
    char* end = nullptr;
    out = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0' || !std::isfinite(out)) {
      errors.push_back(key + ": not a finite number: '" + v + "'");
      return false;
    }
    return true;
  }

  bool to_int(const std::string& key, const std::string& v, int& out) {
    double d;
    if (!to_double(key, v, d)) return false;
    if (d != std::floor(d) || std::abs(d) > 2e9) {
      errors.push_back(key + ": not an integer: '" + v + "'");
      return false;
    }
    out = static_cast<int>(d);
    return true;
  }

  bool to_u64(const std::string& key, const std::string& v,
              std::uint64_t& out) {
    char* end = nullptr;
    unsigned long long u = std::strtoull(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0' || v.find('-') != std::string::npos) {
      errors.push_back(key + ": not an unsigned integer: '" + v + "'");
      return false;
    }
    out = u;
    return true;
  }

  bool to_bool(const std::string& key, const std::string& v, bool& out) {
    if (v == "true" || v == "1") {
      out = true;
      return true;
    }
    if (v == "false" || v == "0") {
      out = false;
      return true;
    }
    errors.push_back(key + ": not a boolean (true/false): '" + v + "'");
    return false;
  }

  bool to_list(const std::string& key, const std::string& v,
               std::vector<double>& out) {
    out.clear();
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (item.empty()) continue;
      double d;
      if (!to_double(key, item, d)) return false;
      out.push_back(d);
    }
    return true;
  }
};

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  Parser ps;
  std::string section;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;

  auto handle = [&](const std::string& key, const std::string& value) {
    const std::string where = "[" + section + "] " + key;
    auto dbl = [&](double& target) { ps.to_double(where, value, target); };
    auto itg = [&](int& target) { ps.to_int(where, value, target); };
    auto bol = [&](bool& target) { ps.to_bool(where, value, target); };
    auto lst = [&](std::vector<double>& target) {
      ps.to_list(where, value, target);
    };

    if (section == "model") {
      auto& p = cfg.params;
      if (key == "delta_c") dbl(p.delta_c);
      else if (key == "u0") dbl(p.u0);
      else if (key == "eta0") dbl(p.eta0);
      else if (key == "kappa") dbl(p.kappa);
      else if (key == "n_atoms") dbl(p.n_atoms);
      else if (key == "delta") dbl(p.delta);
      else if (key == "b_parallel") dbl(p.b_parallel);
      else if (key == "b_perp") dbl(p.b_perp);
      else if (key == "omega_ac") dbl(p.omega_ac);
      else if (key == "gamma_gyro") dbl(p.gamma_gyro);
      else if (key == "omega_r_hz") dbl(p.omega_r_hz);
      else ps.errors.push_back(where + ": unknown key");
    } else if (section == "grid") {
      if (key == "n_points") itg(cfg.grid.n_points);
      else if (key == "periods") itg(cfg.grid.periods);
      else ps.errors.push_back(where + ": unknown key");
    } else if (section == "step") {
      if (key == "dt") dbl(cfg.step.dt);
      else if (key == "scheme") {
        if (value == "strang") cfg.step.scheme = StepScheme::strang_split;
        else if (value == "rk4") cfg.step.scheme = StepScheme::rk4_monolithic;
        else ps.errors.push_back(where + ": expected strang or rk4");
      } else if (key == "record_every") itg(cfg.step.record_every);
      else if (key == "dispersive_shift") bol(cfg.step.cavity_dispersive_shift);
      else ps.errors.push_back(where + ": unknown key");
    } else if (section == "noise") {
      if (key == "epsilon") dbl(cfg.noise.epsilon);
      else if (key == "seed") ps.to_u64(where, value, cfg.noise.seed);
      else if (key == "kind") {
        if (value == "complex") cfg.noise.kind = NoiseKind::complex_isotropic;
        else if (value == "real") cfg.noise.kind = NoiseKind::real_only;
        else ps.errors.push_back(where + ": expected complex or real");
      } else ps.errors.push_back(where + ": unknown key");
    } else if (section == "protocol") {
      auto& pr = cfg.protocol;
      if (key == "mode") {
        if (value == "driven") pr.mode = SimMode::driven;
        else if (value == "quench") pr.mode = SimMode::quench;
        else if (value == "ordered") pr.mode = SimMode::ordered;
        else ps.errors.push_back(where + ": expected driven, quench or ordered");
      } else if (key == "omega") dbl(pr.omega);
      else if (key == "t0") dbl(pr.t0);
      else if (key == "t_final") dbl(pr.t_final);
      else if (key == "seed_amplitude") dbl(pr.seed_amplitude);
      else if (key == "trajectories") itg(pr.trajectories);
      else if (key == "write_trajectories") itg(pr.write_trajectories);
      else ps.errors.push_back(where + ": unknown key");
    } else if (section == "ramsey") {
      auto& r = cfg.ramsey;
      if (key == "tau") dbl(r.tau);
      else if (key == "t_meas") dbl(r.t_meas);
      else if (key == "t_cycle") dbl(r.t_cycle);
      else if (key == "b_true") dbl(r.b_true);
      else if (key == "shot_noise") bol(r.shot_noise);
      else if (key == "interrogation") {
        if (value == "analytic") r.interrogation = Interrogation::analytic;
        else if (value == "evolved") r.interrogation = Interrogation::evolved;
        else ps.errors.push_back(where + ": expected analytic or evolved");
      } else if (key == "readout") {
        if (value == "model") r.readout = Readout::model;
        else if (value == "cavity") r.readout = Readout::cavity_sim;
        else ps.errors.push_back(where + ": expected model or cavity");
      } else ps.errors.push_back(where + ": unknown key");
    } else if (section == "rabi") {
      auto& r = cfg.rabi;
      if (key == "duration") dbl(r.duration);
      else if (key == "dt_window") dbl(r.dt_window);
      else if (key == "b_true") dbl(r.b_true);
      else if (key == "shot_noise") bol(r.shot_noise);
      else ps.errors.push_back(where + ": unknown key");
    } else if (section == "scan") {
      if (key == "param") cfg.scan.param = value;
      else if (key == "values") lst(cfg.scan.values);
      else ps.errors.push_back(where + ": unknown key");
    } else if (section == "sensitivity") {
      auto& s = cfg.sensitivity;
      if (key == "scheme") s.scheme = value;
      else if (key == "tau") dbl(s.tau);
      else if (key == "t_meas") dbl(s.t_meas);
      else if (key == "t") dbl(s.t);
      else if (key == "dt_window") dbl(s.dt_window);
      else if (key == "t_cycle") dbl(s.t_cycle);
      else if (key == "n_values") lst(s.n_values);
      else ps.errors.push_back(where + ": unknown key");
    } else if (section == "derive") {
      auto& d = cfg.derive;
      if (key == "g1") dbl(d.g1);
      else if (key == "omega_pump1") dbl(d.omega_pump1);
      else if (key == "delta_atom1") dbl(d.delta_atom1);
      else if (key == "g2") dbl(d.g2);
      else if (key == "omega_pump2") dbl(d.omega_pump2);
      else if (key == "delta_atom2") dbl(d.delta_atom2);
      else if (key == "omega_g2") dbl(d.omega_g2);
      else ps.errors.push_back(where + ": unknown key");
    } else if (section == "regimes") {
      if (key == "omegas") lst(cfg.regimes.omegas);
      else ps.errors.push_back(where + ": unknown key");
    } else if (section == "output") {
      if (key == "dir") cfg.output.dir = value;
      else if (key == "format") cfg.output.format = value;
      else ps.errors.push_back(where + ": unknown key");
    } else {
      ps.errors.push_back("[" + section + "]: unknown section");
    }
  };

  while (std::getline(in, line)) {
    ++lineno;
    std::size_t cut = line.find_first_of("#;");
    if (cut != std::string::npos) line = line.substr(0, cut);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        ps.errors.push_back("line " + std::to_string(lineno) +
                            ": malformed section header");
        continue;
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      ps.errors.push_back("line " + std::to_string(lineno) +
                          ": expected key = value");
      continue;
    }
    handle(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }

  if (!ps.errors.empty()) {
    std::string msg = "config errors:";
    for (const auto& e : ps.errors) msg += "\n  - " + e;
    throw ConfigError(msg);
  }
  // The measurement efficiency lives in [noise]; keep the model copy in sync
  // for the operations that read it off the parameter set.
  cfg.params.epsilon = cfg.noise.epsilon;
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& cfg) {
  std::ostringstream os;
  const auto& p = cfg.params;
  os << "[model]\n";
  os << "delta_c = " << fmt(p.delta_c) << "\n";
  os << "u0 = " << fmt(p.u0) << "\n";
  os << "eta0 = " << fmt(p.eta0) << "\n";
  os << "kappa = " << fmt(p.kappa) << "\n";
  os << "n_atoms = " << fmt(p.n_atoms) << "\n";
  os << "delta = " << fmt(p.delta) << "\n";
  os << "b_parallel = " << fmt(p.b_parallel) << "\n";
  os << "b_perp = " << fmt(p.b_perp) << "\n";
  os << "omega_ac = " << fmt(p.omega_ac) << "\n";
  os << "gamma_gyro = " << fmt(p.gamma_gyro) << "\n";
  os << "omega_r_hz = " << fmt(p.omega_r_hz) << "\n";
  os << "\n[grid]\n";
  os << "n_points = " << cfg.grid.n_points << "\n";
  os << "periods = " << cfg.grid.periods << "\n";
  os << "\n[step]\n";
  os << "dt = " << fmt(cfg.step.dt) << "\n";
  os << "scheme = "
     << (cfg.step.scheme == StepScheme::strang_split ? "strang" : "rk4")
     << "\n";
  os << "record_every = " << cfg.step.record_every << "\n";
  os << "dispersive_shift = "
     << (cfg.step.cavity_dispersive_shift ? "true" : "false") << "\n";
  os << "\n[noise]\n";
  os << "epsilon = " << fmt(cfg.noise.epsilon) << "\n";
  os << "seed = " << cfg.noise.seed << "\n";
  os << "kind = "
     << (cfg.noise.kind == NoiseKind::complex_isotropic ? "complex" : "real")
     << "\n";
  os << "\n[protocol]\n";
  const char* mode = cfg.protocol.mode == SimMode::driven    ? "driven"
                     : cfg.protocol.mode == SimMode::quench ? "quench"
                                                            : "ordered";
  os << "mode = " << mode << "\n";
  os << "omega = " << fmt(cfg.protocol.omega) << "\n";
  os << "t0 = " << fmt(cfg.protocol.t0) << "\n";
  os << "t_final = " << fmt(cfg.protocol.t_final) << "\n";
  os << "seed_amplitude = " << fmt(cfg.protocol.seed_amplitude) << "\n";
  os << "trajectories = " << cfg.protocol.trajectories << "\n";
  os << "write_trajectories = " << cfg.protocol.write_trajectories << "\n";
  os << "\n[ramsey]\n";
  os << "tau = " << fmt(cfg.ramsey.tau) << "\n";
  os << "t_meas = " << fmt(cfg.ramsey.t_meas) << "\n";
  os << "t_cycle = " << fmt(cfg.ramsey.t_cycle) << "\n";
  os << "b_true = " << fmt(cfg.ramsey.b_true) << "\n";
  os << "shot_noise = " << (cfg.ramsey.shot_noise ? "true" : "false") << "\n";
  os << "interrogation = "
     << (cfg.ramsey.interrogation == Interrogation::analytic ? "analytic"
                                                             : "evolved")
     << "\n";
  os << "readout = "
     << (cfg.ramsey.readout == Readout::model ? "model" : "cavity") << "\n";
  os << "\n[rabi]\n";
  os << "duration = " << fmt(cfg.rabi.duration) << "\n";
  os << "dt_window = " << fmt(cfg.rabi.dt_window) << "\n";
  os << "b_true = " << fmt(cfg.rabi.b_true) << "\n";
  os << "shot_noise = " << (cfg.rabi.shot_noise ? "true" : "false") << "\n";
  os << "\n[scan]\n";
  os << "param = " << cfg.scan.param << "\n";
  os << "values = " << fmt_list(cfg.scan.values) << "\n";
  os << "\n[sensitivity]\n";
  os << "scheme = " << cfg.sensitivity.scheme << "\n";
  os << "tau = " << fmt(cfg.sensitivity.tau) << "\n";
  os << "t_meas = " << fmt(cfg.sensitivity.t_meas) << "\n";
  os << "t = " << fmt(cfg.sensitivity.t) << "\n";
  os << "dt_window = " << fmt(cfg.sensitivity.dt_window) << "\n";
  os << "t_cycle = " << fmt(cfg.sensitivity.t_cycle) << "\n";
  os << "n_values = " << fmt_list(cfg.sensitivity.n_values) << "\n";
  os << "\n[derive]\n";
  os << "g1 = " << fmt(cfg.derive.g1) << "\n";
  os << "omega_pump1 = " << fmt(cfg.derive.omega_pump1) << "\n";
  os << "delta_atom1 = " << fmt(cfg.derive.delta_atom1) << "\n";
  os << "g2 = " << fmt(cfg.derive.g2) << "\n";
  os << "omega_pump2 = " << fmt(cfg.derive.omega_pump2) << "\n";
  os << "delta_atom2 = " << fmt(cfg.derive.delta_atom2) << "\n";
  os << "omega_g2 = " << fmt(cfg.derive.omega_g2) << "\n";
  os << "\n[regimes]\n";
  os << "omegas = " << fmt_list(cfg.regimes.omegas) << "\n";
  os << "\n[output]\n";
  os << "dir = " << cfg.output.dir << "\n";
  os << "format = " << cfg.output.format << "\n";
  return os.str();
}

bool is_scannable(const std::string& name) {
  static const char* names[] = {"omega",    "delta_c",    "u0",
                                "eta0",     "kappa",      "n_atoms",
                                "delta",    "b_parallel", "b_perp",
                                "omega_ac", "epsilon"};
  for (const char* n : names)
    if (name == n) return true;
  return false;
}

void apply_scan_value(RunConfig& cfg, const std::string& name, double value) {
  auto& p = cfg.params;
  if (name == "omega") cfg.protocol.omega = value;
  else if (name == "delta_c") p.delta_c = value;
  else if (name == "u0") p.u0 = value;
  else if (name == "eta0") p.eta0 = value;
  else if (name == "kappa") p.kappa = value;
  else if (name == "n_atoms") p.n_atoms = value;
  else if (name == "delta") p.delta = value;
  else if (name == "b_parallel") p.b_parallel = value;
  else if (name == "b_perp") p.b_perp = value;
  else if (name == "omega_ac") p.omega_ac = value;
  else if (name == "epsilon") {
    p.epsilon = value;
    cfg.noise.epsilon = value;
  } else
    throw ConfigError("scan: unknown parameter '" + name + "'");
}

void validate_config(const RunConfig& cfg) {
  std::vector<std::string> errs = cfg.params.violations();

  if (cfg.grid.periods < 1) errs.push_back("grid.periods must be >= 1");
  if (cfg.grid.n_points < 8 * std::max(cfg.grid.periods, 1) ||
      (cfg.grid.n_points & (cfg.grid.n_points - 1)) != 0)
    errs.push_back(
        "grid.n_points must be a power of two with >= 8 points per period");

  if (cfg.step.dt < 0) errs.push_back("step.dt must be >= 0 (0 selects auto)");
  if (cfg.step.record_every < 1) errs.push_back("step.record_every must be >= 1");
  if (cfg.step.dt > 0) {
    try {
      validate_step(cfg.step, cfg.params);
    } catch (const ConfigError& e) {
      errs.push_back(e.what());
    }
  }

  if (cfg.noise.epsilon < 0 || cfg.noise.epsilon > 1)
    errs.push_back("noise.epsilon must lie in [0, 1]");

  if (!(cfg.protocol.t_final >= 0))
    errs.push_back("protocol.t_final must be >= 0");
  if (!(cfg.protocol.omega >= 0)) errs.push_back("protocol.omega must be >= 0");
  if (!(std::abs(cfg.protocol.seed_amplitude) < 1))
    errs.push_back("protocol.seed_amplitude must have magnitude < 1");
  if (cfg.protocol.trajectories < 1)
    errs.push_back("protocol.trajectories must be >= 1");
  if (cfg.protocol.write_trajectories < 0)
    errs.push_back("protocol.write_trajectories must be >= 0");

  if (!(cfg.ramsey.tau > 0) || !(cfg.ramsey.t_meas > 0) ||
      !(cfg.ramsey.t_cycle > 0))
    errs.push_back("ramsey times must be positive");
  else if (cfg.ramsey.tau + cfg.ramsey.t_meas >
           cfg.ramsey.t_cycle * (1.0 + 1e-12))
    errs.push_back("ramsey.tau + ramsey.t_meas must fit within ramsey.t_cycle");
  if (!(cfg.rabi.duration > 0) || !(cfg.rabi.dt_window > 0))
    errs.push_back("rabi.duration and rabi.dt_window must be positive");

  if (!cfg.scan.param.empty() || !cfg.scan.values.empty()) {
    if (!is_scannable(cfg.scan.param))
      errs.push_back("scan.param '" + cfg.scan.param +
                     "' is not a scannable parameter");
    if (cfg.scan.values.empty()) errs.push_back("scan.values must be non-empty");
  }

  if (cfg.sensitivity.scheme != "ramsey" && cfg.sensitivity.scheme != "rabi" &&
      cfg.sensitivity.scheme != "both")
    errs.push_back("sensitivity.scheme must be ramsey, rabi or both");
  if (!(cfg.sensitivity.tau > 0) || !(cfg.sensitivity.t_meas > 0) ||
      !(cfg.sensitivity.t > 0) || !(cfg.sensitivity.dt_window > 0) ||
      !(cfg.sensitivity.t_cycle > 0))
    errs.push_back("sensitivity times must be positive");
  for (double n : cfg.sensitivity.n_values)
    if (!(n > 0)) {
      errs.push_back("sensitivity.n_values must be positive");
      break;
    }

  if (cfg.derive.delta_atom1 == 0 || cfg.derive.delta_atom2 == 0)
    errs.push_back("derive.delta_atom must be nonzero");

  for (double w : cfg.regimes.omegas)
    if (!(w >= 0)) {
      errs.push_back("regimes.omegas must be >= 0");
      break;
    }

  if (cfg.output.format != "csv" && cfg.output.format != "json")
    errs.push_back("output.format must be csv or json");
  if (cfg.output.dir.empty()) errs.push_back("output.dir must be non-empty");

  if (!errs.empty()) {
    std::string msg = "invalid configuration:";
    for (const auto& e : errs) msg += "\n  - " + e;
    throw ConfigError(msg);
  }
}

}  // namespace cavmag
