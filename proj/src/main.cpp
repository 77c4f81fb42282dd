// Command line front end: each subcommand wraps a library routine and writes
// reproducible outputs (full config and master seed embedded in every file).
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "cavmag/analytics.hpp"
#include "cavmag/config.hpp"
#include "cavmag/effective_params.hpp"
#include "cavmag/ensemble.hpp"
#include "cavmag/errors.hpp"
#include "cavmag/io.hpp"
#include "cavmag/prepare.hpp"
#include "cavmag/protocols.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace cavmag;

namespace {

struct CliOpts {
  std::string config_path;
  std::string out_dir;
  std::string format;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = 0;
};

int resolve_threads(int cli_threads) {
  if (cli_threads > 0) return cli_threads;
  if (const char* env = std::getenv("CAVMAG_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 1;
}

RunConfig load_and_merge(const CliOpts& cli) {
  RunConfig cfg = cli.config_path.empty() ? RunConfig{}
                                          : load_config_file(cli.config_path);
  if (!cli.out_dir.empty()) cfg.output.dir = cli.out_dir;
  if (!cli.format.empty()) cfg.output.format = cli.format;
  if (cli.seed_set) {
    cfg.noise.seed = cli.seed;
  }
  return cfg;
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
  return (fs::path(cfg.output.dir) / name).string();
}

void prepare_out_dir(const RunConfig& cfg) {
  std::error_code ec;
  fs::create_directories(cfg.output.dir, ec);
  if (ec)
    throw ConfigError("cannot create output directory '" + cfg.output.dir +
                      "': " + ec.message());
}

DrivenConfig driven_from(const RunConfig& cfg) {
  DrivenConfig dc;
  dc.omega = cfg.protocol.omega;
  dc.t0 = cfg.protocol.t0;
  dc.t_final = cfg.protocol.t_final;
  if (cfg.step.dt > 0) dc.dt = cfg.step.dt;
  dc.record_every = cfg.step.record_every;
  dc.dispersive_shift = cfg.step.cavity_dispersive_shift;
  return dc;
}

// Transverse drive at a requested recoil-unit Rabi frequency, resonant.
PhysicalParams with_drive(const PhysicalParams& p, double omega) {
  PhysicalParams drive = p;
  if (!(drive.gamma_gyro > 0))
    throw ConfigError("ordered drive needs gamma_gyro > 0");
  drive.b_perp = omega * drive.omega_r_hz / drive.gamma_gyro;
  drive.delta = -(drive.zeeman_parallel() + drive.omega_ac);
  return drive;
}

TimeSeries run_simulation(const RunConfig& cfg) {
  const PhysicalParams& p = cfg.params;
  const bool noisy = cfg.noise.epsilon > 0;
  Rng rng(cfg.noise.seed);
  switch (cfg.protocol.mode) {
    case SimMode::driven:
      return evolve_driven(p, driven_from(cfg), cfg.noise.epsilon,
                           noisy ? &rng : nullptr, cfg.noise.kind);
    case SimMode::quench: {
      Grid g = make_grid(cfg.grid.n_points, cfg.grid.periods);
      SystemState s = initial_state(p, g, cfg.protocol.seed_amplitude);
      if (noisy)
        return evolve(s, p, g, cfg.step, cfg.protocol.t_final, cfg.noise, rng);
      return evolve(s, p, g, cfg.step, cfg.protocol.t_final);
    }
    case SimMode::ordered: {
      Grid g = make_grid(cfg.grid.n_points, cfg.grid.periods);
      PhysicalParams drive =
          cfg.protocol.omega > 0 ? with_drive(p, cfg.protocol.omega) : p;
      SystemState s = ordered_state(drive, g);
      StepConfig sc = cfg.step;
      if (!(sc.dt > 0)) sc.dt = deep_lattice_dt(drive, s);
      if (noisy)
        return evolve(s, drive, g, sc, cfg.protocol.t_final, cfg.noise, rng);
      return evolve(s, drive, g, sc, cfg.protocol.t_final);
    }
  }
  throw ConfigError("unknown simulation mode");
}

ordered_json estimate_json(const BEstimate& est) {
  ordered_json j;
  j["b"] = est.b;
  j["uncertainty"] = est.uncertainty;
  j["clipped"] = est.clipped;
  j["divergent"] = est.divergent;
  return j;
}

ordered_json record_json(const PhotonRecord& rec) {
  ordered_json j;
  j["shot_noise"] = rec.shot_noise_applied;
  j["samples"] = rec.samples;
  return j;
}

ordered_json sensitivity_json(const SensitivityReport& r) {
  ordered_json j;
  j["scheme"] = scheme_name(r.scheme);
  j["bound"] = r.bound;
  j["qfi"] = r.qfi;
  ordered_json inputs;
  for (const auto& [k, v] : r.inputs) inputs[k] = v;
  j["inputs"] = inputs;
  return j;
}

void cmd_simulate(const RunConfig& cfg) {
  prepare_out_dir(cfg);
  TimeSeries ts = run_simulation(cfg);
  write_timeseries(out_path(cfg, "simulate"), ts, cfg, cfg.noise.seed);
}

void cmd_ramsey(const RunConfig& cfg) {
  prepare_out_dir(cfg);
  Grid g = make_grid(cfg.grid.n_points, cfg.grid.periods);
  Rng rng(cfg.noise.seed);
  auto [rec, state] = run_ramsey(cfg.params, g, cfg.ramsey, rng);
  BEstimate est = estimate_b_parallel(rec, cfg.params, cfg.ramsey);
  ordered_json rep;
  rep["scheme"] = "ramsey";
  rep["b_true"] = cfg.ramsey.b_true;
  rep["record"] = record_json(rec);
  rep["estimate"] = estimate_json(est);
  rep["post_pulse_delta_atoms"] = pseudo_spin(state, g).sz;
  write_report(out_path(cfg, "ramsey.json"), rep.dump(), cfg, cfg.noise.seed);
}

void cmd_rabi(const RunConfig& cfg) {
  prepare_out_dir(cfg);
  Grid g = make_grid(cfg.grid.n_points, cfg.grid.periods);
  Rng rng(cfg.noise.seed);
  PhotonRecord rec = run_rabi(cfg.params, g, cfg.rabi, rng);
  BEstimate est = estimate_b_perp(rec, cfg.params);
  ordered_json rep;
  rep["scheme"] = "rabi";
  rep["b_true"] = cfg.rabi.b_true;
  rep["record"] = record_json(rec);
  rep["estimate"] = estimate_json(est);
  write_report(out_path(cfg, "rabi.json"), rep.dump(), cfg, cfg.noise.seed);
}

void cmd_trajectories(const RunConfig& cfg, int threads) {
  prepare_out_dir(cfg);
  EnsembleConfig ec;
  ec.n_threads = threads;
  if (cfg.protocol.mode == SimMode::driven) {
    ec.kind = EnsembleConfig::Kind::driven;
    ec.driven = driven_from(cfg);
  } else {
    ec.kind = EnsembleConfig::Kind::full;
    ec.grid = make_grid(cfg.grid.n_points, cfg.grid.periods);
    ec.step = cfg.step;
    ec.t_final = cfg.protocol.t_final;
    if (cfg.protocol.mode == SimMode::quench) {
      ec.initial =
          initial_state(cfg.params, ec.grid, cfg.protocol.seed_amplitude);
    } else {
      ec.initial = ordered_state(cfg.params, ec.grid);
      if (!(ec.step.dt > 0))
        ec.step.dt = deep_lattice_dt(cfg.params, ec.initial);
    }
  }
  TrajectoryEnsemble ens =
      run_ensemble(cfg.params, ec, cfg.noise, cfg.protocol.trajectories);

  write_timeseries(out_path(cfg, "mean"), ens.mean, cfg, cfg.noise.seed);
  write_timeseries(out_path(cfg, "std_err"), ens.std_err, cfg, cfg.noise.seed);
  int nw = std::min<int>(cfg.protocol.write_trajectories,
                         static_cast<int>(ens.trajectories.size()));
  for (int k = 0; k < nw; ++k) {
    char name[32];
    std::snprintf(name, sizeof name, "traj_%03d", k);
    write_timeseries(out_path(cfg, name), ens.trajectories[k], cfg,
                     ens.seeds[k]);
  }
  ordered_json rep;
  rep["requested"] = cfg.protocol.trajectories;
  rep["kept"] = ens.trajectories.size();
  rep["failures"] = ens.failures;
  rep["seeds"] = ens.seeds;
  write_report(out_path(cfg, "trajectories.json"), rep.dump(), cfg,
               cfg.noise.seed);
}

void cmd_scan(const RunConfig& cfg) {
  if (cfg.scan.param.empty() || cfg.scan.values.empty())
    throw ConfigError("scan needs scan.param and scan.values (or the "
                      "--param/--values flags)");
  prepare_out_dir(cfg);
  std::vector<TimeSeries> series;
  series.reserve(cfg.scan.values.size());
  for (double v : cfg.scan.values) {
    RunConfig point = cfg;
    apply_scan_value(point, cfg.scan.param, v);
    validate_config(point);
    series.push_back(run_simulation(point));
  }
  if (cfg.output.format == "json") {
    ordered_json j;
    j["param"] = cfg.scan.param;
    ordered_json blocks = ordered_json::array();
    for (std::size_t k = 0; k < series.size(); ++k) {
      ordered_json b;
      b["value"] = cfg.scan.values[k];
      b["t"] = series[k].t;
      b["deltaN"] = series[k].deltaN;
      b["n1"] = series[k].n1;
      b["n2"] = series[k].n2;
      b["deltan"] = series[k].deltan;
      b["phase"] = series[k].phase;
      blocks.push_back(std::move(b));
    }
    j["blocks"] = std::move(blocks);
    write_report(out_path(cfg, "scan.json"), j.dump(), cfg, cfg.noise.seed);
  } else {
    write_scan_csv(out_path(cfg, "scan.csv"), cfg.scan.param, cfg.scan.values,
                   series, cfg, cfg.noise.seed);
  }
}

void cmd_sensitivity(const RunConfig& cfg) {
  prepare_out_dir(cfg);
  const auto& sc = cfg.sensitivity;
  ordered_json rep;
  if (sc.scheme == "ramsey" || sc.scheme == "both")
    rep["ramsey"] = sensitivity_json(
        sensitivity_ramsey(cfg.params, sc.tau, sc.t_meas, sc.t_cycle));
  if (sc.scheme == "rabi" || sc.scheme == "both")
    rep["rabi"] = sensitivity_json(
        sensitivity_rabi(cfg.params, sc.t, sc.dt_window, sc.t_cycle));
  if (!sc.n_values.empty()) {
    std::vector<double> bounds;
    bounds.reserve(sc.n_values.size());
    for (double n : sc.n_values) {
      PhysicalParams pn = cfg.params;
      pn.n_atoms = n;
      bounds.push_back(
          sensitivity_ramsey(pn, sc.tau, sc.t_meas, sc.t_cycle).bound);
    }
    ScalingFit fit = scaling_fit(sc.n_values, bounds);
    ordered_json j;
    j["n_values"] = sc.n_values;
    j["bounds"] = bounds;
    j["exponent"] = fit.exponent;
    j["confidence"] = fit.confidence;
    rep["scaling"] = std::move(j);
  }
  write_report(out_path(cfg, "sensitivity.json"), rep.dump(), cfg,
               cfg.noise.seed);
}

void cmd_derive(const RunConfig& cfg) {
  prepare_out_dir(cfg);
  const auto& d = cfg.derive;
  EffectiveParams ep =
      derive_effective_params(d.g1, d.omega_pump1, d.delta_atom1, d.g2,
                              d.omega_pump2, d.delta_atom2, d.omega_g2);
  ordered_json rep;
  rep["u1"] = ep.ch1.u;
  rep["eta1"] = ep.ch1.eta;
  rep["u2"] = ep.ch2.u;
  rep["eta2"] = ep.ch2.eta;
  rep["delta"] = ep.delta;
  write_report(out_path(cfg, "derive_params.json"), rep.dump(), cfg,
               cfg.noise.seed);
}

void cmd_regimes(const RunConfig& cfg) {
  prepare_out_dir(cfg);
  std::vector<double> omegas = cfg.regimes.omegas;
  if (omegas.empty()) {
    double dc = std::abs(cfg.params.delta_c);
    omegas = {0.1 * dc, dc, 3.0 * dc};
  }
  ordered_json arr = ordered_json::array();
  for (double w : omegas) {
    RegimeReport r = classify_regime(w, cfg.params);
    ordered_json j;
    j["omega"] = w;
    j["regime"] = regime_name(r.regime);
    j["predicted_lag"] = r.predicted_lag;
    j["model_lag"] = model_phase_lag(w, cfg.params);
    j["amplitude_model"] = r.amplitude_model;
    arr.push_back(std::move(j));
  }
  write_report(out_path(cfg, "regimes.json"), arr.dump(), cfg, cfg.noise.seed);
}

void emit_error(const char* type, const std::string& msg) {
  ordered_json j;
  j["error"] = {{"type", type}, {"message", msg}};
  std::cerr << j.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cavity spinor-condensate magnetometer toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  CliOpts cli;
  app.add_option("--config", cli.config_path, "configuration file (INI)");
  auto* seed_opt = app.add_option("--seed", cli.seed, "master seed override");
  app.add_option("--out", cli.out_dir, "output directory override");
  app.add_option("--threads", cli.threads,
                 "worker threads (default: CAVMAG_THREADS or 1)");
  app.add_option("--format", cli.format, "time-series format override")
      ->check(CLI::IsMember({"csv", "json"}));

  auto* c_sim = app.add_subcommand(
      "simulate", "evolve the coupled system and write the time series");
  std::string sim_mode;
  double sim_omega = -1, sim_tfinal = -1;
  c_sim->add_option("--mode", sim_mode, "driven | quench | ordered")
      ->check(CLI::IsMember({"driven", "quench", "ordered"}));
  c_sim->add_option("--omega", sim_omega, "drive frequency [omega_r]");
  c_sim->add_option("--t-final", sim_tfinal, "evolution span [1/omega_r]");

  auto* c_ram = app.add_subcommand("ramsey", "static-field Ramsey experiment");
  double ram_b = 0;
  auto* ram_b_opt = c_ram->add_option("--b-true", ram_b, "injected field [T]");

  auto* c_rabi =
      app.add_subcommand("rabi", "transverse-field Rabi experiment");
  double rabi_b = 0;
  auto* rabi_b_opt =
      c_rabi->add_option("--b-true", rabi_b, "injected field amplitude [T]");

  auto* c_traj = app.add_subcommand(
      "trajectories", "stochastic trajectory ensemble with mean and stderr");
  int traj_m = 0;
  c_traj->add_option("--count", traj_m, "trajectory count");

  auto* c_scan =
      app.add_subcommand("scan", "sweep one parameter, long-format output");
  std::string scan_param, scan_values;
  c_scan->add_option("--param", scan_param, "parameter name");
  c_scan->add_option("--values", scan_values, "comma separated values");

  auto* c_sens = app.add_subcommand(
      "sensitivity", "shot-noise bounds, Fisher information, N scaling");
  std::string sens_scheme;
  c_sens->add_option("--scheme", sens_scheme, "ramsey | rabi | both")
      ->check(CLI::IsMember({"ramsey", "rabi", "both"}));

  auto* c_derive = app.add_subcommand(
      "derive-params", "effective lattice/pump strengths from raw couplings");

  auto* c_reg = app.add_subcommand(
      "regimes", "classify drive frequencies against the cavity detuning");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    emit_error("config", e.what());
    return 2;
  }
  cli.seed_set = seed_opt->count() > 0;

  try {
    RunConfig cfg = load_and_merge(cli);
    if (c_sim->parsed()) {
      if (!sim_mode.empty())
        cfg.protocol.mode = sim_mode == "driven"   ? SimMode::driven
                            : sim_mode == "quench" ? SimMode::quench
                                                   : SimMode::ordered;
      if (sim_omega >= 0) cfg.protocol.omega = sim_omega;
      if (sim_tfinal >= 0) cfg.protocol.t_final = sim_tfinal;
      validate_config(cfg);
      cmd_simulate(cfg);
    } else if (c_ram->parsed()) {
      if (ram_b_opt->count() > 0) cfg.ramsey.b_true = ram_b;
      validate_config(cfg);
      cmd_ramsey(cfg);
    } else if (c_rabi->parsed()) {
      if (rabi_b_opt->count() > 0) cfg.rabi.b_true = rabi_b;
      validate_config(cfg);
      cmd_rabi(cfg);
    } else if (c_traj->parsed()) {
      if (traj_m > 0) cfg.protocol.trajectories = traj_m;
      validate_config(cfg);
      cmd_trajectories(cfg, resolve_threads(cli.threads));
    } else if (c_scan->parsed()) {
      if (!scan_param.empty()) cfg.scan.param = scan_param;
      if (!scan_values.empty()) {
        RunConfig tmp = parse_config("[scan]\nvalues = " + scan_values + "\n");
        cfg.scan.values = tmp.scan.values;
      }
      validate_config(cfg);
      cmd_scan(cfg);
    } else if (c_sens->parsed()) {
      if (!sens_scheme.empty()) cfg.sensitivity.scheme = sens_scheme;
      validate_config(cfg);
      cmd_sensitivity(cfg);
    } else if (c_derive->parsed()) {
      validate_config(cfg);
      cmd_derive(cfg);
    } else if (c_reg->parsed()) {
      validate_config(cfg);
      cmd_regimes(cfg);
    }
    return 0;
  } catch (const ConfigError& e) {
    emit_error("config", e.what());
    return 2;
  } catch (const NumericalError& e) {
    emit_error("numerical", e.what());
    return 3;
  } catch (const EstimationError& e) {
    emit_error("estimation", e.what());
    return 4;
  } catch (const std::exception& e) {
    emit_error("numerical", e.what());
    return 3;
  }
}
