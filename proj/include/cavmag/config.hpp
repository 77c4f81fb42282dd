// Run configuration: one struct covering model, grid, integration, noise,
// protocol, scan, and output settings, with INI-style parse / serialize.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cavmag/cavity.hpp"
#include "cavmag/params.hpp"
#include "cavmag/protocols.hpp"
#include "cavmag/stepper.hpp"

namespace cavmag {

// Which evolution the simulate / trajectories / scan commands run.
enum class SimMode { driven, quench, ordered };

struct ProtocolConfig {
  SimMode mode = SimMode::driven;
  double omega = 330.0;          // drive frequency [omega_r]
  double t0 = 0.0;               // drive phase origin [1/omega_r]
  double t_final = 0.3;          // [1/omega_r]
  double seed_amplitude = 0.05;  // quench-mode density seed
  int trajectories = 100;
  int write_trajectories = 3;    // individual trajectory files to emit
};

struct ScanConfig {
  std::string param;           // "omega" or a model parameter name
  std::vector<double> values;
};

struct SensitivityConfig {
  std::string scheme = "both";  // ramsey | rabi | both
  double tau = 0.01;            // [s]
  double t_meas = 0.01;         // [s]
  double t = 0.01;              // Rabi coherence time [s]
  double dt_window = 1e-8;      // [s]
  double t_cycle = 1.0;         // [s]
  std::vector<double> n_values; // optional atom numbers for a scaling fit
};

struct DeriveConfig {
  double g1 = 10.0, omega_pump1 = 20.0, delta_atom1 = 6000.0;
  double g2 = 10.0, omega_pump2 = 20.0, delta_atom2 = 6000.0;
  double omega_g2 = 0.0;
};

struct RegimesConfig {
  std::vector<double> omegas;  // empty: {0.1, 1, 3} x |delta_c|
};

struct OutputConfig {
  std::string dir = ".";
  std::string format = "csv";  // time-series format: csv | json
};

struct GridConfig {
  int n_points = 256;
  int periods = 10;
};

struct RunConfig {
  PhysicalParams params;
  GridConfig grid;
  StepConfig step;
  NoiseConfig noise;
  ProtocolConfig protocol;
  RamseyConfig ramsey;
  RabiConfig rabi;
  ScanConfig scan;
  SensitivityConfig sensitivity;
  DeriveConfig derive;
  RegimesConfig regimes;
  OutputConfig output;
};

// Parses INI-style text ('#' or ';' comments, [section] headers, key = value).
// Unknown sections or keys and malformed values are all collected into one
// ConfigError. Omitted keys keep their defaults.
RunConfig parse_config(const std::string& text);

RunConfig load_config_file(const std::string& path);

// Canonical text form: fixed section and key order, 17 significant digits.
// serialize(parse(serialize(c))) == serialize(c).
std::string serialize_config(const RunConfig& cfg);

// Collects every violation (model parameters, grid, step, scan and protocol
// settings); throws ConfigError listing all of them.
void validate_config(const RunConfig& cfg);

// Scan targets: "omega" addresses the drive frequency, everything else a
// model parameter.
bool is_scannable(const std::string& name);
void apply_scan_value(RunConfig& cfg, const std::string& name, double value);

}  // namespace cavmag
