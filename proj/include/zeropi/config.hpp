#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "zeropi/circuit.hpp"
#include "zeropi/cooling.hpp"
#include "zeropi/dispersive.hpp"
#include "zeropi/effective1d.hpp"
#include "zeropi/gate.hpp"
#include "zeropi/raman.hpp"

namespace zp {

struct SpectrumSection {
  int levels = 12;
  std::string axis;  // empty: single point
  std::vector<double> grid;
  bool converge = false;
  double converge_tol = 1e-8;
};

struct BoFitSection {
  FitOptions fit;
  std::vector<double> phi_ext_grid{0.0, 0.25 * kPi, 0.5 * kPi, 0.75 * kPi, kPi};
  std::string sweep_axis = "E_L";
  std::vector<double> sweep;  // empty: circuit values only
  bool compare_2d = true;  // 1D vs 2D doublet splittings
  int n_charge_1d = 40;
  int levels = 8;  // 1D and 2D levels compared per point
};

struct DispersiveSection {
  DispersiveSetup setup;
  double omega_r_min = 0.02, omega_r_max = 0.5;
  int points = 2000;
};

struct GateSection {
  int M = 20;
  SearchBox box;
  int excursion_samples = 400;
  double excursion_threshold = 0.01;
};

struct GateMapSection {
  std::vector<double> E_J{0.075, 0.1, 0.125, 0.15, 0.175};
  std::vector<double> E_C_theta{1e-4, 1.5e-4, 2e-4, 2.5e-4, 3e-4};
  double monotone_tolerance = 1e-3;  // rad
};

struct RobustnessSection {
  std::vector<std::string> axes{"sigma", "phi_ext", "dE_J", "dC_J"};
  std::vector<double> sigma_fraction{0.0, 0.05, 0.1, 0.15, 0.2, 0.25};  // of t_g
  std::vector<double> phi_ext{0.0, 0.01, 0.02, 0.05, 0.1};
  std::vector<double> dE_J{0.0, 0.01, 0.02, 0.05, 0.1};
  std::vector<double> dC_J{0.0, 0.01, 0.02, 0.05, 0.1};
};

struct RamanSection {
  Mode mode = Mode::theta;
  int M = 30;
  double rabi = 1e-4;       // max |Omega_ij|; <= 0 uses amplitude
  double amplitude = 0.0;   // e*V
  double omega_min = 0.02, omega_max = 1.2;
  int points = 2000;
  double default_gamma = 1e-6;
  double off_resonance_ratio = 10.0;
  std::vector<double> flux_grid;  // phi_ext values for the flux scan
  std::vector<double> E_J, E_C_theta;  // optional parameter map
};

struct CoolingSection {
  CoolingSweepSetup setup;
  double slope_fraction = 0.5;
};

// Desk-scale model for the master-equation comparison and the sideband sums.
struct ValidateSection {
  CoolingConfig me;
  FullMEOptions me_options;
  CoolingConfig rates;
  int n_max = 50;
};

struct RunConfig {
  std::string command;
  std::string set;  // catalog name
  std::string output_dir = "out";
  int workers = 0;
  CircuitParams circuit;
  BasisSpec basis{20, 200};
  SpectrumSection spectrum;
  BoFitSection bo_fit;
  DispersiveSection dispersive;
  GateSection gate;
  GateMapSection gate_map;
  RobustnessSection robustness;
  RamanSection raman;
  CoolingSection cooling;
  ValidateSection validate;
};

const std::vector<std::string>& command_names();
std::vector<std::string> catalog_names();
// One-line description of a catalog set.
std::string catalog_description(const std::string& name);

using KeyValues = std::vector<std::pair<std::string, std::string>>;  // "section.key" -> value

KeyValues catalog_entries(const std::string& name);
KeyValues parse_ini_file(const std::string& path);
KeyValues parse_ini_string(const std::string& text);
// "section.key=value"
std::pair<std::string, std::string> parse_override(const std::string& text);

// Applies entries in order; unknown keys and malformed values throw ConfigError
// naming the key.
void apply_entries(RunConfig& cfg, const KeyValues& entries);
void finalize(RunConfig& cfg);  // derives capacitances and validates

// Catalog set (if any), then the file, then overrides.
RunConfig load_config(const std::string& set, const std::string& path,
                      const std::vector<std::string>& overrides);

// Every known key with its resolved value, sorted by key.
std::map<std::string, std::string> resolved_snapshot(const RunConfig& cfg);
std::string snapshot_text(const RunConfig& cfg);  // INI text of resolved_snapshot

std::vector<double> parse_list(const std::string& text);
std::string format_double(double v);

}  // namespace zp
