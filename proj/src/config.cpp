#include "zeropi/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace zp {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  return out;
}

double to_double(const std::string& text) {
  std::string s = trim(text);
  double scale = 1.0;
  if (s.size() >= 2 && s.compare(s.size() - 2, 2, "pi") == 0) {
    scale = kPi;
    s = trim(s.substr(0, s.size() - 2));
    if (!s.empty() && s.back() == '*') s = trim(s.substr(0, s.size() - 1));
    if (s.empty()) return kPi;
  }
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ConfigError("not a number: '" + text + "'");
  }
  if (used != s.size()) throw ConfigError("not a number: '" + text + "'");
  if (!std::isfinite(v)) throw ConfigError("non-finite number: '" + text + "'");
  return v * scale;
}

int to_int(const std::string& text) {
  double v = to_double(text);
  if (v != std::floor(v) || std::abs(v) > 2e9) throw ConfigError("not an integer: '" + text + "'");
  return static_cast<int>(v);
}

bool to_bool(const std::string& text) {
  std::string s = trim(text);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ConfigError("not a boolean: '" + text + "'");
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + format_double(v[i]);
  return out;
}

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + v[i];
  return out;
}

struct Field {
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

template <class A>
Field real(A a) {
  return {[a](RunConfig& c, const std::string& v) { a(c) = to_double(v); },
          [a](const RunConfig& c) { return format_double(a(const_cast<RunConfig&>(c))); }};
}

template <class A>
Field integer(A a) {
  return {[a](RunConfig& c, const std::string& v) { a(c) = to_int(v); },
          [a](const RunConfig& c) { return std::to_string(a(const_cast<RunConfig&>(c))); }};
}

template <class A>
Field index_value(A a) {
  return {[a](RunConfig& c, const std::string& v) {
            double d = to_double(v);
            if (d != std::floor(d) || d < 0.0) throw ConfigError("not a non-negative integer: '" + v + "'");
            a(c) = static_cast<Index>(d);
          },
          [a](const RunConfig& c) { return std::to_string(a(const_cast<RunConfig&>(c))); }};
}

template <class A>
Field boolean(A a) {
  return {[a](RunConfig& c, const std::string& v) { a(c) = to_bool(v); },
          [a](const RunConfig& c) { return std::string(a(const_cast<RunConfig&>(c)) ? "true" : "false"); }};
}

template <class A>
Field text(A a) {
  return {[a](RunConfig& c, const std::string& v) { a(c) = trim(v); },
          [a](const RunConfig& c) { return a(const_cast<RunConfig&>(c)); }};
}

template <class A>
Field list(A a) {
  return {[a](RunConfig& c, const std::string& v) { a(c) = parse_list(v); },
          [a](const RunConfig& c) { return join(a(const_cast<RunConfig&>(c))); }};
}

template <class A>
Field words(A a) {
  return {[a](RunConfig& c, const std::string& v) {
            std::vector<std::string> w;
            for (auto& s : split(v, ','))
              if (!s.empty()) w.push_back(s);
            a(c) = w;
          },
          [a](const RunConfig& c) { return join(a(const_cast<RunConfig&>(c))); }};
}

template <class A>
Field mode(A a) {
  return {[a](RunConfig& c, const std::string& v) { a(c) = parse_mode(trim(v)); },
          [a](const RunConfig& c) { return mode_name(a(const_cast<RunConfig&>(c))); }};
}

#define ACC(expr) [](RunConfig & c) -> auto& { return c.expr; }

const std::map<std::string, Field>& fields() {
  static const std::map<std::string, Field> f = [] {
    std::map<std::string, Field> f;
    f["run.command"] = text(ACC(command));
    f["run.set"] = text(ACC(set));
    f["run.output_dir"] = text(ACC(output_dir));
    f["run.workers"] = integer(ACC(workers));

    f["circuit.E_J"] = real(ACC(circuit.E_J));
    f["circuit.E_L"] = real(ACC(circuit.E_L));
    f["circuit.E_C_theta"] = real(ACC(circuit.E_C_theta));
    f["circuit.E_C_phi"] = real(ACC(circuit.E_C_phi));
    f["circuit.omega_p_over_2pi"] = real(ACC(circuit.omega_p_over_2pi));
    f["circuit.C_g"] = real(ACC(circuit.C_g));
    f["circuit.C_0"] = real(ACC(circuit.C_0));
    f["circuit.phi_ext"] = real(ACC(circuit.phi_ext));
    f["circuit.n_g_theta"] = real(ACC(circuit.n_g_theta));

    f["disorder.dE_J"] = real(ACC(circuit.dE_J));
    f["disorder.dE_L"] = real(ACC(circuit.dE_L));
    f["disorder.dC"] = real(ACC(circuit.dC));
    f["disorder.dC_J"] = real(ACC(circuit.dC_J));
    for (int k = 0; k < 4; ++k) {
      const std::string n = std::to_string(k + 1);
      f["disorder.dC_g" + n] = real([k](RunConfig& c) -> double& { return c.circuit.dC_g[k]; });
      f["disorder.dC_0" + n] = real([k](RunConfig& c) -> double& { return c.circuit.dC_0[k]; });
    }

    f["basis.n_charge_max"] = integer(ACC(basis.n_charge_max));
    f["basis.n_fock_phi"] = integer(ACC(basis.n_fock_phi));
    f["basis.n_fock_zeta"] = integer(ACC(basis.n_fock_zeta));
    f["basis.n_fock_res"] = integer(ACC(basis.n_fock_res));
    f["basis.n_charge_sigma"] = integer(ACC(basis.n_charge_sigma));
    f["basis.convergence_tol"] = real(ACC(basis.convergence_tol));
    f["basis.dimension_limit"] = index_value(ACC(basis.dimension_limit));

    f["spectrum.levels"] = integer(ACC(spectrum.levels));
    f["spectrum.axis"] = text(ACC(spectrum.axis));
    f["spectrum.grid"] = list(ACC(spectrum.grid));
    f["spectrum.converge"] = boolean(ACC(spectrum.converge));
    f["spectrum.converge_tol"] = real(ACC(spectrum.converge_tol));

    f["bo_fit.theta_points"] = integer(ACC(bo_fit.fit.theta_points));
    f["bo_fit.n_fock_phi"] = integer(ACC(bo_fit.fit.n_fock_phi));
    f["bo_fit.accept_ratio"] = real(ACC(bo_fit.fit.accept_ratio));
    f["bo_fit.breakdown_ratio"] = real(ACC(bo_fit.fit.breakdown_ratio));
    f["bo_fit.phi_ext_grid"] = list(ACC(bo_fit.phi_ext_grid));
    f["bo_fit.sweep_axis"] = text(ACC(bo_fit.sweep_axis));
    f["bo_fit.sweep"] = list(ACC(bo_fit.sweep));
    f["bo_fit.compare_2d"] = boolean(ACC(bo_fit.compare_2d));
    f["bo_fit.n_charge_1d"] = integer(ACC(bo_fit.n_charge_1d));
    f["bo_fit.levels"] = integer(ACC(bo_fit.levels));

    f["dispersive.mode"] = mode(ACC(dispersive.setup.mode));
    f["dispersive.eV_rms"] = real(ACC(dispersive.setup.eV_rms));
    f["dispersive.coupling_ratio"] = real(ACC(dispersive.setup.coupling_ratio));
    f["dispersive.M"] = integer(ACC(dispersive.setup.M));
    f["dispersive.n_bar"] = real(ACC(dispersive.setup.n_bar));
    f["dispersive.ratio_threshold"] = real(ACC(dispersive.setup.ratio_threshold));
    f["dispersive.omega_r_min"] = real(ACC(dispersive.omega_r_min));
    f["dispersive.omega_r_max"] = real(ACC(dispersive.omega_r_max));
    f["dispersive.points"] = integer(ACC(dispersive.points));

    f["gate.M"] = integer(ACC(gate.M));
    f["gate.omega_min"] = real(ACC(gate.box.omega_min));
    f["gate.omega_max"] = real(ACC(gate.box.omega_max));
    f["gate.t_min"] = real(ACC(gate.box.t_min));
    f["gate.t_max"] = real(ACC(gate.box.t_max));
    f["gate.grid"] = integer(ACC(gate.box.grid));
    f["gate.max_iterations"] = integer(ACC(gate.box.max_iterations));
    f["gate.tol"] = real(ACC(gate.box.tol));
    f["gate.distance_threshold"] = real(ACC(gate.box.distance_threshold));
    f["gate.rotation_window"] = real(ACC(gate.box.rotation_window));
    f["gate.hyperbola_window"] = real(ACC(gate.box.hyperbola_window));
    f["gate.excursion_samples"] = integer(ACC(gate.excursion_samples));
    f["gate.excursion_threshold"] = real(ACC(gate.excursion_threshold));

    f["gate_map.E_J"] = list(ACC(gate_map.E_J));
    f["gate_map.E_C_theta"] = list(ACC(gate_map.E_C_theta));
    f["gate_map.monotone_tolerance"] = real(ACC(gate_map.monotone_tolerance));

    f["robustness.axes"] = words(ACC(robustness.axes));
    f["robustness.sigma_fraction"] = list(ACC(robustness.sigma_fraction));
    f["robustness.phi_ext"] = list(ACC(robustness.phi_ext));
    f["robustness.dE_J"] = list(ACC(robustness.dE_J));
    f["robustness.dC_J"] = list(ACC(robustness.dC_J));

    f["raman.mode"] = mode(ACC(raman.mode));
    f["raman.M"] = integer(ACC(raman.M));
    f["raman.rabi"] = real(ACC(raman.rabi));
    f["raman.amplitude"] = real(ACC(raman.amplitude));
    f["raman.omega_min"] = real(ACC(raman.omega_min));
    f["raman.omega_max"] = real(ACC(raman.omega_max));
    f["raman.points"] = integer(ACC(raman.points));
    f["raman.default_gamma"] = real(ACC(raman.default_gamma));
    f["raman.off_resonance_ratio"] = real(ACC(raman.off_resonance_ratio));
    f["raman.flux_grid"] = list(ACC(raman.flux_grid));
    f["raman.E_J"] = list(ACC(raman.E_J));
    f["raman.E_C_theta"] = list(ACC(raman.E_C_theta));

    f["cooling.E_L"] = list(ACC(cooling.setup.E_L));
    f["cooling.C_g_b"] = real(ACC(cooling.setup.C_g_b));
    f["cooling.C_b"] = real(ACC(cooling.setup.C_b));
    f["cooling.Q_zeta"] = real(ACC(cooling.setup.Q_zeta));
    f["cooling.M"] = integer(ACC(cooling.setup.M));
    f["cooling.n_th_scale"] = real(ACC(cooling.setup.n_th_scale));
    f["cooling.omega_b_bar"] = real(ACC(cooling.setup.base.omega_b_bar));
    f["cooling.epsilon"] = real(ACC(cooling.setup.base.epsilon));
    f["cooling.kappa_b"] = real(ACC(cooling.setup.base.kappa_b));
    f["cooling.temperature"] = real(ACC(cooling.setup.base.temperature));
    f["cooling.kerr_K"] = real(ACC(cooling.setup.base.kerr_K));
    f["cooling.slope_fraction"] = real(ACC(cooling.slope_fraction));

    auto me = [](RunConfig& c) -> CoolingConfig& { return c.validate.me; };
    auto rates = [](RunConfig& c) -> CoolingConfig& { return c.validate.rates; };
    for (auto [sec, acc] : {std::pair<std::string, CoolingConfig& (*)(RunConfig&)>{"validate_me", +me},
                            {"validate_rates", +rates}}) {
      auto mk = [&, acc = acc](const std::string& key, double CoolingConfig::*m) {
        f[sec + "." + key] = real([acc, m](RunConfig& c) -> double& { return acc(c).*m; });
      };
      mk("omega_zeta", &CoolingConfig::omega_zeta);
      mk("omega_b_bar", &CoolingConfig::omega_b_bar);
      mk("epsilon", &CoolingConfig::epsilon);
      mk("omega_m", &CoolingConfig::omega_m);
      mk("g_bar", &CoolingConfig::g_bar);
      mk("kappa_b", &CoolingConfig::kappa_b);
      mk("kappa_zeta", &CoolingConfig::kappa_zeta);
      mk("temperature", &CoolingConfig::temperature);
      mk("n_th", &CoolingConfig::n_th);
      mk("chi0_zeta", &CoolingConfig::chi0_zeta);
      mk("chi1_zeta", &CoolingConfig::chi1_zeta);
      mk("kerr_K", &CoolingConfig::kerr_K);
    }
    f["validate_me.n_zeta"] = integer(ACC(validate.me_options.n_zeta));
    f["validate_me.n_b"] = integer(ACC(validate.me_options.n_b));
    f["validate_me.dt"] = real(ACC(validate.me_options.dt));
    f["validate_me.t_max"] = real(ACC(validate.me_options.t_max));
    f["validate_me.average_periods"] = real(ACC(validate.me_options.average_periods));
    f["validate_me.samples"] = integer(ACC(validate.me_options.samples));
    f["validate_rates.n_max"] = integer(ACC(validate.n_max));
    return f;
  }();
  return f;
}

#undef ACC

struct CatalogSet {
  std::string description;
  KeyValues entries;
};

const KeyValues anchor_circuit{{"circuit.E_L", "1e-3"},
                               {"circuit.E_C_phi", "0.378"},
                               {"circuit.E_C_theta", "1.75e-4"},
                               {"circuit.E_J", "0.165"},
                               {"circuit.omega_p_over_2pi", "4e10"},
                               {"circuit.phi_ext", "0"}};

const KeyValues sweep_circuit{{"circuit.E_L", "1e-3"},
                              {"circuit.E_C_phi", "0.25"},
                              {"circuit.E_C_theta", "0.5e-3"},
                              {"circuit.E_J", "0.25"},
                              {"circuit.omega_p_over_2pi", "4e10"},
                              {"circuit.phi_ext", "0"}};

KeyValues concat(const KeyValues& a, const KeyValues& b) {
  KeyValues out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

const std::map<std::string, CatalogSet>& catalog() {
  static const std::map<std::string, CatalogSet> c = {
      {"fig2",
       {"E_L sweep from 1.25e-4 to 5e-3 at (E_C_phi, E_C_theta, E_J) = (0.25, 5e-4, 0.25)",
        concat(sweep_circuit, {{"bo_fit.sweep_axis", "E_L"},
                               {"bo_fit.sweep", "geomspace(1.25e-4, 5e-3, 8)"},
                               {"bo_fit.accept_ratio", "5e-3"},
                               {"bo_fit.compare_2d", "false"},
                               {"spectrum.levels", "12"}})}},
      {"fig4",
       {"phi-coupled dispersive scan at (E_L, E_C_phi, E_C_theta, E_J) = (1.25e-3, 0.374, 1.25e-4, 0.167), "
        "C_g/C_mu = 0.2",
        {{"circuit.E_L", "1.25e-3"},
         {"circuit.E_C_phi", "0.374"},
         {"circuit.E_C_theta", "1.25e-4"},
         {"circuit.E_J", "0.167"},
         {"circuit.omega_p_over_2pi", "4e10"},
         {"circuit.phi_ext", "0"},
         {"dispersive.mode", "phi"},
         {"dispersive.coupling_ratio", "0.2"},
         {"dispersive.eV_rms", "5e-3"},
         {"dispersive.M", "30"},
         {"dispersive.omega_r_min", "0.02"},
         {"dispersive.omega_r_max", "0.5"},
         {"dispersive.points", "2000"}}}},
      {"fig5",
       {"gate anchor (1e-3, 0.378, 1.75e-4, 0.165) with a 5x5 (E_J, E_C_theta) gate map at E_L = 1e-3",
        concat(anchor_circuit, {{"gate.M", "20"},
                                {"gate_map.E_J", "linspace(0.075, 0.175, 5)"},
                                {"gate_map.E_C_theta", "linspace(1e-4, 3e-4, 5)"}})}},
      {"fig7", {"effective 1D model anchor (1e-3, 0.378, 1.75e-4, 0.165), omega_p/2pi = 40 GHz", anchor_circuit}},
      {"fig8",
       {"Raman ratio at the anchor set with 30 levels and a flux excursion",
        concat(anchor_circuit, {{"raman.M", "30"},
                                {"raman.mode", "theta"},
                                {"raman.flux_grid", "linspace(0, 1pi, 11)"},
                                {"raman.E_J", "linspace(0.075, 0.175, 5)"},
                                {"raman.E_C_theta", "linspace(1e-4, 3e-4, 5)"}})}},
      {"fig10",
       {"zeta cooling over E_L from 1.25e-4 to 5e-3 at (0.25, 5e-4, 0.25), eps/2pi = 200 MHz, "
        "omega_b/2pi = 5 GHz, Q_zeta = 30000, T = 15 mK",
        concat(sweep_circuit, {{"disorder.dC", "0.01"},
                               {"basis.n_charge_max", "15"},
                               {"basis.n_fock_phi", "100"},
                               {"cooling.E_L", "geomspace(1.25e-4, 5e-3, 12)"},
                               {"cooling.epsilon", "0.005"},
                               {"cooling.omega_b_bar", "0.125"},
                               {"cooling.Q_zeta", "30000"},
                               {"cooling.temperature", "0.015"},
                               {"cooling.kappa_b", "2.5e-5"},
                               {"cooling.C_g_b", "17.5"},
                               {"cooling.C_b", "500"},
                               {"cooling.M", "20"}})}},
  };
  return c;
}

KeyValues tree_entries(const boost::property_tree::ptree& tree) {
  KeyValues out;
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ConfigError("key '" + section + "' is outside a section");
    for (const auto& [key, value] : body) {
      if (!value.empty()) throw ConfigError("nested key '" + section + "." + key + "' is not supported");
      out.emplace_back(section + "." + key, value.data());
    }
  }
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<double> parse_list(const std::string& raw) {
  std::string s = trim(raw);
  if (s.empty()) return {};
  for (const std::string fn : {"linspace", "geomspace"}) {
    if (s.rfind(fn + "(", 0) == 0) {
      if (s.back() != ')') throw ConfigError("unterminated " + fn + ": '" + raw + "'");
      auto args = split(s.substr(fn.size() + 1, s.size() - fn.size() - 2), ',');
      if (args.size() != 3) throw ConfigError(fn + " needs (start, stop, count): '" + raw + "'");
      double a = to_double(args[0]), b = to_double(args[1]);
      int n = to_int(args[2]);
      if (n < 1) throw ConfigError(fn + " count must be positive: '" + raw + "'");
      if (fn == "geomspace" && !(a > 0.0 && b > 0.0)) throw ConfigError("geomspace needs positive ends: '" + raw + "'");
      std::vector<double> out(n);
      for (int k = 0; k < n; ++k) {
        double u = n == 1 ? 0.0 : static_cast<double>(k) / (n - 1);
        out[k] = fn == "linspace" ? a + (b - a) * u : a * std::pow(b / a, u);
      }
      if (n > 1) out.back() = b;
      return out;
    }
  }
  std::vector<double> out;
  for (auto& item : split(s, ',')) out.push_back(to_double(item));
  return out;
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> c{"spectrum",    "bo-fit",          "dispersive-scan",
                                          "gate-optimize", "gate-map",      "gate-robustness",
                                          "raman-scan",  "cooling-sweep",   "validate"};
  return c;
}

std::vector<std::string> catalog_names() {
  std::vector<std::string> out;
  for (const auto& [k, v] : catalog()) out.push_back(k);
  return out;
}

std::string catalog_description(const std::string& name) {
  auto it = catalog().find(name);
  if (it == catalog().end()) throw ConfigError("unknown parameter set '" + name + "'");
  return it->second.description;
}

KeyValues catalog_entries(const std::string& name) {
  auto it = catalog().find(name);
  if (it == catalog().end()) throw ConfigError("unknown parameter set '" + name + "'");
  return it->second.entries;
}

KeyValues parse_ini_string(const std::string& text) {
  // boost's INI reader only knows ';' comments
  std::istringstream in(text);
  std::ostringstream clean;
  std::string line;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    clean << (!t.empty() && t[0] == '#' ? "" : line) << '\n';
  }
  std::istringstream src(clean.str());
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::read_ini(src, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError("config line " + std::to_string(e.line()) + ": " + e.message());
  }
  return tree_entries(tree);
}

KeyValues parse_ini_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_ini_string(ss.str());
}

std::pair<std::string, std::string> parse_override(const std::string& text) {
  auto eq = text.find('=');
  if (eq == std::string::npos) throw ConfigError("override '" + text + "' is not of the form section.key=value");
  std::string key = trim(text.substr(0, eq));
  if (key.find('.') == std::string::npos) throw ConfigError("override key '" + key + "' needs a section");
  return {key, trim(text.substr(eq + 1))};
}

void apply_entries(RunConfig& cfg, const KeyValues& entries) {
  const auto& f = fields();
  for (const auto& [key, value] : entries) {
    if (key.rfind("derived.", 0) == 0) continue;  // recomputed by finalize()
    auto it = f.find(key);
    if (it == f.end()) throw ConfigError("unknown config key '" + key + "'");
    try {
      it->second.set(cfg, value);
    } catch (const std::exception& e) {
      throw ConfigError("invalid value for '" + key + "': " + e.what());
    }
  }
}

void finalize(RunConfig& cfg) {
  try {
    cfg.circuit.sync_capacitances();
    cfg.circuit.validate();
    cfg.basis.validate();
  } catch (const InvalidParameters& e) {
    throw ConfigError(e.what());
  }
  if (cfg.workers < 0) throw ConfigError("run.workers must be >= 0");
  if (cfg.spectrum.levels < 1) throw ConfigError("spectrum.levels must be positive");
  if (!cfg.spectrum.axis.empty() && cfg.spectrum.grid.empty())
    throw ConfigError("spectrum.grid is empty for axis '" + cfg.spectrum.axis + "'");
  if (cfg.gate.M < 2) throw ConfigError("gate.M must be at least 2");
  if (cfg.raman.M < 3) throw ConfigError("raman.M must be at least 3");
  if (cfg.dispersive.points < 1 || cfg.raman.points < 1) throw ConfigError("scan point counts must be positive");
  for (const auto& a : cfg.robustness.axes)
    if (a != "sigma" && a != "phi_ext" && a != "dE_J" && a != "dC_J")
      throw ConfigError("unknown robustness axis '" + a + "' in 'robustness.axes'");
  if (cfg.raman.E_J.empty() != cfg.raman.E_C_theta.empty())
    throw ConfigError("raman.E_J and raman.E_C_theta must be given together");
}

namespace {

RunConfig default_config() {
  RunConfig c;
  c.validate.me.omega_zeta = 0.25;
  c.validate.me.omega_b_bar = 1.0;
  c.validate.me.epsilon = 0.5;
  c.validate.me.omega_m = 0.75;
  c.validate.me.g_bar = 0.025;
  c.validate.me.kappa_b = 0.1;
  c.validate.me.kappa_zeta = 9.699454807643473e-4;
  c.validate.me.n_th = 1.0;
  c.validate.rates.omega_zeta = 0.01;
  c.validate.rates.omega_b_bar = 1.0;
  c.validate.rates.epsilon = 0.5;
  c.validate.rates.g_bar = 1e-3;
  c.validate.rates.kappa_b = 0.04;
  c.validate.rates.kappa_zeta = 1e-4;
  c.validate.rates.n_th = 1.0;
  return c;
}

}  // namespace

RunConfig load_config(const std::string& set, const std::string& path, const std::vector<std::string>& overrides) {
  RunConfig cfg = default_config();
  if (!set.empty()) {
    apply_entries(cfg, catalog_entries(set));
    cfg.set = set;
  }
  if (!path.empty()) apply_entries(cfg, parse_ini_file(path));
  KeyValues ov;
  for (const auto& o : overrides) ov.push_back(parse_override(o));
  apply_entries(cfg, ov);
  finalize(cfg);
  return cfg;
}

std::map<std::string, std::string> resolved_snapshot(const RunConfig& cfg) {
  std::map<std::string, std::string> out;
  for (const auto& [k, f] : fields()) out[k] = f.get(cfg);
  out["derived.C"] = format_double(cfg.circuit.C);
  out["derived.C_J"] = format_double(cfg.circuit.C_J);
  return out;
}

std::string snapshot_text(const RunConfig& cfg) {
  std::string out, section;
  for (const auto& [k, v] : resolved_snapshot(cfg)) {
    auto dot = k.find('.');
    std::string s = k.substr(0, dot);
    if (s != section) {
      out += (section.empty() ? "[" : "\n[") + s + "]\n";
      section = s;
    }
    out += k.substr(dot + 1) + " = " + v + "\n";
  }
  return out;
}

}  // namespace zp
