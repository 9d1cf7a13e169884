#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "zeropi/commands.hpp"
#include "zeropi/config.hpp"
#include "zeropi/output.hpp"

namespace {

const char* describe(const std::string& c) {
  if (c == "spectrum") return "lowest levels and doublets of the theta-phi model, optionally swept";
  if (c == "bo-fit") return "fit E_alpha, E_beta, E_gamma and compare the 1D and 2D spectra";
  if (c == "dispersive-scan") return "qubit dispersive shift versus resonator frequency";
  if (c == "gate-optimize") return "optimize the square-pulse gate";
  if (c == "gate-map") return "optimized gate over an (E_J, E_C_theta) grid";
  if (c == "gate-robustness") return "gate fidelity under edge smoothing, flux and disorder";
  if (c == "raman-scan") return "two-photon Raman ratio versus drive frequency";
  if (c == "cooling-sweep") return "zeta-mode sideband cooling over E_L";
  if (c == "validate") return "rate formulas against the two-mode master equation";
  return "";
}

int report(const std::string& command, const std::string& out_dir, int code, const std::string& kind,
           const std::string& message) {
  zp::Json j = zp::error_json(command, code, kind, message);
  std::cerr << j.dump() << "\n";
  if (!out_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (!ec) std::ofstream(std::filesystem::path(out_dir) / "error.json") << j.dump(2) << "\n";
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"0-pi qubit circuit analysis"};
  app.require_subcommand(0, 1);
  std::string config_path, set, out_dir;
  std::vector<std::string> overrides;
  int workers = -1;
  bool list_sets = false;
  app.add_option("--config", config_path, "INI configuration file");
  app.add_option("--set", set, "named parameter set");
  app.add_option("--workers", workers, "worker threads (0: all cores)");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--override", overrides, "section.key=value, applied last")->take_all();
  app.add_flag("--list-sets", list_sets, "print the parameter set catalog");
  app.fallthrough();

  std::vector<CLI::App*> subs;
  for (const auto& name : zp::command_names()) subs.push_back(app.add_subcommand(name, describe(name)));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return report("", "", 2, "usage", e.what());
  }

  if (list_sets) {
    for (const auto& n : zp::catalog_names()) std::cout << n << "  " << zp::catalog_description(n) << "\n";
    return 0;
  }
  std::string command;
  for (auto* s : subs)
    if (s->parsed()) command = s->get_name();
  if (command.empty()) {
    std::cerr << app.help();
    return report("", "", 2, "usage", "no command given");
  }

  if (!out_dir.empty()) overrides.push_back("run.output_dir=" + out_dir);
  if (workers >= 0) overrides.push_back("run.workers=" + std::to_string(workers));
  overrides.push_back("run.command=" + command);

  zp::RunConfig cfg;
  try {
    cfg = zp::load_config(set, config_path, overrides);
  } catch (const zp::ConfigError& e) {
    return report(command, out_dir, 2, "config", e.what());
  }
  try {
    zp::run_command(cfg);
  } catch (const zp::ConfigError& e) {
    return report(command, cfg.output_dir, 2, "config", e.what());
  } catch (const zp::InvalidParameters& e) {
    return report(command, cfg.output_dir, 2, "invalid_parameters", e.what());
  } catch (const zp::NumericalError& e) {
    return report(command, cfg.output_dir, 3, "numerical", e.what());
  } catch (const std::exception& e) {
    return report(command, cfg.output_dir, 3, "failure", e.what());
  }
  return 0;
}
