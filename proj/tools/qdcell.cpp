// qdcell: command-line driver for the quantum-dot photocell simulator.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qdpc/errors.hpp"
#include "qdpc/io/config.hpp"
#include "qdpc/io/run.hpp"

namespace {

struct Options {
  std::string config_path;
  std::string output;
  std::string model;
  std::vector<std::string> settings;
  bool serial = false;
};

void add_common(CLI::App* sub, Options& opt) {
  sub->add_option("--config", opt.config_path, "key = value configuration file")->check(CLI::ExistingFile);
  sub->add_option("--out", opt.output, "prefix for every output file");
  sub->add_option("--model", opt.model, "coupled, uncoupled or both")
      ->check(CLI::IsMember({"coupled", "uncoupled", "both"}));
  sub->add_option("--set", opt.settings, "override one key, e.g. --set d_perp_nm=2.0");
  sub->add_flag("--serial", opt.serial, "run sweeps on one thread");
}

qdpc::io::RunConfig resolve(const Options& opt, qdpc::io::Experiment experiment) {
  qdpc::io::RunConfig cfg;
  if (!opt.config_path.empty()) {
    std::ifstream in(opt.config_path, std::ios::binary);
    if (!in) throw qdpc::Error("cannot read " + opt.config_path);
    std::ostringstream text;
    text << in.rdbuf();
    cfg = qdpc::io::parse_config(text.str());
  }
  for (const auto& s : opt.settings) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw qdpc::ParseError(0, s, "--set expects key=value");
    qdpc::io::apply_setting(cfg, s.substr(0, eq), s.substr(eq + 1));
  }
  cfg.experiment = experiment;
  if (!opt.output.empty()) cfg.output = opt.output;
  if (!opt.model.empty()) cfg.models = qdpc::io::parse_models(opt.model);
  if (opt.serial) cfg.parallel = false;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum-dot photocell simulator"};
  app.require_subcommand(1);

  Options opt;
  const std::vector<std::pair<const char*, const char*>> commands = {
      {"rates", "print the derived rates and energies"},
      {"dynamics", "integrate the populations from the ground state"},
      {"steady", "stationary populations and operating point"},
      {"iv", "current-voltage curve and peak power"},
      {"sweep-gamma-x", "enhancement vs phonon relaxation rate"},
      {"sweep-geometry", "enhancement over dot spacing and barrier width"},
  };
  for (const auto& [name, help] : commands) add_common(app.add_subcommand(name, help), opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? qdpc::io::kExitOk : qdpc::io::kExitFatal;
  }

  try {
    const auto* sub = app.get_subcommands().front();
    const auto cfg = resolve(opt, qdpc::io::parse_experiment(sub->get_name()));
    return qdpc::io::run_experiment(cfg, std::cout).exit_code;
  } catch (const qdpc::ParseError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
  }
  return qdpc::io::kExitFatal;
}
