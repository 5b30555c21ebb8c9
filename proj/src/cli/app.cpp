#include "pem/cli/app.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "pem/cli/commands.hpp"
#include "pem/cli/config.hpp"
#include "pem/cli/output.hpp"
#include "pem/errors.hpp"

namespace pem::cli {

namespace {

using Command = std::function<void(const RunConfig&, std::ostream&)>;

const std::vector<std::pair<std::string, Command>>& commands() {
  static const std::vector<std::pair<std::string, Command>> c{
      {"stationary", cmd_stationary}, {"rst", cmd_rst},       {"transient", cmd_transient},
      {"symmetry", cmd_symmetry},     {"sweep", cmd_sweep},
  };
  return c;
}

std::string option_names(const std::string& key) {
  std::string names = "--" + key;
  if (key.find('_') != std::string::npos) {
    std::string dashed = key;
    for (char& ch : dashed)
      if (ch == '_') ch = '-';
    names += ",--" + dashed;
  }
  return names;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Poroelastic ring and annulus simulator", "pem_sim"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  app.add_option("--config", config_path, "key = value configuration file");
  std::map<std::string, std::string> flags;
  for (const auto& key : config_keys()) app.add_option(option_names(key), flags[key]);

  const auto& cmds = commands();
  std::vector<CLI::App*> subs;
  subs.reserve(cmds.size());
  for (const auto& [name, fn] : cmds) subs.push_back(app.add_subcommand(name));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "pem_sim: " << e.what() << "\n";
    return kExitConfig;
  }

  std::size_t chosen = 0;
  while (chosen < subs.size() && !subs[chosen]->parsed()) ++chosen;

  try {
    RunConfig config;
    if (!config_path.empty()) apply_file(config, std::filesystem::absolute(config_path));
    for (const auto& key : config_keys()) {
      const auto* opt = app.get_option("--" + key);
      if (opt->count() > 0) apply_setting(config, key, flags[key]);
    }
    config.out = std::filesystem::absolute(config.out).lexically_normal();
    validate(config);
    prepare_output(config);
    cmds[chosen].second(config, out);
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "pem_sim: configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const OutputError& e) {
    err << "pem_sim: output error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "pem_sim: file system error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    err << "pem_sim: invalid input: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NoRootError& e) {
    err << "pem_sim: no admissible root: " << e.what() << "\n";
    return kExitNoRoot;
  } catch (const SolverError& e) {
    err << "pem_sim: solver error after " << e.iterations() << " iterations (last residual "
        << format_number(e.last_residual()) << "): " << e.what() << "\n";
    return kExitSolver;
  } catch (const std::exception& e) {
    err << "pem_sim: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace pem::cli
