#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <sstream>

#include "fraclab/config.hpp"
#include "fraclab/errors.hpp"

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::string flag_name(std::string key) {
  for (auto& ch : key)
    if (ch == '_') ch = '-';
  return "--" + key;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fraclab: fractional GJMS verification laboratory"};
  app.require_subcommand(0, 1);
  bool list = false;
  app.add_flag("--list", list, "List subcommands and the identity each one checks");

  std::map<std::string, std::string> globals;
  app.add_option("--threads", globals["threads"], "OpenMP threads for mode loops");
  app.add_option("--seed", globals["seed"], "Random seed (default 0)");
  app.add_option("--fault-d-gamma", globals["fault_d_gamma"], "Scale d_gamma (fault injection)");

  std::map<std::string, std::map<std::string, std::string>> values;
  std::map<std::string, CLI::App*> subs;
  for (const auto& info : fraclab::command_table()) {
    auto* sub = app.add_subcommand(info.name, info.anchor);
    subs[info.name] = sub;
    for (const auto& token : split(info.keys, ' '))
      for (const auto& key : split(token, '|'))
        if (key != "seed" && key != "fault_d_gamma")
          sub->add_option(flag_name(key), values[info.name][key]);
  }
  std::string config_path;
  auto* run = app.add_subcommand("run", "Run a key = value config file");
  run->add_option("config", config_path, "Config path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (list) {
    for (const auto& info : fraclab::command_table())
      std::cout << info.name << "\t" << info.anchor << "\n    keys: " << info.keys << "\n";
    return 0;
  }
  if (run->parsed()) return fraclab::run_config(config_path, std::cout, std::cerr);

  fraclab::ExperimentConfig cfg;
  for (const auto& [name, sub] : subs)
    if (sub->parsed()) cfg.command = name;
  if (cfg.command.empty()) {
    std::cerr << app.help();
    return 2;
  }
  for (const auto& [k, v] : values[cfg.command])
    if (!v.empty()) cfg.values[k] = v;
  for (const auto& [k, v] : globals)
    if (!v.empty()) cfg.values[k] = v;
  try {
    const int code = fraclab::run_command(cfg, std::cout);
    if (code != 0) std::cerr << "fraclab: tolerance failure\n";
    return code;
  } catch (const fraclab::ConfigError& e) {
    std::cerr << "fraclab: invalid arguments: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "fraclab: " << e.what() << "\n";
    return 1;
  }
}
