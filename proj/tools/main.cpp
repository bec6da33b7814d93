#include <cstdlib>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "prethermo/config.hpp"
#include "prethermo/errors.hpp"
#include "prethermo/experiments.hpp"

namespace {

int run(int argc, char** argv) {
  CLI::App app{"Prethermal-probe thermometry simulations"};
  app.require_subcommand(1);

  std::string config_path, out_dir, seed_str, threads_str;
  std::vector<std::string> overrides;
  bool plots = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "key = value config file (or a manifest)");
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_option("--seed", seed_str, "sampling seed");
    cmd->add_option("--threads", threads_str, "worker thread count");
    cmd->add_flag("--plots", plots, "also write SVG plots");
    cmd->add_option("--set", overrides, "extra key=value overrides")
        ->take_all();
  };

  std::map<std::string, std::string> subcommands = {
      {"dynamics", "V-model trajectories vs the closed-form solution"},
      {"fisher-sweep", "Fisher information over a beta grid"},
      {"nlevel", "N-level probe QFI dynamics and equilibrium TQFI"},
      {"xi-bound", "random-state study of the xi physicality bound"},
      {"spectrum", "Liouvillian eigenvalues and timescale separation"},
  };
  for (const auto& [name, help] : subcommands) add_common(app.add_subcommand(name, help));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  prethermo::ExperimentConfig cfg;
  try {
    if (const char* env = std::getenv("PRETHERMO_OUT")) cfg.out_dir = env;
    if (!config_path.empty())
      prethermo::apply_config(cfg, prethermo::parse_key_value_file(config_path));

    std::map<std::string, std::string> flag_values;
    flag_values["experiment"] = app.get_subcommands().front()->get_name();
    if (!out_dir.empty()) flag_values["out_dir"] = out_dir;
    if (!seed_str.empty()) flag_values["seed"] = seed_str;
    if (!threads_str.empty()) flag_values["threads"] = threads_str;
    if (plots) flag_values["plots"] = "true";
    for (const std::string& kv : overrides) {
      std::size_t eq = kv.find('=');
      if (eq == std::string::npos)
        throw prethermo::ConfigError(fmt::format("--set '{}' is not key=value", kv));
      flag_values[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
    prethermo::apply_config(cfg, flag_values);

    prethermo::run_experiment(cfg);
  } catch (const prethermo::ConfigError& e) {
    fmt::print(stderr, "config error: {}\n", e.what());
    return 2;
  } catch (const prethermo::DomainError& e) {
    fmt::print(stderr, "config error: {}\n", e.what());
    return 2;
  } catch (const prethermo::NumericsError& e) {
    fmt::print(stderr, "numeric failure: {}\n", e.what());
    return 3;
  } catch (const prethermo::InvariantError& e) {
    fmt::print(stderr, "invariant violation: {}\n", e.what());
    return 4;
  }
  fmt::print("wrote {}/manifest.txt\n", cfg.out_dir);
  return 0;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
