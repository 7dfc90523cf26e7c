// swpk: command-line front end. See README.md for the commands and keys.
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "swpk/cli.hpp"
#include "swpk/error.hpp"
#include "swpk/io.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Stein-Weiss fractional Poisson kernel laboratory"};
  app.require_subcommand(1);
  std::string config_path, out_dir;
  long long seed = -1;
  int workers = 0;
  std::vector<std::string> overrides;
  app.add_option("--config", config_path, "flat key=value config file");
  app.add_option("--seed", seed, "random seed");
  app.add_option("--workers", workers, "worker threads for kernel build and operators");
  app.add_option("--out", out_dir, "output directory");
  const char* names[] = {"check-params", "apply", "solve", "verify", "hardy"};
  for (const char* name : names) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("overrides", overrides, "key=value overrides (bare keys mean params.*)");
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : swpk::kExitConfig;
  }

  try {
    std::vector<std::pair<std::string, std::string>> kv;
    for (const auto& o : overrides) {
      const auto eq = o.find('=');
      if (eq == std::string::npos || eq == 0) throw swpk::Error(swpk::Errc::ParseError, "expected key=value, got '" + o + "'");
      kv.emplace_back(o.substr(0, eq), o.substr(eq + 1));
    }
    if (seed >= 0) kv.emplace_back("io.seed", std::to_string(seed));
    if (workers > 0) kv.emplace_back("io.workers", std::to_string(workers));
    if (!out_dir.empty()) kv.emplace_back("io.out", out_dir);
    const std::string text = config_path.empty() ? std::string() : swpk::read_file(config_path);
    const swpk::RunConfig cfg = swpk::make_run_config(app.get_subcommands().front()->get_name(), text, kv);
    return swpk::run_command(cfg, std::cout, std::cerr);
  } catch (const swpk::Error& e) {
    std::cerr << e.what() << "\n";
    return swpk::kExitConfig;
  }
}
