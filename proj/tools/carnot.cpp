#include "carnot/experiment.hpp"
#include "carnot/montecarlo.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

namespace {

struct Flags {
  std::string config;
  carnot::Overrides overrides;
  std::uint64_t seed = 0;
  std::uint64_t samples = 0;
  std::string out;
  std::string mollifier;
  int n = 0;
  std::string group;
};

void add_flags(CLI::App* cmd, Flags& f, bool config_flag) {
  if (config_flag) cmd->add_option("--config", f.config, "JSON experiment config");
  cmd->add_option("--seed", f.seed, "random seed");
  cmd->add_option("--samples", f.samples, "Monte Carlo sample count")->check(CLI::PositiveNumber);
  cmd->add_option("--out", f.out, "output file; a .provenance.json sidecar is written next to it");
  cmd->add_option("--mollifier", f.mollifier, "mollifier family: box, power_tail, smooth_bump");
  cmd->add_option("--n", f.n, "single mollifier index")->check(CLI::PositiveNumber);
  cmd->add_option("--group", f.group, "group name, e.g. heisenberg(1)");
}

carnot::Overrides collect(const CLI::App* cmd, const Flags& f) {
  carnot::Overrides o;
  if (cmd->count("--seed")) o.seed = f.seed;
  if (cmd->count("--samples")) o.samples = f.samples;
  if (cmd->count("--out")) o.out = f.out;
  if (cmd->count("--mollifier")) o.mollifier = f.mollifier;
  if (cmd->count("--n")) o.n = f.n;
  if (cmd->count("--group")) o.group = f.group;
  return o;
}

void apply_thread_cap() {
  const char* env = std::getenv("CARNOT_BBM_THREADS");
  if (!env) return;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (end != env && *end == '\0' && v > 0) carnot::set_thread_cap(static_cast<int>(v));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical experiments on Carnot groups"};
  app.require_subcommand(1);
  apply_thread_cap();

  Flags flags;
  std::string run_path;
  CLI::App* run = app.add_subcommand("run", "run the experiment named in a config file");
  run->add_option("config", run_path, "JSON experiment config")->required();
  add_flags(run, flags, false);

  std::vector<std::pair<std::string, CLI::App*>> subs;
  for (const auto& kind : carnot::experiment_kinds()) {
    CLI::App* cmd = app.add_subcommand(kind, "run the " + kind + " experiment");
    add_flags(cmd, flags, true);
    subs.emplace_back(kind, cmd);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) {
      const carnot::Json doc = carnot::read_config_file(run_path);
      return carnot::run_and_report(doc, "", collect(run, flags), std::cout, std::cerr);
    }
    for (const auto& [kind, cmd] : subs) {
      if (!cmd->parsed()) continue;
      const carnot::Json doc = flags.config.empty() ? carnot::Json::object() : carnot::read_config_file(flags.config);
      return carnot::run_and_report(doc, kind, collect(cmd, flags), std::cout, std::cerr);
    }
  } catch (const carnot::ConfigError& e) {
    std::cerr << "schema violation at " << e.what() << "\n";
    return 2;
  }
  return 2;
}
