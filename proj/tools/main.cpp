#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "nsbox/errors.hpp"
#include "nsbox/jobs.hpp"
#include "nsbox/version.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Pseudo-spectral Navier-Stokes toolkit on the periodic box"};
  app.set_version_flag("--version", std::string(nsbox::kVersion));
  app.require_subcommand(0, 1);

  std::string config_path;
  std::string out_dir;
  std::vector<std::string> sets;
  int jobs = 1;
  std::string chosen;

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"norms", "Besov and shell norms of a random or snapshot field"},
      {"solve-ivp", "Integrate the initial value problem"},
      {"solve-periodic", "Picard solve of the time-periodic problem"},
      {"stability", "Perturbation decay against a periodic background"},
      {"counterexample", "Norm-growth experiment with the oscillatory force"},
      {"estimates", "Empirical constants for the core inequalities"},
      {"sweep", "Cartesian parameter sweep of another command"},
  };
  for (const auto& [name, description] : commands) {
    CLI::App* sub = app.add_subcommand(name, description);
    sub->add_option("-c,--config", config_path, "key=value config file");
    sub->add_option("-s,--set", sets, "Override a config key (key=value, repeatable)");
    sub->add_option("-o,--out", out_dir, "Output directory (sets output.dir)");
    sub->add_option("-j,--jobs", jobs, "Parallel runs, sweep only");
    sub->callback([&chosen, cmd = name] { chosen = cmd; });
  }
  CLI11_PARSE(app, argc, argv);
  if (chosen.empty()) {
    std::fputs(app.help().c_str(), stdout);
    return 0;
  }

  nsbox::Config cfg;
  try {
    if (!config_path.empty()) cfg = nsbox::Config::load_file(config_path);
    for (const std::string& kv : sets) {
      const std::size_t eq = kv.find('=');
      if (eq == std::string::npos)
        throw nsbox::InvalidParameter("--set expects key=value, got '" + kv + "'");
      cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    cfg.set("command", chosen);
    if (!out_dir.empty()) cfg.set("output.dir", out_dir);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return nsbox::jobs::kExitConfig;
  }

  const nsbox::jobs::JobOutcome outcome = nsbox::jobs::run_job(std::move(cfg), jobs);
  if (!outcome.message.empty()) std::fprintf(stderr, "error: %s\n", outcome.message.c_str());
  for (const auto& [key, value] : outcome.summary)
    std::printf("%s = %s\n", key.c_str(), value.c_str());
  return outcome.exit_code;
}
