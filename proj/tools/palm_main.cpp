#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "palm/cli/config.hpp"
#include "palm/cli/plot.hpp"
#include "palm/cli/presets.hpp"
#include "palm/cli/run.hpp"
#include "palm/problems/registry.hpp"

namespace {

int cmd_run(const std::string& target, const std::string& out, long seed, int trials, long epochs,
            const std::string& strategy, const std::string& eta_csv, long error_every) {
  palm::cli::RunConfig cfg;
  if (const palm::cli::Preset* p = palm::cli::find_preset(target)) {
    cfg = p->config;
  } else if (std::filesystem::exists(target)) {
    std::ifstream f(target);
    cfg = palm::cli::config_from_json(nlohmann::json::parse(f));
  } else {
    std::cerr << "error: '" << target << "' is neither a preset nor a config file\n";
    return 1;
  }
  if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
  if (trials > 0) cfg.trials = trials;
  if (epochs > 0) cfg.epochs = epochs;
  if (!strategy.empty()) cfg.strategy = strategy;
  if (error_every >= 0) cfg.error_every = error_every;
  if (!eta_csv.empty()) {
    cfg.eta.clear();
    std::stringstream ss(eta_csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) cfg.eta.push_back(std::atof(tok.c_str()));
  }

  std::string out_dir = out;
  if (out_dir.empty()) {
    std::string base = cfg.name.empty() ? cfg.problem : cfg.name;
    if (!strategy.empty()) base += "-" + strategy;
    out_dir = (std::filesystem::path(palm::cli::default_out_root()) / base).string();
  }
  const auto summary = palm::cli::run_experiment(cfg, out_dir);
  std::printf("run directory: %s\n", summary.out_dir.c_str());
  if (summary.exit_code == 0) {
    std::printf("relative l2: mean %.6e", summary.mean_l2);
    if (summary.trials.size() > 1) std::printf(" +- %.6e", summary.std_l2);
    std::printf(" (best %.6e)\n", summary.best_l2);
  } else {
    std::printf("all trials diverged\n");
  }
  return summary.exit_code;
}

int cmd_list() {
  std::printf("%-28s %s\n", "PRESET", "DESCRIPTION");
  for (const auto& p : palm::cli::presets())
    std::printf("%-28s %s%s\n", p.name.c_str(), p.description.c_str(),
                p.extended ? " [extended]" : "");
  std::printf("\nproblems: ");
  for (const auto& n : palm::problems::problem_names()) std::printf("%s ", n.c_str());
  std::printf("\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"palm: constrained physics-informed PDE learning"};
  app.require_subcommand(1);

  std::string target, out, strategy, eta;
  long seed = -1, epochs = -1, error_every = -1;
  int trials = -1, threads = 0;

  auto* run = app.add_subcommand("run", "train a preset or config file");
  run->add_option("target", target, "preset name or JSON config path")->required();
  run->add_option("--out", out, "output directory (default $PALM_RUNS_DIR/<name>)");
  run->add_option("--seed", seed, "base seed (trials use seed, seed+1, ...)");
  run->add_option("--trials", trials, "number of independent trials");
  run->add_option("--epochs", epochs, "override epoch count");
  run->add_option("--strategy", strategy,
                  "penalty update: monotonic|conditional|adaptive|rmsprop");
  run->add_option("--eta", eta, "comma-separated penalty scaling per constraint group");
  run->add_option("--error-every", error_every, "epochs between error-norm evaluations");
  run->add_option("--threads", threads, "worker threads (default: hardware)");

  auto* list = app.add_subcommand("list", "show the experiment catalog");

  std::string plot_dir;
  auto* plot = app.add_subcommand("plot", "render plots from a run directory");
  plot->add_option("run_dir", plot_dir, "run directory")->required();

  CLI11_PARSE(app, argc, argv);

  if (threads > 0) setenv("PALM_THREADS", std::to_string(threads).c_str(), 1);

  try {
    if (run->parsed()) return cmd_run(target, out, seed, trials, epochs, strategy, eta, error_every);
    if (list->parsed()) return cmd_list();
    if (plot->parsed()) {
      const int n = palm::cli::plot_run(plot_dir);
      std::printf("wrote %d plot file(s)\n", n);
      return 0;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
