#include "palm/cli/run.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "palm/io/refgrid.hpp"
#include "palm/metrics/metrics.hpp"
#include "palm/problems/registry.hpp"
#include "palm/train/evaluate.hpp"

namespace palm::cli {

namespace fs = std::filesystem;

std::string default_out_root() {
  if (const char* env = std::getenv("PALM_RUNS_DIR")) return env;
  return "runs";
}

std::string resolve_data_path(const std::string& path) {
  if (fs::exists(path)) return path;
  if (const char* env = std::getenv("PALM_DATA_DIR")) {
    const fs::path alt = fs::path(env) / fs::path(path).filename();
    if (fs::exists(alt)) return alt.string();
  }
  return path;
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_predictions(const std::string& path, const problems::Problem& prob,
                       const nn::Network& net) {
  std::size_t n = 0;
  const auto pts = problems::make_grid(prob, prob.eval_grid, n);
  std::vector<std::vector<double>> preds(prob.channels);
  for (int ch = 0; ch < prob.channels; ++ch)
    preds[ch] = train::predict(net, pts.data(), n, ch);
  std::ofstream f(path);
  for (int i = 0; i < prob.dim; ++i) f << (i ? "," : "") << "x" << i;
  for (int ch = 0; ch < prob.channels; ++ch) f << ",pred_" << ch;
  if (prob.has_exact)
    for (int ch = 0; ch < prob.channels; ++ch) f << ",exact_" << ch;
  f << "\n";
  for (std::size_t p = 0; p < n; ++p) {
    for (int i = 0; i < prob.dim; ++i) f << (i ? "," : "") << fmt(pts[p * prob.dim + i]);
    for (int ch = 0; ch < prob.channels; ++ch) f << ',' << fmt(preds[ch][p]);
    if (prob.has_exact)
      for (int ch = 0; ch < prob.channels; ++ch)
        f << ',' << fmt(prob.exact(pts.data() + p * prob.dim, ch));
    f << "\n";
  }
}

TrialRecord run_windowed_trial(const RunConfig& cfg, int trial, std::uint64_t seed,
                               const fs::path& dir) {
  TrialRecord rec;
  rec.trial = trial;
  rec.seed = seed;

  tw::WindowSchedule sched = make_window_schedule(cfg);
  sched.net_spec = make_network_spec(cfg, 3);

  problems::SamplingPlan dummy;  // the vortex sampler carries its own mesh
  train::TrainConfig tcfg = make_train_config(cfg, dummy);
  tcfg.csv_path = (dir / "history").string();

  nlohmann::json manifest;
  manifest["windows"] = nlohmann::json::array();
  auto on_window = [&](int w, const nn::Network& net, const train::TrainResult& res) {
    char name[32];
    std::snprintf(name, sizeof(name), "window_%02d.ckpt", w);
    net.save((dir / name).string());
    nlohmann::json jw;
    jw["index"] = w;
    jw["t_begin"] = sched.t0 + (w - 1) * sched.dt;
    jw["t_end"] = sched.t0 + w * sched.dt;
    jw["checkpoint"] = name;
    if (!res.history.empty()) {
      const auto& last = res.history.back();
      jw["J"] = last.J;
      for (std::size_t g = 0; g < res.group_labels.size(); ++g)
        jw["C_" + res.group_labels[g]] = last.C[g];
    }
    manifest["windows"].push_back(jw);
  };

  const auto t_start = std::chrono::steady_clock::now();
  tw::WindowRun wr = tw::run_windows(sched, tcfg, seed, on_window);
  rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  rec.diverged = wr.diverged || wr.windows_completed < sched.n_windows;

  std::ofstream(dir / "windows.json") << manifest.dump(2) << "\n";

  if (wr.windows_completed > 0) {
    // final-time interface error against the initial circle on a
    // cell-centred grid (the flow returns to its initial state at t = T)
    const int n_cells = 256;
    const double h = 1.0 / n_cells;
    const double t_final = sched.t0 + sched.dt * wr.windows_completed;
    std::vector<double> xyt(static_cast<std::size_t>(n_cells) * n_cells * 3);
    std::vector<double> exact(static_cast<std::size_t>(n_cells) * n_cells);
    std::size_t i = 0;
    for (int jy = 0; jy < n_cells; ++jy)
      for (int jx = 0; jx < n_cells; ++jx, ++i) {
        const double x = (jx + 0.5) * h, y = (jy + 0.5) * h;
        xyt[3 * i] = x;
        xyt[3 * i + 1] = y;
        xyt[3 * i + 2] = t_final;
        exact[i] = problems::vortex_indicator(x, y);
      }
    const auto pred = tw::evaluate_global(wr.nets, sched, xyt.data(), exact.size());
    const std::vector<double> areas(exact.size(), h * h);
    rec.area_error = metrics::area_weighted_error(pred, exact, areas);
    rec.err_l2 = metrics::relative_l2(pred, exact);
    rec.err_linf = metrics::linf(pred, exact);

    std::ofstream f(dir / "predictions.csv");
    f << "x0,x1,pred_0,exact_0\n";
    for (std::size_t p = 0; p < exact.size(); ++p)
      f << fmt(xyt[3 * p]) << ',' << fmt(xyt[3 * p + 1]) << ',' << fmt(pred[p]) << ','
        << fmt(exact[p]) << "\n";
  }
  return rec;
}

TrialRecord run_plain_trial(const RunConfig& cfg, int trial, std::uint64_t seed,
                            const fs::path& dir) {
  TrialRecord rec;
  rec.trial = trial;
  rec.seed = seed;

  problems::Problem prob = problems::make_problem(cfg.problem, cfg.problem_params, seed);
  if (cfg.out_channels != prob.channels)
    throw std::invalid_argument("config: network out_channels does not match the problem");

  train::TrainConfig tcfg = make_train_config(cfg, prob.default_plan);
  tcfg.csv_path = (dir / "history.csv").string();
  if (!cfg.reference_file.empty()) {
    const io::RefGrid ref = io::RefGrid::load(resolve_data_path(cfg.reference_file));
    tcfg.reference = ref.on_eval_grid(prob);
  }

  Rng net_rng(mix_seed(seed, 0x11d));
  nn::Network net(make_network_spec(cfg, prob.dim), net_rng);

  const auto t_start = std::chrono::steady_clock::now();
  const train::TrainResult res = train::train(prob, net, tcfg, seed);
  rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();

  rec.diverged = res.diverged;
  rec.err_l2 = res.final_error.l2;
  rec.err_linf = res.final_error.linf;
  rec.err_l2_aux = res.final_error_aux.l2;
  rec.err_linf_aux = res.final_error_aux.linf;

  net.save((dir / "checkpoint.bin").string());
  write_predictions((dir / "predictions.csv").string(), prob, net);
  return rec;
}

}  // namespace

RunSummary run_experiment(const RunConfig& cfg, const std::string& out_dir) {
  RunSummary summary;
  summary.out_dir = out_dir;
  fs::create_directories(out_dir);
  std::ofstream(fs::path(out_dir) / "config.json") << config_to_json(cfg).dump(2) << "\n";

  for (int t = 0; t < cfg.trials; ++t) {
    const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(t);
    const fs::path dir = fs::path(out_dir) / ("trial_" + std::to_string(t));
    fs::create_directories(dir);
    TrialRecord rec =
        cfg.windowed ? run_windowed_trial(cfg, t, seed, dir) : run_plain_trial(cfg, t, seed, dir);
    summary.trials.push_back(rec);
    std::fprintf(stderr, "[palm] trial %d/%d: %s l2=%.3e (%.1fs)\n", t + 1, cfg.trials,
                 rec.diverged ? "DIVERGED" : "done", rec.err_l2, rec.wall_seconds);
  }

  std::vector<double> l2s;
  for (const auto& r : summary.trials)
    if (!r.diverged && std::isfinite(r.err_l2)) l2s.push_back(r.err_l2);
  if (l2s.empty()) {
    summary.exit_code = 2;
  } else {
    const auto st = metrics::trial_stats(l2s);
    summary.mean_l2 = st.mean;
    summary.std_l2 = st.stddev;
    summary.best_l2 = *std::min_element(l2s.begin(), l2s.end());
  }

  nlohmann::json j;
  j["config"] = config_to_json(cfg);
  j["trials"] = nlohmann::json::array();
  for (const auto& r : summary.trials) {
    nlohmann::json jt;
    jt["trial"] = r.trial;
    jt["seed"] = r.seed;
    jt["diverged"] = r.diverged;
    jt["rel_l2"] = r.err_l2;
    jt["linf"] = r.err_linf;
    if (std::isfinite(r.err_l2_aux)) {
      jt["rel_l2_aux"] = r.err_l2_aux;
      jt["linf_aux"] = r.err_linf_aux;
    }
    if (r.area_error > 0.0) jt["area_error"] = r.area_error;
    jt["wall_seconds"] = r.wall_seconds;
    j["trials"].push_back(jt);
  }
  if (!l2s.empty()) {
    j["rel_l2_mean"] = summary.mean_l2;
    if (l2s.size() > 1) j["rel_l2_std"] = summary.std_l2;
    j["rel_l2_best"] = summary.best_l2;
  }
  std::ofstream(fs::path(out_dir) / "summary.json") << j.dump(2) << "\n";
  return summary;
}

}  // namespace palm::cli
