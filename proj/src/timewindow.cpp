#include "palm/tw/timewindow.hpp"

#include <cmath>
#include <stdexcept>

#include "palm/ad/engine.hpp"
#include "palm/util/parallel.hpp"

namespace palm::tw {

WindowRun run_windows(const WindowSchedule& sched, const train::TrainConfig& per_window,
                      std::uint64_t seed,
                      const std::function<void(int, const nn::Network&, const train::TrainResult&)>&
                          on_window) {
  WindowRun run;
  std::vector<double> ic;  // empty: window 1 takes the indicator circle

  for (int w = 0; w < sched.n_windows; ++w) {
    problems::VortexParams vp;
    vp.period = sched.period;
    vp.t_begin = sched.t0 + w * sched.dt;
    vp.t_end = sched.t0 + (w + 1) * sched.dt;
    vp.nx = sched.nx;
    vp.ny = sched.ny;
    vp.nt = sched.nt;
    vp.ic_values = ic;
    const problems::Problem prob = problems::make_vortex(vp);

    nn::Network net = [&] {
      if (sched.warm_start && w > 0) return run.nets.back();
      Rng rng(mix_seed(seed, 1000 + static_cast<std::uint64_t>(w)));
      return nn::Network(sched.net_spec, rng);
    }();

    train::TrainConfig cfg = per_window;
    if (!per_window.csv_path.empty())
      cfg.csv_path = per_window.csv_path + ".w" + std::to_string(w + 1) + ".csv";
    train::TrainResult res = train::train(prob, net, cfg, mix_seed(seed, static_cast<std::uint64_t>(w)));

    const bool bad = res.diverged;
    run.results.push_back(std::move(res));
    if (bad) {
      run.diverged = true;
      break;
    }

    // terminal state on the spatial grid becomes the next initial condition;
    // the copy freezes it against later mutation of the network
    HandoffField hf;
    hf.window = w + 1;
    hf.xy = problems::vortex_spatial_grid(sched.nx, sched.ny);
    const std::size_t npts = hf.xy.size() / 2;
    std::vector<double> xyt(npts * 3);
    for (std::size_t i = 0; i < npts; ++i) {
      xyt[3 * i] = hf.xy[2 * i];
      xyt[3 * i + 1] = hf.xy[2 * i + 1];
      xyt[3 * i + 2] = vp.t_end;
    }
    hf.phi = train::predict(net, xyt.data(), npts, 0);
    ic = hf.phi;
    run.handoffs.push_back(std::move(hf));
    run.nets.push_back(std::move(net));
    run.windows_completed = w + 1;
    if (on_window) on_window(w + 1, run.nets.back(), run.results.back());
  }
  return run;
}

int window_of(const WindowSchedule& sched, double t, int windows_available) {
  const double T = sched.t0 + sched.dt * windows_available;
  if (t < sched.t0 - 1e-12 || t > T + 1e-12)
    throw std::out_of_range("query time outside the trained horizon");
  int w = static_cast<int>(std::floor((t - sched.t0) / sched.dt));
  // a query exactly on an interior boundary belongs to the later window
  while (w + 1 < windows_available && t >= sched.t0 + (w + 1) * sched.dt) ++w;
  if (w >= windows_available) w = windows_available - 1;
  if (w < 0) w = 0;
  return w;
}

std::vector<double> evaluate_global(const std::vector<nn::Network>& nets,
                                    const WindowSchedule& sched, const double* xyt, std::size_t n) {
  std::vector<double> out(n);
  const int avail = static_cast<int>(nets.size());
  parallel_chunks(n, 1024, [&](std::size_t, std::size_t begin, std::size_t end) {
    std::vector<std::unique_ptr<ad::NetEval>> ws(nets.size());
    for (std::size_t p = begin; p < end; ++p) {
      const int w = window_of(sched, xyt[3 * p + 2], avail);
      if (!ws[w]) ws[w] = std::make_unique<ad::NetEval>(nets[w]);
      ws[w]->forward_value(xyt + 3 * p);
      out[p] = ws[w]->out_values()[0];
    }
  });
  return out;
}

}  // namespace palm::tw
