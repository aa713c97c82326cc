#include "palm/train/trainer.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "palm/metrics/metrics.hpp"

namespace palm::train {

namespace {

// union column schema shared by every problem
const char* kCsvHeader =
    "epoch,J,C_B,C_I,C_Q,C_F,L,lambda_B,lambda_I,lambda_Q,lambda_F,"
    "mu_B,mu_I,mu_Q,mu_F,lr,err_l2,err_linf,err_l2_aux,err_linf_aux";

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

class CsvLogger {
 public:
  explicit CsvLogger(const std::string& path, const std::vector<std::string>& labels)
      : labels_(labels) {
    if (path.empty()) return;
    file_.open(path);
    file_ << kCsvHeader << "\n";
  }

  void row(const EpochLog& log) {
    if (!file_.is_open()) return;
    static const std::vector<std::string> order{"B", "I", "Q", "F"};
    auto group = [&](const std::vector<double>& v, const std::string& want) -> std::string {
      for (std::size_t g = 0; g < labels_.size(); ++g)
        if (labels_[g] == want) return fmt(v[g]);
      return "";
    };
    file_ << log.epoch << ',' << fmt(log.J);
    for (const auto& lab : order) file_ << ',' << group(log.C, lab);
    file_ << ',' << fmt(log.L);
    for (const auto& lab : order) file_ << ',' << group(log.lambda, lab);
    for (const auto& lab : order) file_ << ',' << group(log.mu, lab);
    file_ << ',' << fmt(log.lr);
    file_ << ',' << (std::isnan(log.err.l2) ? "" : fmt(log.err.l2));
    file_ << ',' << (std::isnan(log.err.linf) ? "" : fmt(log.err.linf));
    file_ << ',' << (std::isnan(log.err_aux.l2) ? "" : fmt(log.err_aux.l2));
    file_ << ',' << (std::isnan(log.err_aux.linf) ? "" : fmt(log.err_aux.linf));
    file_ << '\n';
  }

 private:
  std::ofstream file_;
  std::vector<std::string> labels_;
};

std::vector<double> slice_means(const Eigen::VectorXd& v, const std::vector<GroupSlice>& slices) {
  std::vector<double> out;
  out.reserve(slices.size());
  for (const auto& s : slices) {
    double m = 0.0;
    for (int i = 0; i < s.size; ++i) m += v[s.offset + i];
    out.push_back(m / s.size);
  }
  return out;
}

}  // namespace

double default_eta(OptimizerSpec::Kind kind) {
  // first-order primal updates pair with a small dual rate; quasi-Newton
  // converges fast enough to support eta = 1
  return kind == OptimizerSpec::Kind::Lbfgs ? 1.0 : 0.01;
}

void grid_errors(const problems::Problem& prob, const nn::Network& net,
                 const std::vector<double>& reference, ErrorPair& main_err, ErrorPair& aux_err) {
  std::size_t n = 0;
  const std::vector<double> pts = problems::make_grid(prob, prob.eval_grid, n);
  auto channel_errors = [&](int ch, const std::vector<double>* ref_vals) {
    const std::vector<double> pred = predict(net, pts.data(), n, ch);
    std::vector<double> pv, ev;
    pv.reserve(n);
    ev.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double* x = pts.data() + i * prob.dim;
      if (prob.eval_mask && !prob.eval_mask(x, ch)) continue;
      pv.push_back(pred[i]);
      ev.push_back(ref_vals ? (*ref_vals)[i] : prob.exact(x, ch));
    }
    ErrorPair e;
    e.l2 = metrics::relative_l2(pv, ev);
    e.linf = metrics::linf(pv, ev);
    return e;
  };
  if (prob.has_exact)
    main_err = channel_errors(0, nullptr);
  else if (!reference.empty())
    main_err = channel_errors(0, &reference);
  if (prob.aux_channel >= 0 && prob.has_exact) aux_err = channel_errors(prob.aux_channel, nullptr);
}

TrainResult train(const problems::Problem& prob, nn::Network& net, const TrainConfig& cfg,
                  std::uint64_t run_seed) {
  TrainResult result;

  problems::SamplingPlan plan = cfg.plan;
  plan.seed = mix_seed(run_seed, 0x5a3c1ull);
  const bool resample = plan.mode == problems::SamplingPlan::Mode::ResamplePerEpoch;

  problems::SampleSet samples;
  prob.sample(plan, resample ? 1 : 0, samples);
  const auto slices = constraint_slices(prob, samples, cfg.aggregation);
  for (const auto& s : slices) result.group_labels.push_back(s.label);
  const Eigen::Index n_constraints = slices.empty() ? 0 : slices.back().offset + slices.back().size;

  // resolve per-constraint penalty scaling factors
  alm::AlmConfig alm_cfg = cfg.alm;
  {
    std::vector<double> groups = cfg.eta_groups;
    if (groups.empty()) groups.assign(slices.size(), default_eta(cfg.optimizer.kind));
    if (groups.size() != slices.size())
      throw std::invalid_argument("eta_groups size does not match the constraint groups");
    alm_cfg.eta = Eigen::VectorXd::Zero(n_constraints);
    for (std::size_t g = 0; g < slices.size(); ++g)
      for (int i = 0; i < slices[g].size; ++i) alm_cfg.eta[slices[g].offset + i] = groups[g];
  }

  alm::DriverConfig dcfg;
  dcfg.alm = alm_cfg;
  dcfg.adam = cfg.optimizer.adam;
  dcfg.lbfgs = cfg.optimizer.lbfgs;
  dcfg.primal = cfg.optimizer.kind == OptimizerSpec::Kind::Lbfgs ? alm::PrimalKind::Lbfgs
                                                                 : alm::PrimalKind::Adam;
  alm::Driver driver(static_cast<Eigen::Index>(net.num_params()), n_constraints, dcfg);

  opt::Scheduler scheduler(cfg.scheduler, cfg.optimizer.adam.lr);

  Eigen::VectorXd theta = Eigen::Map<const Eigen::VectorXd>(net.params().data(),
                                                            static_cast<Eigen::Index>(net.num_params()));
  auto objective = [&](const Eigen::VectorXd& th, const alm::EvalRequest& req) {
    std::copy(th.data(), th.data() + th.size(), net.params().begin());
    return evaluate_problem(net, prob, samples, cfg.aggregation, cfg.phi, req);
  };

  CsvLogger csv(cfg.csv_path, result.group_labels);
  const bool hybrid = cfg.optimizer.kind == OptimizerSpec::Kind::AdamThenLbfgs;

  for (long epoch = 1; epoch <= cfg.epochs; ++epoch) {
    if (hybrid && epoch == cfg.optimizer.adam_epochs + 1) driver.set_primal(alm::PrimalKind::Lbfgs);
    if (resample && epoch > 1) {
      prob.sample(plan, epoch, samples);
      driver.invalidate_cache();
    }

    alm::EpochOutcome out = driver.step_epoch(theta, objective);

    EpochLog log;
    log.epoch = epoch;
    log.J = out.J;
    log.L = out.L;
    log.dual_updated = out.dual_updated;
    log.C = slice_means(out.C, slices);
    log.lambda = slice_means(driver.dual().lambda, slices);
    log.mu = slice_means(driver.dual().mu, slices);

    const bool adam_active = !(cfg.optimizer.kind == OptimizerSpec::Kind::Lbfgs) &&
                             !(hybrid && epoch > cfg.optimizer.adam_epochs);
    if (adam_active) {
      driver.set_lr(scheduler.step(epoch, out.L));
      log.lr = driver.lr();
    }

    if (out.diverged) {
      result.diverged = true;
      result.epochs_run = epoch;
      std::copy(theta.data(), theta.data() + theta.size(), net.params().begin());
      if (!cfg.csv_path.empty()) {
        nlohmann::json dump;
        dump["epoch"] = epoch;
        dump["J"] = out.J;
        dump["L"] = out.L;
        dump["lambda"] = log.lambda;
        dump["mu"] = log.mu;
        std::ofstream(cfg.csv_path + ".diverged.json") << dump.dump(2) << "\n";
      }
      result.history.push_back(std::move(log));
      break;
    }

    const bool last = epoch == cfg.epochs;
    if (prob.has_exact || !cfg.reference.empty()) {
      if (last || (cfg.error_every > 0 && epoch % cfg.error_every == 0)) {
        std::copy(theta.data(), theta.data() + theta.size(), net.params().begin());
        grid_errors(prob, net, cfg.reference, log.err, log.err_aux);
      }
    }
    if (last) {
      result.final_error = log.err;
      result.final_error_aux = log.err_aux;
    }

    csv.row(log);
    result.history.push_back(std::move(log));
    result.epochs_run = epoch;
  }

  std::copy(theta.data(), theta.data() + theta.size(), net.params().begin());
  result.wolfe_failures = driver.lbfgs_wolfe_failures();
  return result;
}

}  // namespace palm::train
