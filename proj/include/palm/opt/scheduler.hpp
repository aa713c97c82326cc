#pragma once

namespace palm::opt {

enum class SchedulerKind { None, Plateau, Exponential };

struct SchedulerConfig {
  SchedulerKind kind = SchedulerKind::None;
  double factor = 0.98;
  int patience = 100;        // plateau: stagnant epochs before a cut
  int period = 1000;         // exponential: epochs between cuts
  double rel_threshold = 1e-8;  // improvement below this counts as stagnant
};

// Learning-rate schedule driven by a monitored loss. Plateau multiplies the
// rate by `factor` once the loss has failed to improve for `patience` epochs;
// exponential multiplies every `period` epochs regardless.
class Scheduler {
 public:
  Scheduler() = default;
  explicit Scheduler(SchedulerConfig cfg, double lr0) : cfg_(cfg), lr_(lr0) {}

  double lr() const { return lr_; }

  // Call once per epoch with the monitored loss; returns the updated rate.
  double step(long epoch, double monitored);

 private:
  SchedulerConfig cfg_;
  double lr_ = 0.0;
  double best_ = 0.0;
  bool has_best_ = false;
  int stagnant_ = 0;
};

}  // namespace palm::opt
