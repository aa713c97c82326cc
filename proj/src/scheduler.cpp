#include "palm/opt/scheduler.hpp"

#include <cmath>

namespace palm::opt {

double Scheduler::step(long epoch, double monitored) {
  switch (cfg_.kind) {
    case SchedulerKind::None:
      return lr_;
    case SchedulerKind::Exponential:
      if (cfg_.period > 0 && epoch % cfg_.period == 0) lr_ *= cfg_.factor;
      return lr_;
    case SchedulerKind::Plateau: {
      const double margin = cfg_.rel_threshold * std::fabs(has_best_ ? best_ : monitored);
      if (!has_best_ || monitored < best_ - margin) {
        best_ = monitored;
        has_best_ = true;
        stagnant_ = 0;
      } else {
        ++stagnant_;
        if (stagnant_ >= cfg_.patience) {
          lr_ *= cfg_.factor;
          stagnant_ = 0;
        }
      }
      return lr_;
    }
  }
  return lr_;
}

}  // namespace palm::opt
