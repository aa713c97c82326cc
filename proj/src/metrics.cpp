#include "palm/metrics/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace palm::metrics {

double relative_l2(std::span<const double> pred, std::span<const double> exact) {
  if (pred.size() != exact.size()) throw std::invalid_argument("relative_l2: length mismatch");
  double d2 = 0.0, e2 = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = pred[i] - exact[i];
    d2 += d * d;
    e2 += exact[i] * exact[i];
  }
  if (e2 == 0.0) throw std::invalid_argument("relative_l2: zero reference norm");
  return std::sqrt(d2) / std::sqrt(e2);
}

double linf(std::span<const double> pred, std::span<const double> exact) {
  if (pred.size() != exact.size()) throw std::invalid_argument("linf: length mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) m = std::max(m, std::fabs(pred[i] - exact[i]));
  return m;
}

double area_weighted_error(std::span<const double> pred, std::span<const double> exact,
                           std::span<const double> areas) {
  double s = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) s += std::fabs(pred[i] - exact[i]) * areas[i];
  return s;
}

TrialStats trial_stats(std::span<const double> values) {
  TrialStats st;
  const std::size_t n = values.size();
  if (n == 0) {
    st.mean = std::numeric_limits<double>::quiet_NaN();
    st.stddev = std::numeric_limits<double>::quiet_NaN();
    return st;
  }
  double s = 0.0;
  for (double v : values) s += v;
  st.mean = s / static_cast<double>(n);
  if (n < 2) {
    st.stddev = std::numeric_limits<double>::quiet_NaN();
    return st;
  }
  double q = 0.0;
  for (double v : values) q += (v - st.mean) * (v - st.mean);
  st.stddev = std::sqrt(q / static_cast<double>(n - 1));
  return st;
}

}  // namespace palm::metrics
