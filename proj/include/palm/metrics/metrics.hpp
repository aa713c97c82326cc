#pragma once

#include <span>

namespace palm::metrics {

// ||pred - exact||_2 / ||exact||_2; throws when the exact norm vanishes.
double relative_l2(std::span<const double> pred, std::span<const double> exact);

// max_i |pred_i - exact_i|
double linf(std::span<const double> pred, std::span<const double> exact);

// sum_i |pred_i - exact_i| * area_i
double area_weighted_error(std::span<const double> pred, std::span<const double> exact,
                           std::span<const double> areas);

struct TrialStats {
  double mean = 0.0;
  double stddev = 0.0;   // sample standard deviation; NaN for fewer than 2 trials
};

TrialStats trial_stats(std::span<const double> values);

}  // namespace palm::metrics
