#pragma once

#include <string>
#include <vector>

#include "palm/alm/alm.hpp"
#include "palm/nn/network.hpp"
#include "palm/problems/problem.hpp"

namespace palm::train {

// Whether each constraint type is one expected value over its batch or one
// equality per sampled point.
enum class Aggregation { Expectation, Pointwise };

struct GroupSlice {
  std::string label;
  int offset = 0;  // position of the group inside the constraint vector
  int size = 0;
};

// Layout of the constraint vector for a problem under an aggregation mode.
std::vector<GroupSlice> constraint_slices(const problems::Problem& prob,
                                          const problems::SampleSet& samples, Aggregation agg);

// Objective, constraints and gradients of the sampled problem at the current
// network parameters. Expectation mode returns decomposed gradients (gradJ
// and one vector per constraint); pointwise mode returns one combined
// gradient assembled for the multipliers in the request. Deterministic for a
// fixed sample set regardless of worker count.
alm::ConstrainedEval evaluate_problem(const nn::Network& net, const problems::Problem& prob,
                                      const problems::SampleSet& samples, Aggregation agg,
                                      alm::DistanceFn phi, const alm::EvalRequest& req);

// Network predictions for one channel on a batch of points (chunk-parallel).
std::vector<double> predict(const nn::Network& net, const double* x, std::size_t n, int channel);

}  // namespace palm::train
