#pragma once

#include <span>
#include <vector>

#include "palm/ad/jet.hpp"
#include "palm/nn/network.hpp"

namespace palm::ad {

// Per-thread evaluation workspace bound to one network. A call to one of the
// forward methods fills internal buffers; the matching backward method then
// accumulates d(seed . outputs)/d(theta) into a flat gradient vector. The jet
// and value paths use separate buffers, so a point may run one jet pass and
// one value pass (for example at a pinned input) and backprop both.
class NetEval {
 public:
  explicit NetEval(const nn::Network& net);

  int dim() const { return dim_; }
  int ncomp() const { return nc_; }

  // Propagates (value, input gradient, input Hessian) jets through the
  // network. x has in_dim entries.
  void forward_jets(const double* x);
  // Post-activation jets of the outputs: out_dim x ncomp(), channel-major.
  const double* out_jets() const { return a_jets_.back().data(); }
  // seed: out_dim x ncomp() adjoints of the output jets. Accumulates into
  // grad (num_params entries).
  void backward_jets(const double* seed, double* grad);

  void forward_value(const double* x);
  const double* out_values() const { return a_val_.back().data(); }
  void backward_value(const double* seed, double* grad);

 private:
  template <int D> void forward_jets_impl(const double* x);
  template <int D> void backward_jets_impl(const double* seed, double* grad);

  const nn::Network* net_;
  int dim_, nc_;
  // jet path: a_jets_[0] holds the input features, a_jets_[l+1]/z_jets_[l]
  // the post-/pre-activation jets of trainable layer l.
  std::vector<std::vector<double>> a_jets_, z_jets_;
  std::vector<std::vector<double>> a_val_;
  std::vector<double> bar_a_, bar_z_;  // adjoint scratch, max_width x ncomp
};

// Value and first/second input derivatives of every network output at x.
std::vector<Jet2> forward_jet(const nn::Network& net, std::span<const double> x);

}  // namespace palm::ad
