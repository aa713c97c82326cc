#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "palm/util/rng.hpp"

namespace palm::nn {

enum class Activation : std::uint8_t { Tanh, Sigmoid, Identity };
enum class Head : std::uint8_t { Linear, Sigmoid };

// Fixed random sinusoidal embedding of the inputs. The frequency matrix is
// sampled once at construction and excluded from the trainable parameters.
struct FourierFeatures {
  int m = 0;                // number of frequency rows; output width is 2m
  int in_dim = 0;
  double sigma = 1.0;
  std::vector<double> b;    // m x in_dim, row-major, entries ~ N(0, sigma)

  // [cos(2 pi B x); sin(2 pi B x)]
  void map(std::span<const double> x, std::span<double> out) const;
};

struct NetworkSpec {
  int in_dim = 1;
  int out_dim = 1;
  std::vector<int> hidden;          // trainable hidden layer widths
  Activation activation = Activation::Tanh;
  Head head = Head::Linear;
  bool fourier = false;
  int fourier_m = 0;                // frequencies; feature width is 2m
  double fourier_sigma = 1.0;
};

// Fully connected network with optional Fourier input features and an optional
// sigmoid output head. Parameters live in one flat vector (per layer: weights
// row-major out x in, then biases).
class Network {
 public:
  Network() = default;
  // Xavier-initialised weights (variance 2/(fan_in+fan_out)), zero biases.
  // The Fourier matrix, when enabled, is drawn from the same rng.
  Network(const NetworkSpec& spec, Rng& rng);

  const NetworkSpec& spec() const { return spec_; }
  int num_layers() const { return static_cast<int>(layer_in_.size()); }
  int layer_in(int l) const { return layer_in_[l]; }
  int layer_out(int l) const { return layer_out_[l]; }
  // Activation applied after layer l (the head activation for the last layer).
  Activation layer_activation(int l) const;
  int max_width() const;

  std::size_t num_params() const { return params_.size(); }
  std::span<double> params() { return params_; }
  std::span<const double> params() const { return params_; }
  const double* weights(int l) const { return params_.data() + w_offset_[l]; }
  const double* biases(int l) const { return params_.data() + b_offset_[l]; }

  bool has_fourier() const { return fourier_.has_value(); }
  const FourierFeatures& fourier() const { return *fourier_; }

  // Width of the tensor feeding the first trainable layer.
  int input_width() const { return fourier_ ? 2 * fourier_->m : spec_.in_dim; }

  // Single-point forward pass; out must have out_dim entries.
  void forward(std::span<const double> x, std::span<double> out) const;
  // Batched forward: n points, row-major coordinates.
  void forward_batch(const double* x, std::size_t n, double* out) const;

  void save(const std::string& path) const;
  static Network load(const std::string& path);

  friend double forward_fixed_time(const Network& net, std::span<const double> x_spatial,
                                   double t_const, int channel);

 private:
  void build_layout();

  NetworkSpec spec_;
  std::optional<FourierFeatures> fourier_;
  std::vector<int> layer_in_, layer_out_;
  std::vector<std::size_t> w_offset_, b_offset_;
  std::vector<double> params_;
};

// Evaluates the network with the time input pinned to t_const and returns the
// requested output channel. Used when one channel must depend on the spatial
// coordinates only.
double forward_fixed_time(const Network& net, std::span<const double> x_spatial, double t_const,
                          int channel = 1);

}  // namespace palm::nn
