#include "palm/nn/network.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

namespace palm::nn {

void FourierFeatures::map(std::span<const double> x, std::span<double> out) const {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  for (int f = 0; f < m; ++f) {
    double t = 0.0;
    for (int i = 0; i < in_dim; ++i) t += b[static_cast<std::size_t>(f) * in_dim + i] * x[i];
    t *= two_pi;
    out[f] = std::cos(t);
    out[f + m] = std::sin(t);
  }
}

Network::Network(const NetworkSpec& spec, Rng& rng) : spec_(spec) {
  if (spec_.fourier) {
    FourierFeatures ff;
    ff.m = spec_.fourier_m;
    ff.in_dim = spec_.in_dim;
    ff.sigma = spec_.fourier_sigma;
    ff.b.resize(static_cast<std::size_t>(ff.m) * ff.in_dim);
    for (double& e : ff.b) e = rng.normal(0.0, ff.sigma);
    fourier_ = std::move(ff);
  }
  build_layout();
  // Xavier: weight variance 2/(fan_in + fan_out); biases zero.
  for (int l = 0; l < num_layers(); ++l) {
    const double std = std::sqrt(2.0 / (layer_in_[l] + layer_out_[l]));
    double* w = params_.data() + w_offset_[l];
    for (int k = 0; k < layer_in_[l] * layer_out_[l]; ++k) w[k] = rng.normal(0.0, std);
  }
}

void Network::build_layout() {
  layer_in_.clear();
  layer_out_.clear();
  int prev = input_width();
  for (int hw : spec_.hidden) {
    layer_in_.push_back(prev);
    layer_out_.push_back(hw);
    prev = hw;
  }
  layer_in_.push_back(prev);
  layer_out_.push_back(spec_.out_dim);

  w_offset_.resize(layer_in_.size());
  b_offset_.resize(layer_in_.size());
  std::size_t off = 0;
  for (std::size_t l = 0; l < layer_in_.size(); ++l) {
    w_offset_[l] = off;
    off += static_cast<std::size_t>(layer_in_[l]) * layer_out_[l];
    b_offset_[l] = off;
    off += layer_out_[l];
  }
  params_.assign(off, 0.0);
}

Activation Network::layer_activation(int l) const {
  if (l + 1 < num_layers()) return spec_.activation;
  return spec_.head == Head::Sigmoid ? Activation::Sigmoid : Activation::Identity;
}

int Network::max_width() const {
  int w = std::max(spec_.in_dim, input_width());
  for (int l = 0; l < num_layers(); ++l) w = std::max(w, layer_out_[l]);
  return w;
}

namespace {
inline double activate(Activation a, double z) {
  switch (a) {
    case Activation::Tanh: return std::tanh(z);
    case Activation::Sigmoid: return 1.0 / (1.0 + std::exp(-z));
    case Activation::Identity: return z;
  }
  return z;
}
}  // namespace

void Network::forward(std::span<const double> x, std::span<double> out) const {
  std::vector<double> buf_a(max_width()), buf_b(max_width());
  double* cur = buf_a.data();
  double* nxt = buf_b.data();
  int width;
  if (fourier_) {
    width = 2 * fourier_->m;
    fourier_->map(x, std::span<double>(cur, width));
  } else {
    width = spec_.in_dim;
    std::copy(x.begin(), x.end(), cur);
  }
  for (int l = 0; l < num_layers(); ++l) {
    const double* w = weights(l);
    const double* b = biases(l);
    const Activation act = layer_activation(l);
    for (int j = 0; j < layer_out_[l]; ++j) {
      double z = b[j];
      const double* wrow = w + static_cast<std::size_t>(j) * layer_in_[l];
      for (int k = 0; k < layer_in_[l]; ++k) z += wrow[k] * cur[k];
      nxt[j] = activate(act, z);
    }
    std::swap(cur, nxt);
    width = layer_out_[l];
  }
  std::copy(cur, cur + spec_.out_dim, out.begin());
}

void Network::forward_batch(const double* x, std::size_t n, double* out) const {
  for (std::size_t p = 0; p < n; ++p)
    forward(std::span<const double>(x + p * spec_.in_dim, spec_.in_dim),
            std::span<double>(out + p * spec_.out_dim, spec_.out_dim));
}

double forward_fixed_time(const Network& net, std::span<const double> x_spatial, double t_const,
                          int channel) {
  if (net.spec().out_dim < 2) throw std::invalid_argument("forward_fixed_time: needs >= 2 output channels");
  std::vector<double> in(x_spatial.begin(), x_spatial.end());
  in.push_back(t_const);
  std::vector<double> out(net.spec().out_dim);
  net.forward(in, out);
  return out[static_cast<std::size_t>(channel)];
}

namespace {
constexpr char kMagic[8] = {'P', 'A', 'L', 'M', 'N', 'E', 'T', '1'};
}

void Network::save(const std::string& path) const {
  nlohmann::json header;
  header["in_dim"] = spec_.in_dim;
  header["out_dim"] = spec_.out_dim;
  header["hidden"] = spec_.hidden;
  header["activation"] = static_cast<int>(spec_.activation);
  header["head"] = static_cast<int>(spec_.head);
  header["fourier"] = spec_.fourier;
  header["fourier_m"] = spec_.fourier_m;
  header["fourier_sigma"] = spec_.fourier_sigma;
  const std::string hs = header.dump();

  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open checkpoint for writing: " + path);
  f.write(kMagic, sizeof(kMagic));
  const std::uint64_t hlen = hs.size();
  f.write(reinterpret_cast<const char*>(&hlen), sizeof(hlen));
  f.write(hs.data(), static_cast<std::streamsize>(hs.size()));
  const std::uint64_t bn = fourier_ ? fourier_->b.size() : 0;
  f.write(reinterpret_cast<const char*>(&bn), sizeof(bn));
  if (bn) f.write(reinterpret_cast<const char*>(fourier_->b.data()), static_cast<std::streamsize>(bn * sizeof(double)));
  const std::uint64_t pn = params_.size();
  f.write(reinterpret_cast<const char*>(&pn), sizeof(pn));
  f.write(reinterpret_cast<const char*>(params_.data()), static_cast<std::streamsize>(pn * sizeof(double)));
  if (!f) throw std::runtime_error("short write to checkpoint: " + path);
}

Network Network::load(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open checkpoint: " + path);
  char magic[8];
  f.read(magic, sizeof(magic));
  if (!f || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw std::runtime_error("not a network checkpoint: " + path);
  std::uint64_t hlen = 0;
  f.read(reinterpret_cast<char*>(&hlen), sizeof(hlen));
  std::string hs(hlen, '\0');
  f.read(hs.data(), static_cast<std::streamsize>(hlen));
  const auto header = nlohmann::json::parse(hs);

  Network net;
  net.spec_.in_dim = header.at("in_dim").get<int>();
  net.spec_.out_dim = header.at("out_dim").get<int>();
  net.spec_.hidden = header.at("hidden").get<std::vector<int>>();
  net.spec_.activation = static_cast<Activation>(header.at("activation").get<int>());
  net.spec_.head = static_cast<Head>(header.at("head").get<int>());
  net.spec_.fourier = header.at("fourier").get<bool>();
  net.spec_.fourier_m = header.at("fourier_m").get<int>();
  net.spec_.fourier_sigma = header.at("fourier_sigma").get<double>();

  std::uint64_t bn = 0;
  f.read(reinterpret_cast<char*>(&bn), sizeof(bn));
  if (net.spec_.fourier) {
    FourierFeatures ff;
    ff.m = net.spec_.fourier_m;
    ff.in_dim = net.spec_.in_dim;
    ff.sigma = net.spec_.fourier_sigma;
    ff.b.resize(bn);
    f.read(reinterpret_cast<char*>(ff.b.data()), static_cast<std::streamsize>(bn * sizeof(double)));
    net.fourier_ = std::move(ff);
  }
  net.build_layout();
  std::uint64_t pn = 0;
  f.read(reinterpret_cast<char*>(&pn), sizeof(pn));
  if (pn != net.params_.size()) throw std::runtime_error("checkpoint parameter count mismatch: " + path);
  f.read(reinterpret_cast<char*>(net.params_.data()), static_cast<std::streamsize>(pn * sizeof(double)));
  if (!f) throw std::runtime_error("truncated checkpoint: " + path);
  return net;
}

}  // namespace palm::nn
