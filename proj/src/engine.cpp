#include "palm/ad/engine.hpp"

#include <cmath>
#include <cstring>
#include <numbers>
#include <stdexcept>

namespace palm::ad {

using nn::Activation;

namespace {

// psi, psi', psi'' from the pre-activation value.
inline void act_val_derivs(Activation act, double z, double& p, double& s1, double& s2) {
  switch (act) {
    case Activation::Tanh: {
      p = std::tanh(z);
      s1 = 1.0 - p * p;
      s2 = -2.0 * p * s1;
      return;
    }
    case Activation::Sigmoid: {
      p = 1.0 / (1.0 + std::exp(-z));
      s1 = p * (1.0 - p);
      s2 = s1 * (1.0 - 2.0 * p);
      return;
    }
    case Activation::Identity: {
      p = z;
      s1 = 1.0;
      s2 = 0.0;
      return;
    }
  }
  throw std::invalid_argument("unsupported activation");
}

// psi', psi'', psi''' recovered from the post-activation value p.
inline void act_derivs_from_p(Activation act, double p, double& s1, double& s2, double& s3) {
  switch (act) {
    case Activation::Tanh: {
      s1 = 1.0 - p * p;
      s2 = -2.0 * p * s1;
      s3 = -2.0 * s1 * (1.0 - 3.0 * p * p);
      return;
    }
    case Activation::Sigmoid: {
      s1 = p * (1.0 - p);
      s2 = s1 * (1.0 - 2.0 * p);
      s3 = s1 * (1.0 - 6.0 * s1);
      return;
    }
    case Activation::Identity: {
      s1 = 1.0;
      s2 = 0.0;
      s3 = 0.0;
      return;
    }
  }
  throw std::invalid_argument("unsupported activation");
}

template <int D>
struct Kernels {
  static constexpr int NC = jet_comps(D);
  static constexpr int NH = hess_size(D);

  static void dense(const double* w, const double* b, int in, int out, const double* a, double* z) {
    for (int j = 0; j < out; ++j) {
      double acc[NC];
      for (int c = 0; c < NC; ++c) acc[c] = 0.0;
      const double* wrow = w + static_cast<std::size_t>(j) * in;
      for (int k = 0; k < in; ++k) {
        const double wv = wrow[k];
        const double* ak = a + static_cast<std::size_t>(k) * NC;
        for (int c = 0; c < NC; ++c) acc[c] += wv * ak[c];
      }
      acc[0] += b[j];
      double* zj = z + static_cast<std::size_t>(j) * NC;
      for (int c = 0; c < NC; ++c) zj[c] = acc[c];
    }
  }

  static void activate(Activation act, int n, const double* z, double* a) {
    for (int u = 0; u < n; ++u) {
      const double* zu = z + static_cast<std::size_t>(u) * NC;
      double* au = a + static_cast<std::size_t>(u) * NC;
      double p, s1, s2;
      act_val_derivs(act, zu[0], p, s1, s2);
      au[0] = p;
      for (int i = 0; i < D; ++i) au[1 + i] = s1 * zu[1 + i];
      int k = 0;
      for (int i = 0; i < D; ++i)
        for (int j = i; j < D; ++j, ++k)
          au[1 + D + k] = s2 * zu[1 + i] * zu[1 + j] + s1 * zu[1 + D + k];
    }
  }

  // Adjoint of activate: bar_a (input) -> bar_z (output, overwritten).
  static void activate_bwd(Activation act, int n, const double* z, const double* a,
                           const double* bar_a, double* bar_z) {
    for (int u = 0; u < n; ++u) {
      const double* zu = z + static_cast<std::size_t>(u) * NC;
      const double* au = a + static_cast<std::size_t>(u) * NC;
      const double* bu = bar_a + static_cast<std::size_t>(u) * NC;
      double* ou = bar_z + static_cast<std::size_t>(u) * NC;
      double s1, s2, s3;
      act_derivs_from_p(act, au[0], s1, s2, s3);
      double bv = bu[0] * s1;
      for (int i = 0; i < D; ++i) {
        bv += bu[1 + i] * s2 * zu[1 + i];
        ou[1 + i] = s1 * bu[1 + i];
      }
      int k = 0;
      for (int i = 0; i < D; ++i)
        for (int j = i; j < D; ++j, ++k) {
          const double bh = bu[1 + D + k];
          bv += bh * (s3 * zu[1 + i] * zu[1 + j] + s2 * zu[1 + D + k]);
          ou[1 + D + k] = s1 * bh;
          ou[1 + i] += bh * s2 * zu[1 + j];
          ou[1 + j] += bh * s2 * zu[1 + i];
        }
      ou[0] = bv;
    }
  }

  // Adjoint of dense: accumulates into bar_prev (in x NC, must be zeroed by
  // the caller), grad_w and grad_b.
  static void dense_bwd(const double* w, int in, int out, const double* a_prev,
                        const double* bar_z, double* bar_prev, double* grad_w, double* grad_b) {
    for (int j = 0; j < out; ++j) {
      const double* zb = bar_z + static_cast<std::size_t>(j) * NC;
      const double* wrow = w + static_cast<std::size_t>(j) * in;
      double* gwrow = grad_w + static_cast<std::size_t>(j) * in;
      grad_b[j] += zb[0];
      for (int k = 0; k < in; ++k) {
        const double wv = wrow[k];
        const double* ak = a_prev + static_cast<std::size_t>(k) * NC;
        double* bk = bar_prev + static_cast<std::size_t>(k) * NC;
        double dot = 0.0;
        for (int c = 0; c < NC; ++c) {
          bk[c] += wv * zb[c];
          dot += zb[c] * ak[c];
        }
        gwrow[k] += dot;
      }
    }
  }

  static void input_jets(const double* x, double* a0) {
    for (int k = 0; k < D; ++k) {
      double* ak = a0 + static_cast<std::size_t>(k) * NC;
      ak[0] = x[k];
      for (int i = 0; i < D; ++i) ak[1 + i] = (i == k) ? 1.0 : 0.0;
      for (int c = 0; c < NH; ++c) ak[1 + D + c] = 0.0;
    }
  }

  // cos/sin of the fixed linear map 2 pi B x; linear in x so the feature
  // Hessian is rank-one in the frequency row.
  static void fourier_jets(const nn::FourierFeatures& ff, const double* x, double* a0) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    const int m = ff.m;
    for (int f = 0; f < m; ++f) {
      const double* brow = ff.b.data() + static_cast<std::size_t>(f) * D;
      double t = 0.0;
      double tg[D];
      for (int i = 0; i < D; ++i) {
        t += brow[i] * x[i];
        tg[i] = two_pi * brow[i];
      }
      t *= two_pi;
      const double c = std::cos(t), s = std::sin(t);
      double* cf = a0 + static_cast<std::size_t>(f) * NC;
      double* sf = a0 + static_cast<std::size_t>(f + m) * NC;
      cf[0] = c;
      sf[0] = s;
      for (int i = 0; i < D; ++i) {
        cf[1 + i] = -s * tg[i];
        sf[1 + i] = c * tg[i];
      }
      int k = 0;
      for (int i = 0; i < D; ++i)
        for (int j = i; j < D; ++j, ++k) {
          cf[1 + D + k] = -c * tg[i] * tg[j];
          sf[1 + D + k] = -s * tg[i] * tg[j];
        }
    }
  }
};

}  // namespace

NetEval::NetEval(const nn::Network& net) : net_(&net), dim_(net.spec().in_dim) {
  if (dim_ < 1 || dim_ > 3) throw std::invalid_argument("NetEval: input dimension must be 1..3");
  nc_ = jet_comps(dim_);
  const int L = net.num_layers();
  a_jets_.resize(L + 1);
  z_jets_.resize(L);
  a_val_.resize(L + 1);
  a_jets_[0].resize(static_cast<std::size_t>(net.input_width()) * nc_);
  a_val_[0].resize(net.input_width());
  for (int l = 0; l < L; ++l) {
    z_jets_[l].resize(static_cast<std::size_t>(net.layer_out(l)) * nc_);
    a_jets_[l + 1].resize(static_cast<std::size_t>(net.layer_out(l)) * nc_);
    a_val_[l + 1].resize(net.layer_out(l));
  }
  bar_a_.resize(static_cast<std::size_t>(net.max_width()) * nc_);
  bar_z_.resize(static_cast<std::size_t>(net.max_width()) * nc_);
}

template <int D>
void NetEval::forward_jets_impl(const double* x) {
  using K = Kernels<D>;
  const nn::Network& net = *net_;
  if (net.has_fourier())
    K::fourier_jets(net.fourier(), x, a_jets_[0].data());
  else
    K::input_jets(x, a_jets_[0].data());
  for (int l = 0; l < net.num_layers(); ++l) {
    K::dense(net.weights(l), net.biases(l), net.layer_in(l), net.layer_out(l),
             a_jets_[l].data(), z_jets_[l].data());
    K::activate(net.layer_activation(l), net.layer_out(l), z_jets_[l].data(),
                a_jets_[l + 1].data());
  }
}

template <int D>
void NetEval::backward_jets_impl(const double* seed, double* grad) {
  using K = Kernels<D>;
  const nn::Network& net = *net_;
  const int L = net.num_layers();
  const double* bar_out = seed;
  for (int l = L - 1; l >= 0; --l) {
    K::activate_bwd(net.layer_activation(l), net.layer_out(l), z_jets_[l].data(),
                    a_jets_[l + 1].data(), bar_out, bar_z_.data());
    const std::size_t prev_n = static_cast<std::size_t>(net.layer_in(l)) * K::NC;
    std::memset(bar_a_.data(), 0, prev_n * sizeof(double));
    const std::size_t w_off = static_cast<std::size_t>(net.weights(l) - net.params().data());
    const std::size_t b_off = static_cast<std::size_t>(net.biases(l) - net.params().data());
    K::dense_bwd(net.weights(l), net.layer_in(l), net.layer_out(l), a_jets_[l].data(),
                 bar_z_.data(), bar_a_.data(), grad + w_off, grad + b_off);
    bar_out = bar_a_.data();  // adjoint of a_{l-1}; consumed before bar_a_ is re-zeroed
  }
}

void NetEval::forward_jets(const double* x) {
  switch (dim_) {
    case 1: forward_jets_impl<1>(x); return;
    case 2: forward_jets_impl<2>(x); return;
    case 3: forward_jets_impl<3>(x); return;
  }
}

void NetEval::backward_jets(const double* seed, double* grad) {
  switch (dim_) {
    case 1: backward_jets_impl<1>(seed, grad); return;
    case 2: backward_jets_impl<2>(seed, grad); return;
    case 3: backward_jets_impl<3>(seed, grad); return;
  }
}

void NetEval::forward_value(const double* x) {
  const nn::Network& net = *net_;
  if (net.has_fourier())
    net.fourier().map(std::span<const double>(x, dim_), a_val_[0]);
  else
    std::memcpy(a_val_[0].data(), x, static_cast<std::size_t>(dim_) * sizeof(double));
  for (int l = 0; l < net.num_layers(); ++l) {
    const double* w = net.weights(l);
    const double* b = net.biases(l);
    const Activation act = net.layer_activation(l);
    const int in = net.layer_in(l), out = net.layer_out(l);
    const double* a = a_val_[l].data();
    double* nxt = a_val_[l + 1].data();
    for (int j = 0; j < out; ++j) {
      double z = b[j];
      const double* wrow = w + static_cast<std::size_t>(j) * in;
      for (int k = 0; k < in; ++k) z += wrow[k] * a[k];
      double p, s1, s2;
      act_val_derivs(act, z, p, s1, s2);
      nxt[j] = p;
    }
  }
}

void NetEval::backward_value(const double* seed, double* grad) {
  const nn::Network& net = *net_;
  const int L = net.num_layers();
  double* bar = bar_z_.data();
  double* bar_prev = bar_a_.data();
  std::memcpy(bar, seed, static_cast<std::size_t>(net.spec().out_dim) * sizeof(double));
  for (int l = L - 1; l >= 0; --l) {
    const Activation act = net.layer_activation(l);
    const int in = net.layer_in(l), out = net.layer_out(l);
    const double* a = a_val_[l + 1].data();
    // fold the activation derivative into the layer adjoint
    for (int j = 0; j < out; ++j) {
      double s1, s2, s3;
      act_derivs_from_p(act, a[j], s1, s2, s3);
      bar[j] *= s1;
    }
    const double* w = net.weights(l);
    const std::size_t w_off = static_cast<std::size_t>(net.weights(l) - net.params().data());
    const std::size_t b_off = static_cast<std::size_t>(net.biases(l) - net.params().data());
    const double* a_prev = a_val_[l].data();
    std::memset(bar_prev, 0, static_cast<std::size_t>(in) * sizeof(double));
    for (int j = 0; j < out; ++j) {
      const double zb = bar[j];
      grad[b_off + j] += zb;
      const double* wrow = w + static_cast<std::size_t>(j) * in;
      double* gwrow = grad + w_off + static_cast<std::size_t>(j) * in;
      for (int k = 0; k < in; ++k) {
        bar_prev[k] += wrow[k] * zb;
        gwrow[k] += zb * a_prev[k];
      }
    }
    std::swap(bar, bar_prev);
  }
}

std::vector<Jet2> forward_jet(const nn::Network& net, std::span<const double> x) {
  NetEval ev(net);
  ev.forward_jets(x.data());
  const int d = net.spec().in_dim;
  const int nc = jet_comps(d);
  const double* out = ev.out_jets();
  std::vector<Jet2> jets(net.spec().out_dim);
  for (int ch = 0; ch < net.spec().out_dim; ++ch) {
    Jet2& j = jets[ch];
    j.dim = d;
    const double* p = out + static_cast<std::size_t>(ch) * nc;
    j.v = p[0];
    for (int i = 0; i < d; ++i) j.g[i] = p[1 + i];
    for (int k = 0; k < hess_size(d); ++k) j.h[k] = p[1 + d + k];
  }
  return jets;
}

}  // namespace palm::ad
