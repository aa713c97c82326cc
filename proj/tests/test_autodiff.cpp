#include <doctest.h>

#include <cmath>
#include <vector>

#include "palm/ad/engine.hpp"
#include "palm/ad/jet.hpp"
#include "palm/ad/tape.hpp"
#include "palm/nn/network.hpp"
#include "palm/util/rng.hpp"
#include "testutil.hpp"

using namespace palm;
using ad::Jet2;

namespace {

// a nontrivial base jet so unary ops see generic grad/hess inputs
Jet2 base_jet(const std::vector<double>& x) {
  Jet2 a = Jet2::variable(2, 0, x[0]);
  Jet2 b = Jet2::variable(2, 1, x[1]);
  return ad::sin(a) + a * b + 0.3 * b;
}

long double base_val(long double x0, long double x1) { return std::sin(x0) + x0 * x1 + 0.3L * x1; }

nn::Network make_net(const nn::NetworkSpec& spec, std::uint64_t seed) {
  Rng rng(seed);
  return nn::Network(spec, rng);
}

}  // namespace

TEST_CASE("jet elementary ops match finite differences on 100 random inputs") {
  Rng rng(7);
  using Unary = Jet2 (*)(const Jet2&);
  struct OpCase {
    const char* name;
    Unary op;
    long double (*f)(long double);
    bool positive_only;
  };
  const OpCase cases[] = {
      {"sin", static_cast<Unary>(ad::sin), [](long double v) { return std::sin(v); }, false},
      {"cos", static_cast<Unary>(ad::cos), [](long double v) { return std::cos(v); }, false},
      {"exp", static_cast<Unary>(ad::exp), [](long double v) { return std::exp(v); }, false},
      {"tanh", static_cast<Unary>(ad::tanh), [](long double v) { return std::tanh(v); }, false},
      {"sigmoid", static_cast<Unary>(ad::sigmoid),
       [](long double v) { return 1.0L / (1.0L + std::exp(-v)); }, false},
      {"log", static_cast<Unary>(ad::log), [](long double v) { return std::log(v); }, true},
      {"sqrt", static_cast<Unary>(ad::sqrt), [](long double v) { return std::sqrt(v); }, true},
  };
  for (const auto& oc : cases) {
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<double> x{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
      if (oc.positive_only) {
        x[0] = rng.uniform(0.5, 2.0);
        x[1] = rng.uniform(0.1, 1.0);
      }
      const Jet2 got = oc.op(base_jet(x));
      const auto field = [&](const std::vector<long double>& q) -> long double {
        return oc.f(base_val(q[0], q[1]));
      };
      const Jet2 ref = testutil::fd_jet(field, x);
      std::vector<double> gv{got.v, got.g[0], got.g[1], got.h[0], got.h[1], got.h[2]};
      std::vector<double> rv{ref.v, ref.g[0], ref.g[1], ref.h[0], ref.h[1], ref.h[2]};
      CAPTURE(oc.name);
      CHECK(testutil::rel_err(gv, rv) < 1e-7);
    }
  }
  // binary ops: product and quotient
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> x{rng.uniform(-1.0, 1.0), rng.uniform(0.5, 1.5)};
    const Jet2 a = base_jet(x);
    const Jet2 b = ad::cos(Jet2::variable(2, 1, x[1])) + 2.0;
    const Jet2 prod = a * b;
    const Jet2 quot = a / b;
    auto fb = [&](const std::vector<long double>& q) -> long double {
      return std::cos(q[1]) + 2.0L;
    };
    auto fa = [&](const std::vector<long double>& q) -> long double {
      return base_val(q[0], q[1]);
    };
    const Jet2 rp = testutil::fd_jet([&](const auto& q) { return fa(q) * fb(q); }, x);
    const Jet2 rq = testutil::fd_jet([&](const auto& q) { return fa(q) / fb(q); }, x);
    CHECK(testutil::rel_err({prod.v, prod.g[0], prod.g[1], prod.h[0], prod.h[1], prod.h[2]},
                            {rp.v, rp.g[0], rp.g[1], rp.h[0], rp.h[1], rp.h[2]}) < 1e-7);
    CHECK(testutil::rel_err({quot.v, quot.g[0], quot.g[1], quot.h[0], quot.h[1], quot.h[2]},
                            {rq.v, rq.g[0], rq.g[1], rq.h[0], rq.h[1], rq.h[2]}) < 1e-7);
  }
}

TEST_CASE("jet constants have zero grad and hess") {
  const Jet2 c = Jet2::constant(3, 4.2);
  for (int i = 0; i < 3; ++i) CHECK(c.g[i] == 0.0);
  for (int k = 0; k < 6; ++k) CHECK(c.h[k] == 0.0);
  // hess symmetry is structural: packed storage holds each pair once
  const Jet2 a = base_jet({0.3, -0.7});
  CHECK(a.hess(0, 1) == a.hess(1, 0));
}

TEST_CASE("forward_jet: linear single-layer net u(x) = 2x + 1") {
  nn::NetworkSpec spec;
  spec.in_dim = 1;
  spec.out_dim = 1;
  nn::Network net = make_net(spec, 1);
  net.params()[0] = 2.0;  // weight
  net.params()[1] = 1.0;  // bias
  const auto jets = ad::forward_jet(net, std::vector<double>{0.5});
  CHECK(jets[0].v == doctest::Approx(2.0));
  CHECK(jets[0].g[0] == doctest::Approx(2.0));
  CHECK(jets[0].h[0] == doctest::Approx(0.0));
}

TEST_CASE("forward_jet: tanh at the origin") {
  nn::NetworkSpec spec;
  spec.in_dim = 1;
  spec.out_dim = 1;
  spec.hidden = {1};
  nn::Network net = make_net(spec, 1);
  net.params()[0] = 1.0;  // hidden weight
  net.params()[1] = 0.0;  // hidden bias
  net.params()[2] = 1.0;  // head weight
  net.params()[3] = 0.0;  // head bias
  const auto jets = ad::forward_jet(net, std::vector<double>{0.0});
  CHECK(jets[0].v == doctest::Approx(0.0));
  CHECK(jets[0].g[0] == doctest::Approx(1.0));
  CHECK(jets[0].h[0] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("forward_jet matches finite differences on a random 2-layer tanh MLP") {
  nn::NetworkSpec spec;
  spec.in_dim = 2;
  spec.out_dim = 1;
  spec.hidden = {8, 8};
  nn::Network net = make_net(spec, 42);
  Rng rng(43);
  for (int trial = 0; trial < 10; ++trial) {
    const std::vector<double> x{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    const auto jets = ad::forward_jet(net, x);
    const auto field = [&](const std::vector<long double>& q) -> long double {
      std::vector<double> in{static_cast<double>(q[0]), static_cast<double>(q[1])};
      std::vector<double> out(1);
      net.forward(in, out);
      return out[0];
    };
    // step 1e-4 on the value function
    const Jet2 ref = testutil::fd_jet(field, x, 1e-4, 1e-4);
    CHECK(testutil::rel_err({jets[0].g[0], jets[0].g[1]}, {ref.g[0], ref.g[1]}) < 1e-5);
    CHECK(testutil::rel_err({jets[0].h[0], jets[0].h[1], jets[0].h[2]},
                            {ref.h[0], ref.h[1], ref.h[2]}) < 1e-5);
  }
}

TEST_CASE("forward_jet on an all-zero-weight network") {
  nn::NetworkSpec spec;
  spec.in_dim = 2;
  spec.out_dim = 1;
  spec.hidden = {6};
  nn::Network net = make_net(spec, 3);
  for (double& p : net.params()) p = 0.0;
  net.params()[net.num_params() - 1] = 0.7;  // head bias
  const auto jets = ad::forward_jet(net, std::vector<double>{0.4, -0.2});
  CHECK(jets[0].v == doctest::Approx(0.7));
  CHECK(jets[0].g[0] == 0.0);
  CHECK(jets[0].g[1] == 0.0);
  for (int k = 0; k < 3; ++k) CHECK(jets[0].h[k] == 0.0);
}

TEST_CASE("tape: gradient of sum of squares is 2 theta") {
  ad::Tape tape;
  std::vector<ad::Var> th;
  std::vector<double> vals{0.5, -1.25, 2.0, 0.0};
  for (double v : vals) th.push_back(tape.leaf(v));
  ad::Var loss = ad::sqr(th[0]);
  for (std::size_t i = 1; i < th.size(); ++i) loss = loss + ad::sqr(th[i]);
  const auto g = tape.gradient(loss);
  for (std::size_t i = 0; i < vals.size(); ++i) CHECK(g[i] == doctest::Approx(2.0 * vals[i]));
}

TEST_CASE("tape: constant loss has zero gradient") {
  ad::Tape tape;
  auto a = tape.leaf(1.5);
  auto b = tape.leaf(-0.5);
  (void)b;
  auto loss = tape.constant(0.0) * a;
  auto g = tape.gradient(loss);
  CHECK(g[0] == 0.0);
  CHECK(g[1] == 0.0);
}

TEST_CASE("tape: replay reproduces the recorded value bit-for-bit") {
  Rng rng(11);
  ad::Tape tape;
  std::vector<ad::Var> leaves;
  for (int i = 0; i < 6; ++i) leaves.push_back(tape.leaf(rng.uniform(-2.0, 2.0)));
  ad::Var y = leaves[0];
  for (int step = 0; step < 50; ++step) {
    const auto& a = leaves[step % leaves.size()];
    y = ad::tanh(y * a + 0.1) + ad::sin(y) * 0.5 + ad::sqr(a) * 0.01;
  }
  const double v = tape.value(y);
  CHECK(tape.replay(y) == v);
}

TEST_CASE("tape: gradient is linear over independent subgraphs") {
  Rng rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    ad::Tape tf, tg, tsum;
    std::vector<double> vals;
    for (int i = 0; i < 4; ++i) vals.push_back(rng.uniform(-1.0, 1.0));
    auto build_f = [&](ad::Tape& t) {
      std::vector<ad::Var> ls;
      for (double v : vals) ls.push_back(t.leaf(v));
      return ad::sin(ls[0]) * ls[1] + ad::sqr(ls[2]) - ls[3] * 0.25;
    };
    auto build_g = [&](ad::Tape& t, bool fresh_leaves) {
      std::vector<ad::Var> ls;
      if (fresh_leaves)
        for (double v : vals) ls.push_back(t.leaf(v));
      else
        for (double v : vals) ls.push_back(t.leaf(v));
      return ad::tanh(ls[0] + ls[3]) + ls[1] * ls[2];
    };
    auto yf = build_f(tf);
    auto yg = build_g(tg, true);
    auto gf = tf.gradient(yf);
    auto gg = tg.gradient(yg);
    // same graphs recorded on one tape over shared leaves
    std::vector<ad::Var> ls;
    for (double v : vals) ls.push_back(tsum.leaf(v));
    auto yfs = ad::sin(ls[0]) * ls[1] + ad::sqr(ls[2]) - ls[3] * 0.25;
    auto ygs = ad::tanh(ls[0] + ls[3]) + ls[1] * ls[2];
    auto gsum = tsum.gradient(yfs + ygs);
    for (int i = 0; i < 4; ++i) CHECK(gsum[i] == doctest::Approx(gf[i] + gg[i]).epsilon(1e-15));
  }
}

TEST_CASE("tape: identical tape gives bit-identical gradients") {
  ad::Tape tape;
  auto a = tape.leaf(0.3);
  auto b = tape.leaf(-1.1);
  auto y = ad::exp(a * b) + ad::sin(a) / (b + 2.0);
  const auto g1 = tape.gradient(y);
  const auto g2 = tape.gradient(y);
  CHECK(g1 == g2);
}

TEST_CASE("tape: non-finite intermediate names the offending op") {
  ad::Tape tape;
  auto a = tape.leaf(-1.0);
  CHECK_THROWS_WITH_AS((void)ad::log(a), doctest::Contains("log"), ad::TapeError);
}

TEST_CASE("parameter gradient of a loss containing input derivatives") {
  // loss = (du/dx)^2 for a 1-hidden-layer tanh net at fixed x
  nn::NetworkSpec spec;
  spec.in_dim = 1;
  spec.out_dim = 1;
  spec.hidden = {5};
  nn::Network net = make_net(spec, 99);
  const double x = 0.37;

  ad::NetEval ev(net);
  ev.forward_jets(&x);
  const int nc = ad::jet_comps(1);
  const double ux = ev.out_jets()[1];
  std::vector<double> seed(nc, 0.0), grad(net.num_params(), 0.0);
  seed[1] = 2.0 * ux;  // d loss / d u_x
  ev.backward_jets(seed.data(), grad.data());

  auto loss_at = [&](const std::vector<double>& p) {
    nn::Network n2 = net;
    std::copy(p.begin(), p.end(), n2.params().begin());
    const auto jets = ad::forward_jet(n2, std::span<const double>(&x, 1));
    return jets[0].g[0] * jets[0].g[0];
  };
  const std::vector<double> p0(net.params().begin(), net.params().end());
  const auto fd = testutil::fd_grad(loss_at, p0, 1e-6);
  CHECK(testutil::rel_err(grad, fd) < 1e-6);
}

TEST_CASE("parameter gradients match finite differences for jet losses on random nets") {
  Rng cfg_rng(1234);
  for (int trial = 0; trial < 10; ++trial) {
    nn::NetworkSpec spec;
    spec.in_dim = 1 + static_cast<int>(cfg_rng.next_u64() % 3);
    spec.out_dim = 1 + static_cast<int>(cfg_rng.next_u64() % 2);
    spec.hidden = {4 + static_cast<int>(cfg_rng.next_u64() % 5), 4};
    nn::Network net = make_net(spec, 1000 + trial);
    const int d = spec.in_dim;
    const int nc = ad::jet_comps(d);
    std::vector<double> x(d);
    for (auto& xi : x) xi = cfg_rng.uniform(-1.0, 1.0);
    // quadratic loss over every jet component of every channel
    std::vector<double> w(static_cast<std::size_t>(spec.out_dim) * nc);
    for (auto& wi : w) wi = cfg_rng.uniform(-1.0, 1.0);

    ad::NetEval ev(net);
    ev.forward_jets(x.data());
    std::vector<double> seed(w.size()), grad(net.num_params(), 0.0);
    for (std::size_t i = 0; i < w.size(); ++i) seed[i] = 2.0 * w[i] * w[i] * ev.out_jets()[i];
    ev.backward_jets(seed.data(), grad.data());

    auto loss_at = [&](const std::vector<double>& p) {
      nn::Network n2 = net;
      std::copy(p.begin(), p.end(), n2.params().begin());
      ad::NetEval e2(n2);
      e2.forward_jets(x.data());
      double L = 0.0;
      for (std::size_t i = 0; i < w.size(); ++i)
        L += w[i] * w[i] * e2.out_jets()[i] * e2.out_jets()[i];
      return L;
    };
    const std::vector<double> p0(net.params().begin(), net.params().end());
    const auto fd = testutil::fd_grad(loss_at, p0, 1e-6);
    CHECK(testutil::rel_err(grad, fd) < 1e-6);
  }
}

TEST_CASE("value-path backward matches finite differences") {
  nn::NetworkSpec spec;
  spec.in_dim = 2;
  spec.out_dim = 2;
  spec.hidden = {6};
  spec.head = nn::Head::Sigmoid;
  nn::Network net = make_net(spec, 5);
  const std::vector<double> x{0.2, -0.4};
  ad::NetEval ev(net);
  ev.forward_value(x.data());
  std::vector<double> seed{1.0, -0.5}, grad(net.num_params(), 0.0);
  ev.backward_value(seed.data(), grad.data());
  auto loss_at = [&](const std::vector<double>& p) {
    nn::Network n2 = net;
    std::copy(p.begin(), p.end(), n2.params().begin());
    std::vector<double> out(2);
    n2.forward(x, out);
    return out[0] - 0.5 * out[1];
  };
  const std::vector<double> p0(net.params().begin(), net.params().end());
  const auto fd = testutil::fd_grad(loss_at, p0, 1e-6);
  CHECK(testutil::rel_err(grad, fd) < 1e-6);
}

TEST_CASE("fourier network jets match finite differences") {
  nn::NetworkSpec spec;
  spec.in_dim = 1;
  spec.out_dim = 1;
  spec.hidden = {10};
  spec.fourier = true;
  spec.fourier_m = 5;
  spec.fourier_sigma = 1.0;
  nn::Network net = make_net(spec, 17);
  const double x = 0.31;
  const auto jets = ad::forward_jet(net, std::span<const double>(&x, 1));
  const auto field = [&](const std::vector<long double>& q) -> long double {
    std::vector<double> in{static_cast<double>(q[0])};
    std::vector<double> out(1);
    net.forward(in, out);
    return out[0];
  };
  const Jet2 ref = testutil::fd_jet(field, {x});
  CHECK(jets[0].g[0] == doctest::Approx(ref.g[0]).epsilon(1e-6));
  CHECK(jets[0].h[0] == doctest::Approx(ref.h[0]).epsilon(1e-5));
}
