#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace palm::ad {

// Packed upper-triangle index for a symmetric d x d matrix, row-major over
// pairs (i, j) with i <= j. d=2 -> [xx, xy, yy]; d=3 -> [xx,xy,xz,yy,yz,zz].
constexpr int hess_size(int d) { return d * (d + 1) / 2; }
constexpr int jet_comps(int d) { return 1 + d + hess_size(d); }

constexpr int sym_index(int d, int i, int j) {
  if (i > j) { const int t = i; i = j; j = t; }
  // offset of row i in the packed upper triangle
  return i * d - i * (i - 1) / 2 + (j - i);
}

// Second-order jet over up to three input variables: value, gradient and
// symmetric Hessian, propagated through arithmetic. A default-constructed or
// scalar-assigned jet is a constant (grad and hess exactly zero).
struct Jet2 {
  static constexpr int kMaxDim = 3;
  static constexpr int kMaxHess = hess_size(kMaxDim);

  int dim = 0;
  double v = 0.0;
  std::array<double, kMaxDim> g{};
  std::array<double, kMaxHess> h{};

  Jet2() = default;
  Jet2(int d, double value) : dim(d), v(value) {}

  static Jet2 constant(int d, double value) { return Jet2(d, value); }

  // The i-th input coordinate as a jet: unit gradient, zero Hessian.
  static Jet2 variable(int d, int i, double value) {
    Jet2 j(d, value);
    j.g[static_cast<std::size_t>(i)] = 1.0;
    return j;
  }

  double grad(int i) const { return g[static_cast<std::size_t>(i)]; }
  double hess(int i, int j) const { return h[static_cast<std::size_t>(sym_index(dim, i, j))]; }
};

inline Jet2 operator+(const Jet2& a, const Jet2& b) {
  Jet2 r = a;
  r.v += b.v;
  for (int i = 0; i < r.dim; ++i) r.g[i] += b.g[i];
  for (int k = 0; k < hess_size(r.dim); ++k) r.h[k] += b.h[k];
  return r;
}

inline Jet2 operator-(const Jet2& a, const Jet2& b) {
  Jet2 r = a;
  r.v -= b.v;
  for (int i = 0; i < r.dim; ++i) r.g[i] -= b.g[i];
  for (int k = 0; k < hess_size(r.dim); ++k) r.h[k] -= b.h[k];
  return r;
}

inline Jet2 operator-(const Jet2& a) {
  Jet2 r = a;
  r.v = -r.v;
  for (int i = 0; i < r.dim; ++i) r.g[i] = -r.g[i];
  for (int k = 0; k < hess_size(r.dim); ++k) r.h[k] = -r.h[k];
  return r;
}

inline Jet2 operator*(const Jet2& a, const Jet2& b) {
  Jet2 r(a.dim, a.v * b.v);
  for (int i = 0; i < r.dim; ++i) r.g[i] = a.g[i] * b.v + a.v * b.g[i];
  int k = 0;
  for (int i = 0; i < r.dim; ++i)
    for (int j = i; j < r.dim; ++j, ++k)
      r.h[k] = a.h[k] * b.v + a.g[i] * b.g[j] + a.g[j] * b.g[i] + a.v * b.h[k];
  return r;
}

inline Jet2 operator+(const Jet2& a, double c) { Jet2 r = a; r.v += c; return r; }
inline Jet2 operator+(double c, const Jet2& a) { return a + c; }
inline Jet2 operator-(const Jet2& a, double c) { Jet2 r = a; r.v -= c; return r; }
inline Jet2 operator-(double c, const Jet2& a) { return -(a - c); }

inline Jet2 operator*(const Jet2& a, double c) {
  Jet2 r = a;
  r.v *= c;
  for (int i = 0; i < r.dim; ++i) r.g[i] *= c;
  for (int k = 0; k < hess_size(r.dim); ++k) r.h[k] *= c;
  return r;
}
inline Jet2 operator*(double c, const Jet2& a) { return a * c; }
inline Jet2 operator/(const Jet2& a, double c) { return a * (1.0 / c); }

// Chain rule for a scalar function applied to a jet:
//   f(u): value f, gradient f' u_i, Hessian f'' u_i u_j + f' u_ij.
inline Jet2 apply_unary(const Jet2& a, double f, double f1, double f2) {
  Jet2 r(a.dim, f);
  for (int i = 0; i < r.dim; ++i) r.g[i] = f1 * a.g[i];
  int k = 0;
  for (int i = 0; i < r.dim; ++i)
    for (int j = i; j < r.dim; ++j, ++k)
      r.h[k] = f2 * a.g[i] * a.g[j] + f1 * a.h[k];
  return r;
}

inline Jet2 sin(const Jet2& a) { const double s = std::sin(a.v), c = std::cos(a.v); return apply_unary(a, s, c, -s); }
inline Jet2 cos(const Jet2& a) { const double s = std::sin(a.v), c = std::cos(a.v); return apply_unary(a, c, -s, -c); }
inline Jet2 exp(const Jet2& a) { const double e = std::exp(a.v); return apply_unary(a, e, e, e); }
inline Jet2 tanh(const Jet2& a) {
  const double t = std::tanh(a.v), s = 1.0 - t * t;
  return apply_unary(a, t, s, -2.0 * t * s);
}
inline Jet2 sigmoid(const Jet2& a) {
  const double p = 1.0 / (1.0 + std::exp(-a.v)), s = p * (1.0 - p);
  return apply_unary(a, p, s, s * (1.0 - 2.0 * p));
}
inline Jet2 log(const Jet2& a) { const double inv = 1.0 / a.v; return apply_unary(a, std::log(a.v), inv, -inv * inv); }
inline Jet2 sqrt(const Jet2& a) {
  const double s = std::sqrt(a.v);
  return apply_unary(a, s, 0.5 / s, -0.25 / (s * a.v));
}
inline Jet2 sqr(const Jet2& a) { return a * a; }

inline Jet2 operator/(const Jet2& a, const Jet2& b) {
  // a / b = a * (1/b)
  const double inv = 1.0 / b.v;
  return a * apply_unary(b, inv, -inv * inv, 2.0 * inv * inv * inv);
}

}  // namespace palm::ad
