#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "palm/ad/jet.hpp"

namespace testutil {

// relative discrepancy between two vectors, normalised by the reference norm
inline double rel_err(const std::vector<double>& got, const std::vector<double>& ref) {
  double d2 = 0.0, r2 = 0.0;
  for (std::size_t i = 0; i < got.size(); ++i) {
    d2 += (got[i] - ref[i]) * (got[i] - ref[i]);
    r2 += ref[i] * ref[i];
  }
  return std::sqrt(d2) / (std::sqrt(r2) + 1e-12);
}

// central difference gradient of a scalar function of n variables
inline std::vector<double> fd_grad(const std::function<double(const std::vector<double>&)>& f,
                                   std::vector<double> x, double h) {
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    x[i] = xi + h;
    const double fp = f(x);
    x[i] = xi - h;
    const double fm = f(x);
    x[i] = xi;
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

// Fourth-order central-difference jet of a closed-form scalar field,
// evaluated in long double so that second derivatives of high-frequency
// solutions stay accurate to ~1e-8.
using FieldFn = std::function<long double(const std::vector<long double>&)>;

inline palm::ad::Jet2 fd_jet(const FieldFn& f, const std::vector<double>& x,
                             double h1 = 1e-4, double h2 = 4e-5) {
  const int d = static_cast<int>(x.size());
  std::vector<long double> p(x.begin(), x.end());
  palm::ad::Jet2 j(d, static_cast<double>(f(p)));

  auto at = [&](int i, long double di, int k = -1, long double dk = 0.0L) {
    std::vector<long double> q = p;
    q[i] += di;
    if (k >= 0) q[k] += dk;
    return f(q);
  };

  for (int i = 0; i < d; ++i) {
    const long double h = h1;
    j.g[i] = static_cast<double>(
        (-at(i, 2 * h) + 8 * at(i, h) - 8 * at(i, -h) + at(i, -2 * h)) / (12 * h));
  }
  for (int i = 0; i < d; ++i) {
    const long double h = h2;
    const long double f0 = f(p);
    // diagonal: 4th-order second difference
    const long double dii = (-at(i, 2 * h) + 16 * at(i, h) - 30 * f0 + 16 * at(i, -h) -
                             at(i, -2 * h)) /
                            (12 * h * h);
    j.h[palm::ad::sym_index(d, i, i)] = static_cast<double>(dii);
    for (int k = i + 1; k < d; ++k) {
      // mixed: 2nd-order cross stencil on first-derivative differences
      const long double dik =
          (at(i, h, k, h) - at(i, h, k, -h) - at(i, -h, k, h) + at(i, -h, k, -h)) /
          (4 * h * h);
      j.h[palm::ad::sym_index(d, i, k)] = static_cast<double>(dik);
    }
  }
  return j;
}

}  // namespace testutil
