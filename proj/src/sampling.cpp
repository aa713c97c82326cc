#include "palm/problems/problem.hpp"

namespace palm::problems {

std::vector<double> mesh_axis(double a, double b, int k) {
  std::vector<double> v(k);
  if (k == 1) {
    v[0] = a;
    return v;
  }
  for (int i = 0; i < k; ++i) v[i] = a + (b - a) * static_cast<double>(i) / (k - 1);
  return v;
}

std::vector<double> make_grid(const Problem& p, const EvalGrid& g, std::size_t& n_out) {
  const int d = p.dim;
  std::vector<std::vector<double>> axes(d);
  for (int i = 0; i < d; ++i) {
    const int k = g.shape[i];
    if (g.cell_centered) {
      axes[i].resize(k);
      const double h = (p.hi[i] - p.lo[i]) / k;
      for (int j = 0; j < k; ++j) axes[i][j] = p.lo[i] + (j + 0.5) * h;
    } else {
      axes[i] = mesh_axis(p.lo[i], p.hi[i], k);
    }
  }
  std::size_t n = 1;
  for (int i = 0; i < d; ++i) n *= axes[i].size();
  std::vector<double> pts(n * d);
  std::vector<std::size_t> idx(d, 0);
  for (std::size_t r = 0; r < n; ++r) {
    for (int i = 0; i < d; ++i) pts[r * d + i] = axes[i][idx[i]];
    for (int i = d - 1; i >= 0; --i) {
      if (++idx[i] < axes[i].size()) break;
      idx[i] = 0;
    }
  }
  n_out = n;
  return pts;
}

}  // namespace palm::problems
