#include "palm/io/refgrid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <stdexcept>

namespace palm::io {

double RefGrid::bilinear(double x, double y) const {
  const double fx = (x - x0) / (x1 - x0) * (nx - 1);
  const double fy = (y - y0) / (y1 - y0) * (ny - 1);
  const int ix = std::clamp(static_cast<int>(std::floor(fx)), 0, nx - 2);
  const int iy = std::clamp(static_cast<int>(std::floor(fy)), 0, ny - 2);
  const double tx = std::clamp(fx - ix, 0.0, 1.0);
  const double ty = std::clamp(fy - iy, 0.0, 1.0);
  return (1 - tx) * (1 - ty) * at(ix, iy) + tx * (1 - ty) * at(ix + 1, iy) +
         (1 - tx) * ty * at(ix, iy + 1) + tx * ty * at(ix + 1, iy + 1);
}

std::vector<double> RefGrid::on_eval_grid(const problems::Problem& prob) const {
  std::size_t n = 0;
  const std::vector<double> pts = problems::make_grid(prob, prob.eval_grid, n);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = bilinear(pts[2 * i], pts[2 * i + 1]);
  return out;
}

void RefGrid::save(const std::string& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write reference grid: " + path);
  const std::int32_t dims[2] = {nx, ny};
  f.write(reinterpret_cast<const char*>(dims), sizeof(dims));
  const double bounds[4] = {x0, x1, y0, y1};
  f.write(reinterpret_cast<const char*>(bounds), sizeof(bounds));
  f.write(reinterpret_cast<const char*>(values.data()),
          static_cast<std::streamsize>(values.size() * sizeof(double)));
}

RefGrid RefGrid::load(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open reference grid: " + path);
  RefGrid g;
  std::int32_t dims[2];
  f.read(reinterpret_cast<char*>(dims), sizeof(dims));
  g.nx = dims[0];
  g.ny = dims[1];
  double bounds[4];
  f.read(reinterpret_cast<char*>(bounds), sizeof(bounds));
  g.x0 = bounds[0];
  g.x1 = bounds[1];
  g.y0 = bounds[2];
  g.y1 = bounds[3];
  if (g.nx <= 1 || g.ny <= 1 || g.nx > 1 << 16 || g.ny > 1 << 16)
    throw std::runtime_error("implausible reference grid header: " + path);
  g.values.resize(static_cast<std::size_t>(g.nx) * g.ny);
  f.read(reinterpret_cast<char*>(g.values.data()),
         static_cast<std::streamsize>(g.values.size() * sizeof(double)));
  if (!f) throw std::runtime_error("truncated reference grid: " + path);
  return g;
}

}  // namespace palm::io
