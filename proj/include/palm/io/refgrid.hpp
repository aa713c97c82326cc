#pragma once

#include <string>
#include <vector>

#include "palm/problems/problem.hpp"

namespace palm::io {

// Reference solution on a uniform 2-D grid.
//
// File layout (little-endian):
//   int32 nx, int32 ny,
//   float64 x0, x1, y0, y1,
//   float64 values[ny][nx]   (x fastest)
struct RefGrid {
  int nx = 0, ny = 0;
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  std::vector<double> values;  // values[iy * nx + ix]

  double at(int ix, int iy) const { return values[static_cast<std::size_t>(iy) * nx + ix]; }
  double bilinear(double x, double y) const;

  // Values re-ordered to match the points of make_grid(problem, grid).
  std::vector<double> on_eval_grid(const problems::Problem& prob) const;

  void save(const std::string& path) const;
  static RefGrid load(const std::string& path);
};

}  // namespace palm::io
