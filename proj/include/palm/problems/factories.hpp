#pragma once

#include <optional>
#include <vector>

#include "palm/problems/problem.hpp"

namespace palm::problems {

// Heat conduction across a two-material interface at x = 0, first-order
// system in (u, q) with a flux constraint.
Problem make_composite_heat();

// Transonic rarefaction of the inviscid Burgers equation.
Problem make_burgers();

// 1-D Poisson with a two-scale solution; b is the high wavenumber.
Problem make_poisson1d(int b);

// 2-D Helmholtz with the separable sine solution (wavenumbers a1, a2, k = 1).
Problem make_helmholtz_sine(int a1, int a2);

// 2-D Helmholtz with a localized Gaussian source; complexity grows with level.
// Levels >= 6 are refused (no trustworthy reference solution exists).
Problem make_helmholtz_gaussian(int level);
double helmholtz_gaussian_wavenumber(int level);
double helmholtz_gaussian_sigma(int level);

struct VortexParams {
  double period = 8.0;       // full flow-reversal period T
  double t_begin = 0.0;
  double t_end = 0.2;
  int nx = 65, ny = 65, nt = 11;
  // initial-condition targets on the spatial grid (row-major, x fastest);
  // empty means the sharp indicator circle at t = 0
  std::vector<double> ic_values;
};

// Passive-scalar advection by the reversing vortex on one time window.
Problem make_vortex(const VortexParams& p);
// Spatial grid shared by the initial-condition batch and window handoffs.
std::vector<double> vortex_spatial_grid(int nx, int ny);
// Sharp indicator of the initial dye circle.
double vortex_indicator(double x, double y);
// Analytic velocity components of the stream function at (x, y, t).
void vortex_velocity(double x, double y, double t, double period, double& u, double& v);

// Inverse recovery of a space-wise heat source from final-time measurements.
Problem make_inverse_heat_source(double noise_level, std::uint64_t noise_seed);
double inverse_heat_exact_source(double x);

}  // namespace palm::problems
