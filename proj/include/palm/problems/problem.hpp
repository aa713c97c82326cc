#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "palm/ad/jet.hpp"
#include "palm/util/rng.hpp"

namespace palm::problems {

struct SamplingPlan {
  enum class Mode { UniformMesh, FixedRandom, ResamplePerEpoch };
  Mode mode = Mode::UniformMesh;
  std::vector<int> mesh;            // points per axis, endpoints included
  int n_interior = 0;               // random modes
  int n_boundary = 0;               // per boundary face
  int n_initial = 0;
  std::uint64_t seed = 0;
};

// k equispaced points on [a, b] including both endpoints.
std::vector<double> mesh_axis(double a, double b, int k);

// Read access to one channel's jet components at a point.
struct JetRef {
  const double* p;
  int d;
  double v() const { return p[0]; }
  double g(int i) const { return p[1 + i]; }
  double h(int i, int j) const { return p[1 + d + ad::sym_index(d, i, j)]; }
};

// Accumulates d(residual)/d(jet component).
struct SeedRef {
  double* p;
  int d;
  void v(double w) const { p[0] += w; }
  void g(int i, double w) const { p[1 + i] += w; }
  void h(int i, int j, double w) const { p[1 + d + ad::sym_index(d, i, j)] += w; }
};

// A differential residual evaluated from the network output jets at a point.
// Writes d r / d jets into seed (pre-zeroed, one block of jet_comps(d) per
// channel) and, when the batch carries a pinned-input pass, d r / d extra
// into *seed_extra.
class ResidualOp {
 public:
  virtual ~ResidualOp() = default;
  virtual double eval(const double* x, const double* jets, int d, const double* data,
                      double extra_val, double* seed, double* seed_extra) const = 0;
};

struct Term {
  std::string label;        // J, B, I, Q, F
  bool objective = false;
  int batch = 0;            // index into batches
  // value term: residual = out[channel] - data[data_offset]
  bool value_term = false;
  int channel = 0;
  int data_offset = 0;
  std::shared_ptr<const ResidualOp> op;  // operator term
};

struct BatchSpec {
  bool needs_jets = false;
  int data_width = 0;
  // optional second, value-only network pass with the last input pinned
  bool has_extra = false;
  double extra_t_const = 0.0;
  int extra_channel = 1;
};

struct Batch {
  int n = 0;
  std::vector<double> x;      // n * dim
  std::vector<double> data;   // n * data_width
};
using SampleSet = std::vector<Batch>;

struct EvalGrid {
  std::vector<int> shape;     // points per axis
  bool cell_centered = false; // cell centres instead of mesh nodes
};

// A benchmark definition: domain, terms (one objective plus the ordered
// constraints), a sampler, and the exact solution when one exists.
struct Problem {
  std::string name;
  int dim = 1;
  int channels = 1;
  std::vector<double> lo, hi;

  std::vector<BatchSpec> batches;
  std::vector<Term> terms;

  // fills samples (aligned with batches) for the given plan and epoch
  std::function<void(const SamplingPlan&, long epoch, SampleSet&)> sample;

  bool has_exact = false;
  std::function<double(const double* x, int ch)> exact;
  // points excluded from error norms for a channel (e.g. a material interface)
  std::function<bool(const double* x, int ch)> eval_mask;

  EvalGrid eval_grid;
  int aux_channel = -1;  // second channel reported in error norms, if any

  SamplingPlan default_plan;

  int n_constraints() const {
    int n = 0;
    for (const auto& t : terms) n += t.objective ? 0 : 1;
    return n;
  }
};

// Tensor-product evaluation grid over the problem domain; returns n x dim
// coordinates, row-major with the last axis fastest.
std::vector<double> make_grid(const Problem& p, const EvalGrid& g, std::size_t& n_out);

}  // namespace palm::problems
