#include "palm/train/evaluate.hpp"

#include <cassert>
#include <cstring>
#include <stdexcept>

#include "palm/ad/engine.hpp"
#include "palm/util/parallel.hpp"

namespace palm::train {

namespace {
constexpr std::size_t kChunk = 256;
}

std::vector<GroupSlice> constraint_slices(const problems::Problem& prob,
                                          const problems::SampleSet& samples, Aggregation agg) {
  std::vector<GroupSlice> slices;
  int off = 0;
  for (const auto& term : prob.terms) {
    if (term.objective) continue;
    const int n = agg == Aggregation::Expectation ? 1 : samples[term.batch].n;
    slices.push_back({term.label, off, n});
    off += n;
  }
  return slices;
}

alm::ConstrainedEval evaluate_problem(const nn::Network& net, const problems::Problem& prob,
                                      const problems::SampleSet& samples, Aggregation agg,
                                      alm::DistanceFn phi, const alm::EvalRequest& req) {
  const int d = prob.dim;
  const int nc = ad::jet_comps(d);
  const int channels = prob.channels;
  const std::size_t n_params = net.num_params();
  const bool want_grad = req.want_grad;
  const bool pointwise = agg == Aggregation::Pointwise;

  const auto slices = constraint_slices(prob, samples, agg);
  const Eigen::Index n_constraints = slices.empty() ? 0 : slices.back().offset + slices.back().size;

  alm::ConstrainedEval ev;
  ev.C = Eigen::VectorXd::Zero(n_constraints);
  ev.has_parts = !pointwise;
  if (want_grad) {
    if (pointwise) {
      ev.gradL = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_params));
      if (!req.lambda || !req.mu)
        throw std::invalid_argument("pointwise evaluation needs multipliers for the gradient");
    } else {
      ev.gradJ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_params));
      ev.gradC.assign(static_cast<std::size_t>(n_constraints),
                      Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_params)));
    }
  }

  // constraint index per term (objective terms get -1)
  std::vector<int> cindex(prob.terms.size(), -1);
  {
    int ci = 0;
    for (std::size_t t = 0; t < prob.terms.size(); ++t)
      if (!prob.terms[t].objective) cindex[t] = ci++;
  }

  double J_sum = 0.0;
  std::size_t J_count = 0;

  for (std::size_t b = 0; b < prob.batches.size(); ++b) {
    const auto& spec = prob.batches[b];
    const auto& batch = samples[b];
    if (batch.n == 0) continue;
    assert(!spec.has_extra || spec.needs_jets);

    std::vector<const problems::Term*> terms;
    std::vector<int> term_cindex;
    for (std::size_t t = 0; t < prob.terms.size(); ++t)
      if (static_cast<std::size_t>(prob.terms[t].batch) == b) {
        terms.push_back(&prob.terms[t]);
        term_cindex.push_back(cindex[t]);
      }
    if (terms.empty()) continue;

    const std::size_t nchunks = chunk_count(batch.n, kChunk);
    const std::size_t nterms = terms.size();
    // per-chunk partials: residual-phi sums per term, then gradients
    std::vector<double> sum_slab(nchunks * nterms, 0.0);
    std::vector<double> grad_slab;
    const std::size_t grad_cols = pointwise ? 1 : nterms;
    if (want_grad) grad_slab.assign(nchunks * grad_cols * n_params, 0.0);
    // pointwise per-point constraint values, written in place
    std::vector<double*> point_out(nterms, nullptr);
    if (pointwise)
      for (std::size_t t = 0; t < nterms; ++t)
        if (term_cindex[t] >= 0) point_out[t] = ev.C.data() + slices[term_cindex[t]].offset;

    parallel_chunks(batch.n, kChunk, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
      ad::NetEval ws(net);
      std::vector<double> seed(static_cast<std::size_t>(channels) * nc);
      std::vector<double> vseed(channels);
      std::vector<double> extra_x(d);
      double* sums = sum_slab.data() + chunk * nterms;
      double* grads = want_grad ? grad_slab.data() + chunk * grad_cols * n_params : nullptr;

      for (std::size_t p = begin; p < end; ++p) {
        const double* xp = batch.x.data() + p * d;
        double extra_val = 0.0;
        if (spec.needs_jets) {
          ws.forward_jets(xp);
          if (spec.has_extra) {
            std::memcpy(extra_x.data(), xp, static_cast<std::size_t>(d) * sizeof(double));
            extra_x[d - 1] = spec.extra_t_const;
            ws.forward_value(extra_x.data());
            extra_val = ws.out_values()[spec.extra_channel];
          }
        } else {
          ws.forward_value(xp);
        }

        for (std::size_t t = 0; t < nterms; ++t) {
          const problems::Term& term = *terms[t];
          double r;
          double seed_extra = 0.0;
          if (term.value_term) {
            const double v = spec.needs_jets
                                 ? ws.out_jets()[static_cast<std::size_t>(term.channel) * nc]
                                 : ws.out_values()[term.channel];
            r = v - batch.data[p * spec.data_width + term.data_offset];
          } else {
            std::memset(seed.data(), 0, seed.size() * sizeof(double));
            r = term.op->eval(xp, ws.out_jets(), d, batch.data.data() + p * spec.data_width,
                              extra_val, seed.data(), &seed_extra);
          }

          // the objective applies a squared distance; constraints apply phi
          const bool obj = term.objective;
          const double phi_r = obj ? r * r : alm::phi_value(phi, r);
          sums[t] += phi_r;
          if (pointwise && point_out[t]) point_out[t][p] = phi_r;

          if (!want_grad) continue;
          double scale;
          double* gtarget;
          if (pointwise) {
            gtarget = grads;  // everything lands in one combined gradient
            if (obj) {
              scale = 2.0 * r;
            } else {
              const Eigen::Index cpos = slices[term_cindex[t]].offset + static_cast<Eigen::Index>(p);
              scale = ((*req.lambda)[cpos] + (*req.mu)[cpos] * phi_r) * alm::phi_deriv(phi, r);
            }
          } else {
            gtarget = grads + t * n_params;
            scale = (obj ? 2.0 * r : alm::phi_deriv(phi, r)) / static_cast<double>(batch.n);
          }

          if (term.value_term) {
            std::fill(vseed.begin(), vseed.end(), 0.0);
            vseed[term.channel] = scale;
            if (spec.needs_jets) {
              std::memset(seed.data(), 0, seed.size() * sizeof(double));
              seed[static_cast<std::size_t>(term.channel) * nc] = scale;
              ws.backward_jets(seed.data(), gtarget);
            } else {
              ws.backward_value(vseed.data(), gtarget);
            }
          } else {
            for (double& s : seed) s *= scale;
            ws.backward_jets(seed.data(), gtarget);
            if (spec.has_extra && seed_extra != 0.0) {
              std::fill(vseed.begin(), vseed.end(), 0.0);
              vseed[spec.extra_channel] = scale * seed_extra;
              ws.backward_value(vseed.data(), gtarget);
            }
          }
        }
      }
    });

    // deterministic reduction in chunk order
    for (std::size_t t = 0; t < nterms; ++t) {
      double total = 0.0;
      for (std::size_t c = 0; c < nchunks; ++c) total += sum_slab[c * nterms + t];
      if (terms[t]->objective) {
        J_sum += total;
        J_count += static_cast<std::size_t>(batch.n);
      } else if (!pointwise) {
        ev.C[slices[term_cindex[t]].offset] = total / batch.n;
      }
    }
    if (want_grad) {
      for (std::size_t c = 0; c < nchunks; ++c) {
        for (std::size_t t = 0; t < grad_cols; ++t) {
          const double* src = grad_slab.data() + (c * grad_cols + t) * n_params;
          double* dst;
          if (pointwise)
            dst = ev.gradL.data();
          else if (terms[t]->objective)
            dst = ev.gradJ.data();
          else
            dst = ev.gradC[static_cast<std::size_t>(term_cindex[t])].data();
          for (std::size_t k = 0; k < n_params; ++k) dst[k] += src[k];
        }
      }
    }
  }

  // expectation mode takes the mean objective; pointwise keeps the plain sum
  ev.J = pointwise ? J_sum : (J_count ? J_sum / static_cast<double>(J_count) : 0.0);
  if (!pointwise && want_grad && J_count) {
    // per-batch gradients were already scaled by 1/N of their own batch
  }
  return ev;
}

std::vector<double> predict(const nn::Network& net, const double* x, std::size_t n, int channel) {
  const int d = net.spec().in_dim;
  std::vector<double> out(n);
  parallel_chunks(n, 1024, [&](std::size_t, std::size_t begin, std::size_t end) {
    ad::NetEval ws(net);
    for (std::size_t p = begin; p < end; ++p) {
      ws.forward_value(x + p * d);
      out[p] = ws.out_values()[channel];
    }
  });
  return out;
}

}  // namespace palm::train
