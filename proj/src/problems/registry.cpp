#include "palm/problems/registry.hpp"

#include <stdexcept>

#include "palm/problems/factories.hpp"

namespace palm::problems {

Problem make_problem(const std::string& name, const nlohmann::json& params, std::uint64_t seed) {
  if (name == "composite-heat") return make_composite_heat();
  if (name == "burgers") return make_burgers();
  if (name == "poisson1d") return make_poisson1d(params.value("b", 8));
  if (name == "helmholtz-sine")
    return make_helmholtz_sine(params.value("a1", 1), params.value("a2", 4));
  if (name == "helmholtz-gaussian") return make_helmholtz_gaussian(params.value("L", 4));
  if (name == "vortex") {
    VortexParams vp;
    vp.period = params.value("period", 8.0);
    vp.t_begin = params.value("t_begin", 0.0);
    vp.t_end = params.value("t_end", vp.period);
    vp.nx = params.value("nx", 65);
    vp.ny = params.value("ny", 65);
    vp.nt = params.value("nt", 11);
    return make_vortex(vp);
  }
  if (name == "inverse-heat-source")
    return make_inverse_heat_source(params.value("noise", 0.0), seed);
  throw std::invalid_argument("unknown problem: " + name);
}

std::vector<std::string> problem_names() {
  return {"composite-heat", "burgers",  "poisson1d",          "helmholtz-sine",
          "helmholtz-gaussian", "vortex", "inverse-heat-source"};
}

}  // namespace palm::problems
