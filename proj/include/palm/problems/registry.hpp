#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "palm/problems/problem.hpp"

namespace palm::problems {

// Instantiates a benchmark by name with its parameters (wavenumbers, level,
// noise, window bounds, ...). The seed feeds stochastic problem data such as
// measurement noise. Throws std::invalid_argument for unknown names or
// unsupported parameters.
Problem make_problem(const std::string& name, const nlohmann::json& params, std::uint64_t seed);

std::vector<std::string> problem_names();

}  // namespace palm::problems
