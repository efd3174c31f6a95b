#pragma once

#include <string_view>
#include <vector>

#include "rknq/controller.hpp"
#include "rknq/problem.hpp"

namespace rknq {

/// A named benchmark problem in both first-order and transformed
/// second-order form, with analytic reference and its natural error norm.
struct BuiltinProblem {
    std::string name;
    FirstOrderIVP first_order;
    SecondOrderIVP second_order;  ///< transform(first_order)
    NormRule norm = NormRule::mixed;
    double default_x_end = 0.0;
};

/// Registered problems:
///   "exp1000": scalar y' = (ln 1000 / 100) y, y(0) = 1, absolute norm,
///              default interval [0, 100];
///   "sho":     y1' = y2, y2' = -y1, y(0) = (0, 1000), mixed norm,
///              default interval [0, 200].
/// Throws UnknownNameError otherwise.
const BuiltinProblem& builtin_problem(std::string_view name);

std::vector<std::string> builtin_problem_names();

}  // namespace rknq
