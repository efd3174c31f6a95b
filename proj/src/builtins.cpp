#include "rknq/builtins.hpp"

#include <cmath>

#include "rknq/problem.hpp"

namespace rknq {

namespace {

BuiltinProblem make_exp1000() {
    // y' = (ln 1000 / 100) y reaches y(100) = 1000 from y(0) = 1
    const double lam = std::log(1000.0) / 100.0;

    FirstOrderIVP first = make_first_order(
        1, [lam](double, const Vec& y) -> Vec { return {lam * y[0]}; }, 0.0, Vec{1.0},
        [lam](double, const Vec&) -> Matrix {
            Matrix j(1, 1);
            j.at(0, 0) = lam;
            return j;
        },
        [lam](double x) -> Vec { return {std::exp(lam * x)}; });

    BuiltinProblem b;
    b.name = "exp1000";
    b.second_order = transform(first);
    b.first_order = std::move(first);
    b.norm = NormRule::absolute;
    b.default_x_end = 100.0;
    return b;
}

BuiltinProblem make_sho() {
    FirstOrderIVP first = make_first_order(
        2, [](double, const Vec& y) -> Vec { return {y[1], -y[0]}; }, 0.0, Vec{0.0, 1000.0},
        [](double, const Vec&) -> Matrix {
            Matrix j(2, 2);
            j.at(0, 1) = 1.0;
            j.at(1, 0) = -1.0;
            return j;
        },
        [](double x) -> Vec { return {1000.0 * std::sin(x), 1000.0 * std::cos(x)}; });

    BuiltinProblem b;
    b.name = "sho";
    b.second_order = transform(first);
    b.first_order = std::move(first);
    b.norm = NormRule::mixed;
    b.default_x_end = 200.0;
    return b;
}

}  // namespace

const BuiltinProblem& builtin_problem(std::string_view name) {
    static const BuiltinProblem exp1000 = make_exp1000();
    static const BuiltinProblem sho = make_sho();
    if (name == "exp1000") return exp1000;
    if (name == "sho") return sho;
    throw UnknownNameError("unknown built-in problem: " + std::string(name));
}

std::vector<std::string> builtin_problem_names() { return {"exp1000", "sho"}; }

}  // namespace rknq
