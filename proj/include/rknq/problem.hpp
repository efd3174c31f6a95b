#pragma once

#include <functional>
#include <utility>

#include "rknq/types.hpp"

namespace rknq {

/// Right-hand sides must be pure functions of their arguments; problem
/// definitions are immutable once built.
using AccelFn = std::function<Vec(double x, const Vec& y)>;
using FieldFn = std::function<Vec(double x, const Vec& y)>;
/// Jacobian entry (j, i) is d g_j / d y_i.
using JacobianFn = std::function<Matrix(double x, const Vec& y)>;
/// Analytic solution of a second-order problem: x -> (y, y').
using StateRefFn = std::function<std::pair<Vec, Vec>(double x)>;
/// Analytic solution of a first-order problem: x -> y.
using ValueRefFn = std::function<Vec(double x)>;

/// The problem y'' = f(x, y), y(x0) = y0, y'(x0) = y0prime.
/// f must not depend on y'.
struct SecondOrderIVP {
    int dim = 0;
    AccelFn f;
    double x0 = 0.0;
    Vec y0;
    Vec y0prime;
    StateRefFn reference;  ///< null when no analytic solution is known
    /// When true, non-finite f values inside an adaptive step reject the
    /// attempt instead of aborting the integration.
    bool nonfinite_recoverable = false;
};

/// The problem y' = g(x, y), y(x0) = y0, input to transform().
struct FirstOrderIVP {
    int dim = 0;
    FieldFn g;
    JacobianFn jacobian;  ///< optional analytic d g_j / d y_i
    double x0 = 0.0;
    Vec y0;
    ValueRefFn reference;    ///< null when unknown
    bool autonomous = true;  ///< set false when g depends explicitly on x
};

/// Checks construction invariants (f finite at (x0, y0), reference
/// consistent with the initial state within 1e-12 relative) and throws
/// std::invalid_argument / EvaluationError on violation.
SecondOrderIVP make_second_order(int dim, AccelFn f, double x0, Vec y0, Vec y0prime,
                                 StateRefFn reference = nullptr);

/// Checks g finite at (x0, y0) and, when an analytic Jacobian is given,
/// that it agrees with fd_jacobian at (x0, y0) within 1e-6 max-norm.
FirstOrderIVP make_first_order(int dim, FieldFn g, double x0, Vec y0,
                               JacobianFn jacobian = nullptr, ValueRefFn reference = nullptr,
                               bool autonomous = true);

/// Central-difference Jacobian of g at (x, y); column i perturbs y_i by
/// eps^(1/3) * max(1, |y_i|).
Matrix fd_jacobian(const FieldFn& g, double x, const Vec& y, int dim);

/// Rewrites y' = g(x, y) as y'' = f(x, y) with
///   f_j = sum_i (d g_j / d y_i) g_i        (+ d g_j / d x when non-autonomous)
///   y0' = g(x0, y0).
/// Uses the analytic Jacobian when present, finite differences otherwise.
/// A first-order reference solution is lifted to (y, g(x, y)).
SecondOrderIVP transform(const FirstOrderIVP& p);

}  // namespace rknq
