#include "rknq/problem.hpp"

#include <cmath>
#include <limits>
#include <utility>

namespace rknq {

namespace {

const double kFdStep = std::cbrt(std::numeric_limits<double>::epsilon());

Vec eval_checked(const FieldFn& g, double x, const Vec& y) {
    Vec v = g(x, y);
    if (!all_finite(v)) throw EvaluationError("evaluator returned non-finite values", x, y);
    return v;
}

}  // namespace

SecondOrderIVP make_second_order(int dim, AccelFn f, double x0, Vec y0, Vec y0prime,
                                 StateRefFn reference) {
    if (dim <= 0) throw std::invalid_argument("problem dimension must be positive");
    if (static_cast<int>(y0.size()) != dim || static_cast<int>(y0prime.size()) != dim)
        throw std::invalid_argument("initial state size does not match dimension");
    if (!f) throw std::invalid_argument("missing acceleration evaluator");

    SecondOrderIVP p;
    p.dim = dim;
    p.f = std::move(f);
    p.x0 = x0;
    p.y0 = std::move(y0);
    p.y0prime = std::move(y0prime);
    p.reference = std::move(reference);

    Vec a0 = p.f(p.x0, p.y0);
    if (static_cast<int>(a0.size()) != dim)
        throw std::invalid_argument("acceleration evaluator returned wrong dimension");
    if (!all_finite(a0))
        throw EvaluationError("acceleration non-finite at the initial state", p.x0, p.y0);

    if (p.reference) {
        auto [ry, ryp] = p.reference(p.x0);
        for (int j = 0; j < dim; ++j) {
            const double sy = std::max(1.0, std::abs(p.y0[j]));
            const double sv = std::max(1.0, std::abs(p.y0prime[j]));
            if (std::abs(ry[j] - p.y0[j]) > 1e-12 * sy ||
                std::abs(ryp[j] - p.y0prime[j]) > 1e-12 * sv)
                throw std::invalid_argument(
                    "reference solution disagrees with the initial state");
        }
    }
    return p;
}

Matrix fd_jacobian(const FieldFn& g, double x, const Vec& y, int dim) {
    Matrix jac(dim, dim);
    Vec yp = y, ym = y;
    for (int i = 0; i < dim; ++i) {
        const double d = kFdStep * std::max(1.0, std::abs(y[i]));
        yp[i] = y[i] + d;
        ym[i] = y[i] - d;
        const Vec gp = eval_checked(g, x, yp);
        const Vec gm = eval_checked(g, x, ym);
        for (int j = 0; j < dim; ++j) jac.at(j, i) = (gp[j] - gm[j]) / (2.0 * d);
        yp[i] = y[i];
        ym[i] = y[i];
    }
    return jac;
}

FirstOrderIVP make_first_order(int dim, FieldFn g, double x0, Vec y0, JacobianFn jacobian,
                               ValueRefFn reference, bool autonomous) {
    if (dim <= 0) throw std::invalid_argument("problem dimension must be positive");
    if (static_cast<int>(y0.size()) != dim)
        throw std::invalid_argument("initial state size does not match dimension");
    if (!g) throw std::invalid_argument("missing field evaluator");

    FirstOrderIVP p;
    p.dim = dim;
    p.g = std::move(g);
    p.jacobian = std::move(jacobian);
    p.x0 = x0;
    p.y0 = std::move(y0);
    p.reference = std::move(reference);
    p.autonomous = autonomous;

    Vec g0 = eval_checked(p.g, p.x0, p.y0);
    if (static_cast<int>(g0.size()) != dim)
        throw std::invalid_argument("field evaluator returned wrong dimension");

    if (p.jacobian) {
        const Matrix ja = p.jacobian(p.x0, p.y0);
        const Matrix jf = fd_jacobian(p.g, p.x0, p.y0, dim);
        double res = 0.0;
        for (int r = 0; r < dim; ++r)
            for (int c = 0; c < dim; ++c) res = std::max(res, std::abs(ja.at(r, c) - jf.at(r, c)));
        if (res > 1e-6)
            throw std::invalid_argument(
                "analytic Jacobian disagrees with finite differences at the initial state");
    }
    return p;
}

SecondOrderIVP transform(const FirstOrderIVP& p) {
    const int n = p.dim;
    const FieldFn g = p.g;
    const JacobianFn jac = p.jacobian;
    const bool autonomous = p.autonomous;

    AccelFn f = [g, jac, autonomous, n](double x, const Vec& y) -> Vec {
        const Vec gy = eval_checked(g, x, y);
        const Matrix j = jac ? jac(x, y) : fd_jacobian(g, x, y, n);
        if (!all_finite(j.data)) throw EvaluationError("Jacobian non-finite", x, y);
        Vec acc = j.apply(gy);
        if (!autonomous) {
            // add d g_j / d x by central differences
            const double d = kFdStep * std::max(1.0, std::abs(x));
            const Vec gp = eval_checked(g, x + d, y);
            const Vec gm = eval_checked(g, x - d, y);
            for (int k = 0; k < n; ++k) acc[k] += (gp[k] - gm[k]) / (2.0 * d);
        }
        return acc;
    };

    StateRefFn ref2;
    if (p.reference) {
        const ValueRefFn ref1 = p.reference;
        ref2 = [ref1, g](double x) {
            Vec y = ref1(x);
            Vec yp = g(x, y);
            return std::make_pair(std::move(y), std::move(yp));
        };
    }

    Vec y0prime = eval_checked(g, p.x0, p.y0);
    return make_second_order(n, std::move(f), p.x0, p.y0, std::move(y0prime), std::move(ref2));
}

}  // namespace rknq
