#include "rknq/stepper.hpp"

#include <cmath>
#include <string>

namespace rknq {

namespace {

// F and the velocity weight sum share the stage set; ascending stage
// order keeps results deterministic.
Vec weighted_stage_sum(const StageSet& stages, const std::vector<double>& weights, int dim) {
    Vec s(static_cast<std::size_t>(dim), 0.0);
    for (int p = 0; p < static_cast<int>(weights.size()); ++p) {
        const double wgt = weights[static_cast<std::size_t>(p)];
        if (wgt == 0.0) continue;
        for (int j = 0; j < dim; ++j) s[j] += wgt * stages.k.at(p, j);
    }
    return s;
}

void require_step_inputs(const SecondOrderIVP& p, const StepState& s, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("stepsize must be positive");
    if (static_cast<int>(s.pos.size()) != p.dim || static_cast<int>(s.vel.size()) != p.dim)
        throw std::invalid_argument("state size does not match problem dimension");
}

}  // namespace

StageSet compute_stages(const NystromTableau& t, const SecondOrderIVP& p, const StepState& s,
                        double h) {
    require_step_inputs(p, s, h);
    const int m = t.stages;
    const int n = p.dim;

    StageSet stages{Matrix(m, n)};
    Vec arg(static_cast<std::size_t>(n));
    for (int q = 0; q < m; ++q) {
        const double ch = t.c[q] * h;
        for (int j = 0; j < n; ++j) {
            double acc = 0.0;
            for (int r = 0; r < q; ++r) {
                const double a = t.a.at(q, r);
                if (a != 0.0) acc += a * stages.k.at(r, j);
            }
            arg[j] = s.pos[j] + ch * s.vel[j] + h * h * acc;
        }
        const Vec k = p.f(s.x + ch, arg);
        if (static_cast<int>(k.size()) != n || !all_finite(k))
            throw EvaluationError("non-finite acceleration at stage " + std::to_string(q + 1),
                                  s.x + ch, arg, q);
        for (int j = 0; j < n; ++j) stages.k.at(q, j) = k[j];
    }
    return stages;
}

StepState step(const NystromTableau& t, const SecondOrderIVP& p, const StepState& s, double h) {
    const StageSet stages = compute_stages(t, p, s, h);
    const Vec sb = weighted_stage_sum(stages, t.b, p.dim);
    const Vec sbh = weighted_stage_sum(stages, t.bhat, p.dim);

    StepState out;
    out.x = s.x + h;
    out.pos.resize(s.pos.size());
    out.vel.resize(s.vel.size());
    for (int j = 0; j < p.dim; ++j) {
        // position = pos + h * F, the same expression eval_increment exposes
        out.pos[j] = s.pos[j] + h * (s.vel[j] + h * sb[j]);
        out.vel[j] = s.vel[j] + h * sbh[j];
    }
    return out;
}

Vec eval_increment(const NystromTableau& t, const SecondOrderIVP& p, const StepState& s,
                   double h) {
    const StageSet stages = compute_stages(t, p, s, h);
    Vec f = weighted_stage_sum(stages, t.b, p.dim);
    for (int j = 0; j < p.dim; ++j) f[j] = s.vel[j] + h * f[j];
    return f;
}

}  // namespace rknq
