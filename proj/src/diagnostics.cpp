#include "rknq/diagnostics.hpp"

#include <cmath>
#include <limits>

namespace rknq {

namespace {
const double kFdStep = std::cbrt(std::numeric_limits<double>::epsilon());
constexpr double kRoundoffFloor = 1e-13;
}  // namespace

Matrix propagation_matrix(const NystromTableau& t, const SecondOrderIVP& p, const StepState& s,
                          double h) {
    const int n = p.dim;
    Matrix alpha = Matrix::identity(n);
    StepState sp = s, sm = s;
    for (int j = 0; j < n; ++j) {
        const double d = kFdStep * std::max(1.0, std::abs(s.pos[j]));
        sp.pos[j] = s.pos[j] + d;
        sm.pos[j] = s.pos[j] - d;
        const Vec fp = eval_increment(t, p, sp, h);
        const Vec fm = eval_increment(t, p, sm, h);
        for (int i = 0; i < n; ++i) alpha.at(i, j) += h * (fp[i] - fm[i]) / (2.0 * d);
        sp.pos[j] = s.pos[j];
        sm.pos[j] = s.pos[j];
    }
    return alpha;
}

std::vector<PropagationRecord> verify_recurrence(const NystromTableau& t, const SecondOrderIVP& p,
                                                 double h, double x_end) {
    if (!p.reference)
        throw std::invalid_argument("recurrence verification needs a reference solution");
    if (!(h > 0.0) || !(x_end > p.x0)) throw std::invalid_argument("bad fixed-step range");

    const long n_steps = std::lround((x_end - p.x0) / h);
    const int n = p.dim;

    std::vector<PropagationRecord> records;
    records.reserve(static_cast<std::size_t>(n_steps));

    StepState chain{p.x0, p.y0, p.y0prime};
    Vec delta(static_cast<std::size_t>(n), 0.0);  // exact start

    for (long i = 0; i < n_steps; ++i) {
        const auto [y_exact, yp_exact] = p.reference(chain.x);

        // exact position, chain velocity as the internal parameter
        const StepState anchored{chain.x, y_exact, chain.vel};
        const StepState from_exact = step(t, p, anchored, h);
        const Matrix alpha = propagation_matrix(t, p, anchored, h);

        chain = step(t, p, chain, h);

        const auto [y_next, yp_next] = p.reference(chain.x);
        PropagationRecord rec;
        rec.node = i + 1;
        rec.x = chain.x;
        rec.alpha = alpha;
        rec.eps_local.resize(static_cast<std::size_t>(n));
        rec.delta_global.resize(static_cast<std::size_t>(n));
        rec.residual.resize(static_cast<std::size_t>(n));
        const Vec propagated = alpha.apply(delta);
        for (int j = 0; j < n; ++j) {
            rec.eps_local[j] = from_exact.pos[j] - y_next[j];
            rec.delta_global[j] = chain.pos[j] - y_next[j];
            rec.residual[j] = rec.delta_global[j] - rec.eps_local[j] - propagated[j];
        }
        delta = rec.delta_global;
        records.push_back(std::move(rec));
    }
    return records;
}

ConvergenceStudy observed_order(const NystromTableau& t, const SecondOrderIVP& p,
                                std::span<const double> h_list, double x_end) {
    if (!p.reference) throw std::invalid_argument("convergence study needs a reference solution");
    if (h_list.size() < 2) throw std::invalid_argument("convergence study needs at least two h");

    ConvergenceStudy study;
    for (double h : h_list) {
        const Trajectory tr = integrate_fixed(t, p, h, x_end);
        const StepState& end = tr.nodes.back().state;
        const auto [y_ref, yp_ref] = p.reference(end.x);
        double err = 0.0, magnitude = 1.0;
        for (int j = 0; j < p.dim; ++j) {
            err = std::max(err, std::abs(end.pos[j] - y_ref[j]));
            magnitude = std::max(magnitude, std::abs(y_ref[j]));
        }
        err /= magnitude;
        study.samples.push_back({h, err, err < kRoundoffFloor});
    }
    for (std::size_t i = 0; i + 1 < study.samples.size(); ++i) {
        const OrderSample& coarse = study.samples[i];
        const OrderSample& fine = study.samples[i + 1];
        if (!(fine.h < coarse.h)) throw std::invalid_argument("h list must descend");
        OrderSlope s;
        s.h_coarse = coarse.h;
        s.h_fine = fine.h;
        s.valid = !coarse.at_floor && !fine.at_floor;
        // reduces to log2(e(2h)/e(h)) for halving lists
        s.slope = s.valid ? std::log(coarse.err / fine.err) / std::log(coarse.h / fine.h) : 0.0;
        study.slopes.push_back(s);
    }
    return study;
}

}  // namespace rknq
