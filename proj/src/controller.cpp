#include "rknq/controller.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "drive.hpp"

namespace rknq {

namespace {
constexpr double kSafety = 0.9;
constexpr double kGrowMin = 0.2;
constexpr double kGrowMax = 5.0;
constexpr double kExponent = 0.2;  // order-4 local error is O(h^5)
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

SecondOrderIVP with_eval_counter(const SecondOrderIVP& p, long& counter) {
    SecondOrderIVP counted = p;
    counted.f = [&counter, f = p.f](double x, const Vec& y) {
        ++counter;
        return f(x, y);
    };
    return counted;
}
}  // namespace

double scaled_norm(std::span<const double> delta, std::span<const double> wref) {
    double m = 0.0;
    for (std::size_t j = 0; j < delta.size(); ++j)
        m = std::max(m, std::abs(delta[j]) / std::max(1.0, std::abs(wref[j])));
    return m;
}

double error_norm(NormRule rule, std::span<const double> delta, std::span<const double> wref) {
    if (rule == NormRule::mixed) return scaled_norm(delta, wref);
    double m = 0.0;
    for (double d : delta) m = std::max(m, std::abs(d));
    return m;
}

double propose_stepsize(double h, double err_local, double tol_local) {
    if (err_local == 0.0) return h * kGrowMax;
    const double factor = kSafety * std::pow(tol_local / err_local, kExponent);
    return h * std::clamp(factor, kGrowMin, kGrowMax);
}

std::pair<StepAttempt, StepState> attempt_step(const MethodPair& pair, const SecondOrderIVP& p,
                                               const StepState& s, double h,
                                               const ToleranceSpec& tol) {
    if (!pair.low || !pair.high || pair.high->order != pair.low->order + 1)
        throw std::invalid_argument("method pair must have orders (r, r+1)");

    StepAttempt att;
    att.h = h;
    try {
        const StepState low = step(*pair.low, p, s, h);
        StepState high = step(*pair.high, p, s, h);
        Vec delta(static_cast<std::size_t>(p.dim));
        for (int j = 0; j < p.dim; ++j) delta[j] = high.pos[j] - low.pos[j];
        att.err_local = error_norm(tol.norm, delta, high.pos);
        att.accepted = att.err_local <= tol.tol_local;
        att.h_next = propose_stepsize(h, att.err_local, tol.tol_local);
        return {att, std::move(high)};
    } catch (const EvaluationError&) {
        if (!p.nonfinite_recoverable) throw;
        att.err_local = std::numeric_limits<double>::infinity();
        att.accepted = false;
        att.h_next = h * kGrowMin;
        return {att, StepState{}};
    }
}

namespace detail {

Trajectory drive_adaptive(const MethodPair& pair, const SecondOrderIVP& p,
                          const ToleranceSpec& tol, double x_end, std::optional<double> h0,
                          const AcceptHook& on_accept) {
    if (!(x_end > p.x0)) throw std::invalid_argument("x_end must exceed the initial abscissa");
    if (!(tol.tol_local > 0.0) || !(tol.tol_global > 0.0))
        throw std::invalid_argument("tolerances must be positive");

    const double range = x_end - p.x0;
    double h = h0.value_or(range / 1000.0);
    if (!(h > 0.0)) throw std::invalid_argument("initial stepsize must be positive");

    Trajectory tr;
    tr.dim = p.dim;
    tr.norm = tol.norm;
    tr.reference = p.reference;

    long f_evals = 0;
    const SecondOrderIVP counted = with_eval_counter(p, f_evals);

    StepState state{p.x0, p.y0, p.y0prime};
    tr.nodes.push_back({state, kNan, kNan});

    int consecutive_rejections = 0;
    while (true) {
        bool last = false;
        double h_try = h;
        if (state.x + h_try >= x_end) {
            h_try = x_end - state.x;
            last = true;
        }
        if (h_try < 1e-14 * range)
            throw StepsizeUnderflowError("stepsize underflow at x = " + std::to_string(state.x));

        auto [att, candidate] = attempt_step(pair, counted, state, h_try, tol);
        if (att.accepted) {
            consecutive_rejections = 0;
            ++tr.steps_accepted;
            TrajectoryNode node{std::move(candidate), h_try, att.err_local};
            if (on_accept) on_accept(node, state, h_try);
            state = node.state;
            tr.nodes.push_back(std::move(node));
            if (last) break;
            h = att.h_next;
        } else {
            ++tr.steps_rejected;
            if (++consecutive_rejections >= 30)
                throw RejectionStormError("30 consecutive rejected steps at x = " +
                                          std::to_string(state.x));
            h = att.h_next;
        }
    }
    tr.f_evals = f_evals;
    return tr;
}

}  // namespace detail

Trajectory integrate_local(const MethodPair& pair, const SecondOrderIVP& p,
                           const ToleranceSpec& tol, double x_end, std::optional<double> h0) {
    return detail::drive_adaptive(pair, p, tol, x_end, h0, nullptr);
}

Trajectory integrate_fixed(const NystromTableau& t, const SecondOrderIVP& p, double h,
                           double x_end, NormRule norm) {
    if (!(x_end > p.x0)) throw std::invalid_argument("x_end must exceed the initial abscissa");
    if (!(h > 0.0)) throw std::invalid_argument("stepsize must be positive");

    Trajectory tr;
    tr.dim = p.dim;
    tr.norm = norm;
    tr.reference = p.reference;

    long f_evals = 0;
    const SecondOrderIVP counted = with_eval_counter(p, f_evals);

    StepState state{p.x0, p.y0, p.y0prime};
    tr.nodes.push_back({state, kNan, kNan});
    while (true) {
        bool last = false;
        double h_try = h;
        if (state.x + h_try >= x_end) {
            h_try = x_end - state.x;
            last = true;
        }
        state = step(t, counted, state, h_try);
        ++tr.steps_accepted;
        tr.nodes.push_back({state, h_try, kNan});
        if (last) break;
    }
    tr.f_evals = f_evals;
    return tr;
}

}  // namespace rknq
