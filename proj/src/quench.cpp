#include "rknq/quench.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "drive.hpp"

namespace rknq {

namespace {
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
}

QuenchedTrajectory integrate_quenched(const MethodTriple& methods, const SecondOrderIVP& p,
                                      const ToleranceSpec& tol, double x_end,
                                      std::optional<double> h0) {
    if (!methods.low || !methods.high || !methods.tracker)
        throw std::invalid_argument("quenched integration needs three methods");
    if (!(methods.low->order < methods.high->order &&
          methods.high->order < methods.tracker->order))
        throw std::invalid_argument("method orders must increase: low < high < tracker");

    QuenchedTrajectory qt;
    long tracker_evals = 0;
    SecondOrderIVP tracked = p;
    tracked.f = [&tracker_evals, f = p.f](double x, const Vec& y) {
        ++tracker_evals;
        return f(x, y);
    };

    StepState tracker_state{p.x0, p.y0, p.y0prime};
    qt.tracker_states.push_back(tracker_state);
    qt.global_err_est.push_back(0.0);
    qt.quenched.push_back(0);

    int consecutive_quenches = 0;
    const NystromTableau& z = *methods.tracker;

    detail::AcceptHook hook = [&](TrajectoryNode& node, const StepState&, double h) {
        // the tracker chain advances from its own state over the same h
        // and is never touched by quenching
        tracker_state = step(z, tracked, tracker_state, h);

        Vec delta(static_cast<std::size_t>(p.dim));
        for (int j = 0; j < p.dim; ++j) delta[j] = node.state.pos[j] - tracker_state.pos[j];
        double est = error_norm(tol.norm, delta, tracker_state.pos);

        bool quench = est > tol.tol_global;
        if (quench) {
            QuenchEvent ev;
            ev.node_index = static_cast<long>(qt.tracker_states.size());
            ev.x = node.state.x;
            ev.err_before = est;
            node.state.pos = tracker_state.pos;
            node.state.vel = tracker_state.vel;
            est = 0.0;
            ev.err_after = est;
            qt.events.push_back(ev);
            ++qt.quench_count;
            if (++consecutive_quenches >= 50)
                throw ToleranceInfeasibleError(
                    "quench fired at 50 consecutive nodes; the global tolerance is "
                    "unattainable relative to the local tolerance");
        } else {
            consecutive_quenches = 0;
        }

        qt.tracker_states.push_back(tracker_state);
        qt.global_err_est.push_back(est);
        qt.quenched.push_back(quench ? 1 : 0);
        qt.max_global_err_est = std::max(qt.max_global_err_est, est);
    };

    qt.base = detail::drive_adaptive({methods.low, methods.high}, p, tol, x_end, h0, hook);
    qt.f_evals_tracker = tracker_evals;
    return qt;
}

double max_true_error(const Trajectory& t) {
    if (!t.reference) return kNan;
    double m = 0.0;
    Vec delta(static_cast<std::size_t>(t.dim));
    for (const auto& node : t.nodes) {
        const auto [ry, ryp] = t.reference(node.state.x);
        for (int j = 0; j < t.dim; ++j) delta[j] = node.state.pos[j] - ry[j];
        m = std::max(m, error_norm(t.norm, delta, ry));
    }
    return m;
}

RunSummary summarize(const Trajectory& t) {
    RunSummary s;
    s.node_count = static_cast<long>(t.nodes.size());
    s.steps_accepted = t.steps_accepted;
    s.steps_rejected = t.steps_rejected;
    s.quench_count = 0;
    s.max_global_err_est = kNan;
    s.max_true_err = max_true_error(t);
    s.f_evals_working = t.f_evals;
    s.f_evals_tracker = 0;
    return s;
}

RunSummary summarize(const QuenchedTrajectory& t) {
    RunSummary s = summarize(t.base);
    s.quench_count = t.quench_count;
    s.max_global_err_est = t.max_global_err_est;
    s.f_evals_tracker = t.f_evals_tracker;
    return s;
}

}  // namespace rknq
