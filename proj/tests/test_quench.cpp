#include <cmath>
#include <cstring>
#include <limits>
#include <thread>
#include <vector>

#include "doctest.h"
#include "rknq/builtins.hpp"
#include "rknq/quench.hpp"
#include "rknq/stepper.hpp"

using namespace rknq;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

MethodTriple triple() {
    return {&builtin_tableau("RKN4"), &builtin_tableau("RKN5"), &builtin_tableau("RKN10")};
}

bool state_bits_equal(const StepState& a, const StepState& b) {
    if (std::memcmp(&a.x, &b.x, sizeof(double)) != 0) return false;
    for (std::size_t j = 0; j < a.pos.size(); ++j) {
        if (std::memcmp(&a.pos[j], &b.pos[j], sizeof(double)) != 0) return false;
        if (std::memcmp(&a.vel[j], &b.vel[j], sizeof(double)) != 0) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("infinite global tolerance reproduces plain local control") {
    const SecondOrderIVP p = builtin_problem("exp1000").second_order;
    const ToleranceSpec tol{1e-8, kInf, NormRule::absolute};
    const Trajectory local = integrate_local({triple().low, triple().high}, p, tol, 30.0);
    const QuenchedTrajectory quenched = integrate_quenched(triple(), p, tol, 30.0);

    CHECK(quenched.quench_count == 0);
    CHECK(quenched.events.empty());
    REQUIRE(quenched.base.nodes.size() == local.nodes.size());
    for (std::size_t i = 0; i < local.nodes.size(); ++i)
        CHECK(state_bits_equal(quenched.base.nodes[i].state, local.nodes[i].state));
}

TEST_CASE("quenching never feeds back into the tracker chain") {
    const SecondOrderIVP p = builtin_problem("sho").second_order;
    const QuenchedTrajectory on =
        integrate_quenched(triple(), p, {1e-8, 1e-9, NormRule::mixed}, 20.0);
    REQUIRE(on.quench_count > 0);

    SUBCASE("tracker states replay as plain fixed steps over the node sequence") {
        StepState z{p.x0, p.y0, p.y0prime};
        REQUIRE(state_bits_equal(on.tracker_states[0], z));
        for (std::size_t i = 1; i < on.tracker_states.size(); ++i) {
            z = step(*triple().tracker, p, z, on.base.nodes[i].h);
            CHECK(state_bits_equal(on.tracker_states[i], z));
        }
    }
    SUBCASE("quench on/off runs share the tracker until the stepsize sequences part") {
        // a quench replaces the working state, which perturbs the next
        // local estimate and hence the stepsize proposals one step later;
        // through the first quenched node + 1 everything is bit-identical
        const QuenchedTrajectory off =
            integrate_quenched(triple(), p, {1e-8, kInf, NormRule::mixed}, 20.0);
        const std::size_t first =
            static_cast<std::size_t>(on.events.front().node_index);
        REQUIRE(off.tracker_states.size() > first + 1);
        for (std::size_t i = 0; i <= first + 1; ++i)
            CHECK(state_bits_equal(on.tracker_states[i], off.tracker_states[i]));
    }
}

TEST_CASE("post-quench bookkeeping") {
    const SecondOrderIVP p = builtin_problem("sho").second_order;
    const ToleranceSpec tol{1e-8, 1e-9, NormRule::mixed};
    const QuenchedTrajectory qt = integrate_quenched(triple(), p, tol, 20.0);
    REQUIRE(qt.quench_count > 0);

    SUBCASE("every node estimate is within the global tolerance") {
        long flagged = 0;
        for (std::size_t i = 0; i < qt.base.nodes.size(); ++i) {
            CHECK(qt.global_err_est[i] <= tol.tol_global);
            if (qt.quenched[i]) {
                ++flagged;
                CHECK(qt.global_err_est[i] == 0.0);
                // replaced states coincide with the tracker
                CHECK(state_bits_equal(qt.base.nodes[i].state, qt.tracker_states[i]));
            }
        }
        CHECK(flagged == qt.quench_count);
        CHECK(static_cast<long>(qt.events.size()) == qt.quench_count);
        CHECK(qt.max_global_err_est <= tol.tol_global);
    }
    SUBCASE("events record the threshold crossing") {
        for (const QuenchEvent& ev : qt.events) {
            CHECK(ev.err_before > tol.tol_global);
            CHECK(ev.err_after == 0.0);
            CHECK(ev.err_after <= ev.err_before);
            CHECK(qt.quenched[static_cast<std::size_t>(ev.node_index)] == 1);
            CHECK(qt.base.nodes[static_cast<std::size_t>(ev.node_index)].state.x ==
                  doctest::Approx(ev.x));
        }
    }
    SUBCASE("evaluation counts per chain") {
        const long attempts = qt.base.steps_accepted + qt.base.steps_rejected;
        CHECK(qt.base.f_evals == (3 + 4) * attempts);
        CHECK(qt.f_evals_tracker == 16 * qt.base.steps_accepted);
    }
}

TEST_CASE("unattainable global tolerance raises infeasibility") {
    const SecondOrderIVP p = builtin_problem("exp1000").second_order;
    const ToleranceSpec tol{1e-6, 1e-18, NormRule::absolute};
    CHECK_THROWS_AS(integrate_quenched(triple(), p, tol, 100.0), ToleranceInfeasibleError);
}

TEST_CASE("method ordering is enforced") {
    const SecondOrderIVP p = builtin_problem("exp1000").second_order;
    MethodTriple bad{&builtin_tableau("RKN5"), &builtin_tableau("RKN4"),
                     &builtin_tableau("RKN10")};
    CHECK_THROWS_AS(integrate_quenched(bad, p, {1e-8, 1e-8, NormRule::absolute}, 1.0),
                    std::invalid_argument);
}

TEST_CASE("run summaries") {
    const SecondOrderIVP p = builtin_problem("exp1000").second_order;
    SUBCASE("quenched run") {
        const ToleranceSpec tol{1e-10, 1e-10, NormRule::absolute};
        const QuenchedTrajectory qt = integrate_quenched(triple(), p, tol, 100.0);
        const RunSummary s = summarize(qt);
        CHECK(s.node_count == static_cast<long>(qt.base.nodes.size()));
        CHECK(s.quench_count == qt.quench_count);
        CHECK(s.max_global_err_est <= 1e-10);
        CHECK(s.max_true_err <= 1e-10);
        CHECK(s.f_evals_working == qt.base.f_evals);
        CHECK(s.f_evals_tracker == qt.f_evals_tracker);
    }
    SUBCASE("local run reports no tracker data") {
        const Trajectory tr =
            integrate_local({triple().low, triple().high}, p, {1e-8, kInf, NormRule::absolute},
                            10.0);
        const RunSummary s = summarize(tr);
        CHECK(s.quench_count == 0);
        CHECK(std::isnan(s.max_global_err_est));
        CHECK_FALSE(std::isnan(s.max_true_err));
        CHECK(s.f_evals_tracker == 0);
    }
    SUBCASE("true error is NaN without a reference") {
        const SecondOrderIVP anon = make_second_order(
            1, [](double, const Vec& y) -> Vec { return {-y[0]}; }, 0.0, Vec{1.0}, Vec{0.0});
        const Trajectory tr = integrate_local({triple().low, triple().high}, anon,
                                              {1e-8, kInf, NormRule::mixed}, 1.0);
        CHECK(std::isnan(summarize(tr).max_true_err));
    }
}
