#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rknq/controller.hpp"

namespace rknq {

/// One global-error reset: the working state at node_index was replaced
/// by the tracker-chain state. err_after compares the replaced state
/// against the tracker, so it is exactly zero.
struct QuenchEvent {
    long node_index = 0;
    double x = 0.0;
    double err_before = 0.0;
    double err_after = 0.0;
};

/// Methods of the quenched run: low/high form the controlling pair,
/// tracker is the much higher-order chain standing in for the exact
/// solution. Orders must satisfy low < high < tracker.
struct MethodTriple {
    const NystromTableau* low = nullptr;
    const NystromTableau* high = nullptr;
    const NystromTableau* tracker = nullptr;
};

struct QuenchedTrajectory {
    Trajectory base;  ///< working chain, nodes aligned with the arrays below
    std::vector<StepState> tracker_states;   ///< per node
    std::vector<double> global_err_est;      ///< per node, after quench processing
    std::vector<std::uint8_t> quenched;      ///< per node, 0/1
    std::vector<QuenchEvent> events;
    double max_global_err_est = 0.0;
    long quench_count = 0;
    long f_evals_tracker = 0;
};

/// The quenching integration loop. Per accepted pair step i -> i+1 the
/// tracker chain advances from its own state over the same h_i; when the
/// position difference between the carried and tracker solutions (in the
/// tolerance norm, reference = tracker) exceeds tol_global, the working
/// position and velocity at i+1 are replaced by the tracker state. The
/// step is not recomputed and the tracker chain is never modified.
/// Throws ToleranceInfeasibleError once 50 consecutive nodes quench.
QuenchedTrajectory integrate_quenched(const MethodTriple& methods, const SecondOrderIVP& p,
                                      const ToleranceSpec& tol, double x_end,
                                      std::optional<double> h0 = std::nullopt);

struct RunSummary {
    long node_count = 0;
    long steps_accepted = 0;
    long steps_rejected = 0;
    long quench_count = 0;
    double max_global_err_est = 0.0;  ///< NaN when no tracker chain ran
    double max_true_err = 0.0;        ///< NaN when the problem has no reference
    long f_evals_working = 0;
    long f_evals_tracker = 0;
};

RunSummary summarize(const Trajectory& t);
RunSummary summarize(const QuenchedTrajectory& t);

/// Max over nodes of the position error against the trajectory's captured
/// reference, in its norm rule; NaN when no reference exists.
double max_true_error(const Trajectory& t);

}  // namespace rknq
