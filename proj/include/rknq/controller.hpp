#pragma once

#include <optional>
#include <span>
#include <vector>

#include "rknq/problem.hpp"
#include "rknq/stepper.hpp"
#include "rknq/tableau.hpp"

namespace rknq {

enum class NormRule {
    mixed,    ///< absolute below unit magnitude, relative above
    absolute  ///< plain max-abs
};

struct ToleranceSpec {
    double tol_local = 1e-8;
    double tol_global = std::numeric_limits<double>::infinity();
    NormRule norm = NormRule::mixed;
};

/// Mixed norm: max over j of |delta_j| / max(1, |wref_j|).
double scaled_norm(std::span<const double> delta, std::span<const double> wref);

/// Norm dispatched on the tolerance rule.
double error_norm(NormRule rule, std::span<const double> delta, std::span<const double> wref);

/// Next stepsize h * clamp(0.9 (tol/err)^(1/5), 0.2, 5); err = 0 gives the
/// growth ceiling. The exponent matches the order-4 member whose O(h^5)
/// local error the pair estimates.
double propose_stepsize(double h, double err_local, double tol_local);

/// Embedded pair: high.order must equal low.order + 1. The low-order
/// result exists only for the error estimate; the high-order result is
/// carried (local extrapolation).
struct MethodPair {
    const NystromTableau* low = nullptr;
    const NystromTableau* high = nullptr;
};

struct StepAttempt {
    double h = 0.0;
    double err_local = 0.0;
    bool accepted = false;
    double h_next = 0.0;
};

/// Tries one step of both pair members from the same state. The estimate
/// is the position difference in the tolerance norm; velocities are not
/// part of the estimate. Non-finite stage values reject the attempt when
/// the problem marks them recoverable, otherwise they propagate.
std::pair<StepAttempt, StepState> attempt_step(const MethodPair& pair, const SecondOrderIVP& p,
                                               const StepState& s, double h,
                                               const ToleranceSpec& tol);

struct TrajectoryNode {
    StepState state;         ///< working solution at this node
    double h = 0.0;          ///< stepsize of the step into this node (NaN at node 0)
    double err_local = 0.0;  ///< accepted local estimate (NaN at node 0 / fixed runs)
};

struct Trajectory {
    std::vector<TrajectoryNode> nodes;
    long f_evals = 0;  ///< evaluations by the working chain(s)
    long steps_accepted = 0;
    long steps_rejected = 0;
    // run context captured for error reporting
    int dim = 0;
    NormRule norm = NormRule::mixed;
    StateRefFn reference;
};

/// Adaptive integration with local extrapolation from p.x0 to x_end
/// (x_end > x0). Rejected attempts shrink h via propose_stepsize; the
/// final step is clipped to land on x_end. Throws StepsizeUnderflowError
/// when h < 1e-14 (x_end - x0) and RejectionStormError after 30
/// consecutive rejections.
Trajectory integrate_local(const MethodPair& pair, const SecondOrderIVP& p,
                           const ToleranceSpec& tol, double x_end,
                           std::optional<double> h0 = std::nullopt);

/// Fixed-step single-method integration; the last step is clipped to land
/// on x_end. Used by the diagnostics scans and the CLI fixed mode.
Trajectory integrate_fixed(const NystromTableau& t, const SecondOrderIVP& p, double h,
                           double x_end, NormRule norm = NormRule::mixed);

}  // namespace rknq
