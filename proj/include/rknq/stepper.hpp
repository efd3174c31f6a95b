#pragma once

#include "rknq/problem.hpp"
#include "rknq/tableau.hpp"
#include "rknq/types.hpp"

namespace rknq {

/// Numerical state at one node: abscissa, position w, velocity w'.
struct StepState {
    double x = 0.0;
    Vec pos;
    Vec vel;
};

/// Stage accelerations of one step; row p depends only on rows q < p.
struct StageSet {
    Matrix k;  ///< stages x dim
};

/// Evaluates the stage cascade in stage order. Requires h > 0 and an
/// explicit tableau. Non-finite f values raise EvaluationError carrying
/// the stage index and evaluation point.
StageSet compute_stages(const NystromTableau& t, const SecondOrderIVP& p, const StepState& s,
                        double h);

/// One explicit Nystrom step. The position update is computed as
/// pos + h * increment so it matches eval_increment() bit for bit.
StepState step(const NystromTableau& t, const SecondOrderIVP& p, const StepState& s, double h);

/// The increment F with new position = pos + h * F; the velocity enters
/// as an internal parameter. Exposed for the propagation-matrix Jacobian.
Vec eval_increment(const NystromTableau& t, const SecondOrderIVP& p, const StepState& s,
                   double h);

}  // namespace rknq
