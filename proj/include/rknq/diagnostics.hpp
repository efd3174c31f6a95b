#pragma once

#include <span>
#include <vector>

#include "rknq/controller.hpp"
#include "rknq/stepper.hpp"

namespace rknq {

/// alpha = I + h J where J is the central-difference Jacobian of
/// eval_increment with respect to the position (velocity held fixed),
/// step eps^(1/3) max(1, |pos_j|) per column.
Matrix propagation_matrix(const NystromTableau& t, const SecondOrderIVP& p, const StepState& s,
                          double h);

/// Per-node record of the global-error recurrence
///   delta_{i+1} = eps_{i+1} + alpha_i delta_i (+ residual).
struct PropagationRecord {
    long node = 0;
    double x = 0.0;
    Matrix alpha;      ///< propagation matrix of the step into this node
    Vec eps_local;     ///< position error of a step taken from the exact position
    Vec delta_global;  ///< true position error at this node
    Vec residual;
};

/// Runs a fixed-h integration of a problem with a reference solution and
/// checks the recurrence at every node. The local term and alpha are
/// evaluated at the exact position with the chain's velocity kept as the
/// internal parameter, so for linear f the residual is finite-difference
/// noise only.
std::vector<PropagationRecord> verify_recurrence(const NystromTableau& t,
                                                 const SecondOrderIVP& p, double h, double x_end);

struct OrderSample {
    double h = 0.0;
    /// Max-norm position error at x_end scaled by the solution magnitude
    /// max(1, max_j |y_j|); the scaling keeps the rounding floor near
    /// 1e-13 regardless of the solution's size.
    double err = 0.0;
    bool at_floor = false;  ///< err below the 1e-13 rounding floor
};

struct OrderSlope {
    double h_coarse = 0.0;
    double h_fine = 0.0;
    double slope = 0.0;
    bool valid = false;  ///< false when either sample sits at the floor
};

struct ConvergenceStudy {
    std::vector<OrderSample> samples;
    std::vector<OrderSlope> slopes;  ///< one per adjacent h pair
};

/// Fixed-step global errors e(h) at x_end and the observed orders per
/// adjacent pair of the descending h list (log2(e(2h)/e(h)) when h
/// halves). Pairs whose errors sit at the rounding floor are flagged,
/// not slopes.
ConvergenceStudy observed_order(const NystromTableau& t, const SecondOrderIVP& p,
                                std::span<const double> h_list, double x_end);

}  // namespace rknq
