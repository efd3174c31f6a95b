#pragma once

#include <functional>
#include <optional>

#include "rknq/controller.hpp"

namespace rknq::detail {

/// Called after each accepted step with the node about to be recorded;
/// may replace its state (quenching). It never influences the stepsize
/// sequence, so runs with and without a hook share the pair arithmetic
/// bit for bit.
using AcceptHook = std::function<void(TrajectoryNode& node, const StepState& from, double h)>;

Trajectory drive_adaptive(const MethodPair& pair, const SecondOrderIVP& p,
                          const ToleranceSpec& tol, double x_end, std::optional<double> h0,
                          const AcceptHook& on_accept);

}  // namespace rknq::detail
