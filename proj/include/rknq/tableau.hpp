#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "rknq/types.hpp"

namespace rknq {

/// Coefficient set of one explicit Nystrom method for y'' = f(x, y):
///
///   k_p   = f(x + c_p h, w + c_p h w' + h^2 sum_{q<p} a[p][q] k_q)
///   w_new = w + h w' + h^2 sum_p b[p] k_p
///   w'_new= w' + h sum_p bhat[p] k_p
///
/// b are the position-update weights (they sum to 1/2), bhat the
/// velocity-update weights (they sum to 1). Explicit means a[p][q] = 0
/// for p <= q. Instances are immutable after construction and safe to
/// share across concurrent integrations.
struct NystromTableau {
    std::string name;
    int order = 0;   ///< global order r
    int stages = 0;  ///< stage count m
    std::vector<double> c;
    Matrix a;  ///< stages x stages, strictly lower triangular
    std::vector<double> b;
    std::vector<double> bhat;
};

struct ValidationCheck {
    std::string name;
    bool passed = false;
    double residual = 0.0;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;
    bool all_passed = false;
    /// Informational only (not part of all_passed): whether
    /// b[p] = bhat[p] * (1 - c[p]) holds within 1e-13 for every stage,
    /// a simplifying relation many published Nystrom methods satisfy.
    bool weight_relation_holds = false;
    double weight_relation_residual = 0.0;
};

/// Built-in methods: "RKN4" (3 stages), "RKN5" (4 stages), "RKN10" (16
/// stages). Throws UnknownNameError for any other name.
const NystromTableau& builtin_tableau(std::string_view name);

/// Structural checks: explicitness, weight sums (|sum b - 1/2| and
/// |sum bhat - 1| within 1e-13), coefficient array shapes. Failures are
/// reported, never thrown.
ValidationReport validate(const NystromTableau& t);

}  // namespace rknq
