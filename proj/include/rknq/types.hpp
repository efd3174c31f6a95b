#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace rknq {

using Vec = std::vector<double>;

/// Minimal dense row-major matrix; problem dimensions here are tiny.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}

    double& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
    double at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }

    /// y = M x
    Vec apply(const Vec& x) const {
        Vec y(static_cast<std::size_t>(rows), 0.0);
        for (int r = 0; r < rows; ++r) {
            double s = 0.0;
            for (int c = 0; c < cols; ++c) s += at(r, c) * x[static_cast<std::size_t>(c)];
            y[static_cast<std::size_t>(r)] = s;
        }
        return y;
    }

    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
        return m;
    }
};

inline bool all_finite(const Vec& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

/// Base class for integration failures surfaced through the C API as codes.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class UnknownNameError : public Error {
  public:
    using Error::Error;
};

/// Non-finite value from a user evaluator; carries the evaluation point.
class EvaluationError : public Error {
  public:
    EvaluationError(std::string msg, double x, Vec y, int stage = -1)
        : Error(std::move(msg)), x(x), y(std::move(y)), stage(stage) {}

    double x;
    Vec y;
    int stage;  // 0-based stage index, -1 outside the stage cascade
};

class StepsizeUnderflowError : public Error {
  public:
    using Error::Error;
};

class RejectionStormError : public Error {
  public:
    using Error::Error;
};

class ToleranceInfeasibleError : public Error {
  public:
    using Error::Error;
};

}  // namespace rknq
