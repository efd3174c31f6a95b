#include "rknq.h"

#include <cmath>
#include <cstring>
#include <limits>
#include <new>
#include <string>
#include <utility>

#include "rknq/builtins.hpp"
#include "rknq/controller.hpp"
#include "rknq/diagnostics.hpp"
#include "rknq/problem.hpp"
#include "rknq/quench.hpp"
#include "rknq/tableau.hpp"

struct rknq_problem {
    rknq::SecondOrderIVP ivp;
};

struct rknq_first_order {
    rknq::FirstOrderIVP ivp;
};

struct rknq_trajectory {
    rknq::QuenchedTrajectory data;  // tracker arrays empty unless has_tracker
    bool has_tracker = false;
};

namespace {

thread_local std::string g_last_error;
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

void set_error(const std::string& msg) { g_last_error = msg; }

template <typename Fn>
rknq_status guarded(Fn&& fn) {
    try {
        fn();
        return RKNQ_OK;
    } catch (const rknq::UnknownNameError& e) {
        set_error(e.what());
        return RKNQ_ERROR_UNKNOWN_NAME;
    } catch (const rknq::EvaluationError& e) {
        set_error(e.what());
        return RKNQ_ERROR_EVALUATION;
    } catch (const rknq::StepsizeUnderflowError& e) {
        set_error(e.what());
        return RKNQ_ERROR_STEPSIZE_UNDERFLOW;
    } catch (const rknq::RejectionStormError& e) {
        set_error(e.what());
        return RKNQ_ERROR_REJECTION_STORM;
    } catch (const rknq::ToleranceInfeasibleError& e) {
        set_error(e.what());
        return RKNQ_ERROR_TOLERANCE_INFEASIBLE;
    } catch (const std::invalid_argument& e) {
        set_error(e.what());
        return RKNQ_ERROR_INVALID_ARGUMENT;
    } catch (const std::exception& e) {
        set_error(e.what());
        return RKNQ_ERROR_INTERNAL;
    }
}

rknq_status require(bool ok, const char* msg) {
    if (ok) return RKNQ_OK;
    set_error(msg);
    return RKNQ_ERROR_INVALID_ARGUMENT;
}

rknq::NormRule to_norm(rknq_norm_rule r) {
    return r == RKNQ_NORM_ABSOLUTE ? rknq::NormRule::absolute : rknq::NormRule::mixed;
}

rknq::AccelFn wrap_eval(rknq_eval_fn fn, void* user, int dim) {
    return [fn, user, dim](double x, const rknq::Vec& y) -> rknq::Vec {
        rknq::Vec out(static_cast<std::size_t>(dim), kNan);
        if (fn(x, y.data(), out.data(), dim, user) != 0)
            throw rknq::EvaluationError("user evaluator reported failure", x, y);
        return out;
    };
}

rknq::JacobianFn wrap_jacobian(rknq_jacobian_fn fn, void* user, int dim) {
    if (!fn) return nullptr;
    return [fn, user, dim](double x, const rknq::Vec& y) -> rknq::Matrix {
        rknq::Matrix j(dim, dim);
        if (fn(x, y.data(), j.data.data(), dim, user) != 0)
            throw rknq::EvaluationError("user Jacobian reported failure", x, y);
        return j;
    };
}

rknq::StateRefFn wrap_state_reference(rknq_reference_fn fn, void* user, int dim) {
    if (!fn) return nullptr;
    return [fn, user, dim](double x) {
        rknq::Vec y(static_cast<std::size_t>(dim), kNan);
        rknq::Vec yp(static_cast<std::size_t>(dim), kNan);
        if (fn(x, y.data(), yp.data(), dim, user) != 0)
            throw rknq::EvaluationError("user reference reported failure", x, {});
        return std::make_pair(std::move(y), std::move(yp));
    };
}

rknq::ValueRefFn wrap_value_reference(rknq_reference_fn fn, void* user, int dim) {
    if (!fn) return nullptr;
    return [fn, user, dim](double x) -> rknq::Vec {
        rknq::Vec y(static_cast<std::size_t>(dim), kNan);
        if (fn(x, y.data(), nullptr, dim, user) != 0)
            throw rknq::EvaluationError("user reference reported failure", x, {});
        return y;
    };
}

}  // namespace

extern "C" {

const char* rknq_status_name(rknq_status s) {
    switch (s) {
        case RKNQ_OK: return "ok";
        case RKNQ_ERROR_INVALID_ARGUMENT: return "invalid argument";
        case RKNQ_ERROR_UNKNOWN_NAME: return "unknown name";
        case RKNQ_ERROR_EVALUATION: return "evaluation failed";
        case RKNQ_ERROR_STEPSIZE_UNDERFLOW: return "stepsize underflow";
        case RKNQ_ERROR_REJECTION_STORM: return "rejection storm";
        case RKNQ_ERROR_TOLERANCE_INFEASIBLE: return "tolerance infeasible";
        case RKNQ_ERROR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* rknq_last_error(void) { return g_last_error.c_str(); }

rknq_status rknq_tableau_builtin(const char* name, const rknq_tableau** out) {
    if (rknq_status s = require(name && out, "null argument"); s != RKNQ_OK) return s;
    return guarded([&] {
        const rknq::NystromTableau& t = rknq::builtin_tableau(name);
        *out = reinterpret_cast<const rknq_tableau*>(&t);
    });
}

int rknq_tableau_order(const rknq_tableau* t) {
    return t ? reinterpret_cast<const rknq::NystromTableau*>(t)->order : 0;
}

int rknq_tableau_stages(const rknq_tableau* t) {
    return t ? reinterpret_cast<const rknq::NystromTableau*>(t)->stages : 0;
}

const char* rknq_tableau_name(const rknq_tableau* t) {
    return t ? reinterpret_cast<const rknq::NystromTableau*>(t)->name.c_str() : "";
}

rknq_status rknq_tableau_validate(const rknq_tableau* t, rknq_validation_report* out) {
    if (rknq_status s = require(t && out, "null argument"); s != RKNQ_OK) return s;
    return guarded([&] {
        const auto rep = rknq::validate(*reinterpret_cast<const rknq::NystromTableau*>(t));
        std::memset(out, 0, sizeof(*out));
        for (const auto& c : rep.checks) {
            if (c.name == "shape") out->shape_ok = c.passed;
            if (c.name == "explicit") {
                out->explicit_ok = c.passed;
                out->explicit_residual = c.residual;
            }
            if (c.name == "position-weight-sum") {
                out->position_sum_ok = c.passed;
                out->position_sum_residual = c.residual;
            }
            if (c.name == "velocity-weight-sum") {
                out->velocity_sum_ok = c.passed;
                out->velocity_sum_residual = c.residual;
            }
        }
        out->all_passed = rep.all_passed;
        out->weight_relation_holds = rep.weight_relation_holds;
        out->weight_relation_residual = rep.weight_relation_residual;
    });
}

rknq_status rknq_problem_builtin(const char* name, rknq_problem** out) {
    if (rknq_status s = require(name && out, "null argument"); s != RKNQ_OK) return s;
    return guarded([&] {
        const rknq::BuiltinProblem& b = rknq::builtin_problem(name);
        *out = new rknq_problem{b.second_order};
    });
}

rknq_status rknq_problem_builtin_info(const char* name, rknq_norm_rule* norm,
                                      double* default_x_end) {
    if (rknq_status s = require(name != nullptr, "null argument"); s != RKNQ_OK) return s;
    return guarded([&] {
        const rknq::BuiltinProblem& b = rknq::builtin_problem(name);
        if (norm)
            *norm = b.norm == rknq::NormRule::absolute ? RKNQ_NORM_ABSOLUTE : RKNQ_NORM_MIXED;
        if (default_x_end) *default_x_end = b.default_x_end;
    });
}

rknq_status rknq_problem_create(int dim, double x0, const double* y0, const double* y0prime,
                                rknq_eval_fn f, void* f_user, rknq_reference_fn reference,
                                void* reference_user, rknq_problem** out) {
    if (rknq_status s = require(dim > 0 && y0 && y0prime && f && out, "null or bad argument");
        s != RKNQ_OK)
        return s;
    return guarded([&] {
        *out = new rknq_problem{rknq::make_second_order(
            dim, wrap_eval(f, f_user, dim), x0, rknq::Vec(y0, y0 + dim),
            rknq::Vec(y0prime, y0prime + dim), wrap_state_reference(reference, reference_user, dim))};
    });
}

rknq_status rknq_first_order_create(int dim, double x0, const double* y0, rknq_eval_fn g,
                                    void* g_user, rknq_jacobian_fn jacobian, void* jacobian_user,
                                    rknq_reference_fn reference, void* reference_user,
                                    int autonomous, rknq_first_order** out) {
    if (rknq_status s = require(dim > 0 && y0 && g && out, "null or bad argument"); s != RKNQ_OK)
        return s;
    return guarded([&] {
        *out = new rknq_first_order{rknq::make_first_order(
            dim, wrap_eval(g, g_user, dim), x0, rknq::Vec(y0, y0 + dim),
            wrap_jacobian(jacobian, jacobian_user, dim),
            wrap_value_reference(reference, reference_user, dim), autonomous != 0)};
    });
}

rknq_status rknq_first_order_transform(const rknq_first_order* p, rknq_problem** out) {
    if (rknq_status s = require(p && out, "null argument"); s != RKNQ_OK) return s;
    return guarded([&] { *out = new rknq_problem{rknq::transform(p->ivp)}; });
}

void rknq_problem_destroy(rknq_problem* p) { delete p; }
void rknq_first_order_destroy(rknq_first_order* p) { delete p; }

int rknq_problem_dim(const rknq_problem* p) { return p ? p->ivp.dim : 0; }
double rknq_problem_x0(const rknq_problem* p) { return p ? p->ivp.x0 : kNan; }
int rknq_problem_has_reference(const rknq_problem* p) {
    return p && p->ivp.reference ? 1 : 0;
}

rknq_status rknq_problem_reference(const rknq_problem* p, double x, double* y, double* yprime) {
    if (rknq_status s = require(p && y && yprime, "null argument"); s != RKNQ_OK) return s;
    if (rknq_status s = require(static_cast<bool>(p->ivp.reference), "problem has no reference");
        s != RKNQ_OK)
        return s;
    return guarded([&] {
        const auto [ry, ryp] = p->ivp.reference(x);
        for (int j = 0; j < p->ivp.dim; ++j) {
            y[j] = ry[j];
            yprime[j] = ryp[j];
        }
    });
}

rknq_status rknq_integrate_local(const rknq_tableau* low, const rknq_tableau* high,
                                 const rknq_problem* p, rknq_tolerance tol, double x_end,
                                 double h0, rknq_trajectory** out) {
    if (rknq_status s = require(low && high && p && out, "null argument"); s != RKNQ_OK) return s;
    return guarded([&] {
        rknq::MethodPair pair{reinterpret_cast<const rknq::NystromTableau*>(low),
                              reinterpret_cast<const rknq::NystromTableau*>(high)};
        rknq::ToleranceSpec ts{tol.tol_local, tol.tol_global, to_norm(tol.norm)};
        auto tr = new rknq_trajectory;
        tr->data.base = rknq::integrate_local(
            pair, p->ivp, ts, x_end,
            h0 > 0.0 ? std::optional<double>(h0) : std::nullopt);
        *out = tr;
    });
}

rknq_status rknq_integrate_quenched(const rknq_tableau* low, const rknq_tableau* high,
                                    const rknq_tableau* tracker, const rknq_problem* p,
                                    rknq_tolerance tol, double x_end, double h0,
                                    rknq_trajectory** out) {
    if (rknq_status s = require(low && high && tracker && p && out, "null argument");
        s != RKNQ_OK)
        return s;
    return guarded([&] {
        rknq::MethodTriple triple{reinterpret_cast<const rknq::NystromTableau*>(low),
                                  reinterpret_cast<const rknq::NystromTableau*>(high),
                                  reinterpret_cast<const rknq::NystromTableau*>(tracker)};
        rknq::ToleranceSpec ts{tol.tol_local, tol.tol_global, to_norm(tol.norm)};
        auto tr = new rknq_trajectory;
        tr->data = rknq::integrate_quenched(
            triple, p->ivp, ts, x_end, h0 > 0.0 ? std::optional<double>(h0) : std::nullopt);
        tr->has_tracker = true;
        *out = tr;
    });
}

rknq_status rknq_integrate_fixed(const rknq_tableau* t, const rknq_problem* p, double h,
                                 double x_end, rknq_norm_rule norm, rknq_trajectory** out) {
    if (rknq_status s = require(t && p && out, "null argument"); s != RKNQ_OK) return s;
    return guarded([&] {
        auto tr = new rknq_trajectory;
        tr->data.base =
            rknq::integrate_fixed(*reinterpret_cast<const rknq::NystromTableau*>(t), p->ivp, h,
                                  x_end, to_norm(norm));
        *out = tr;
    });
}

void rknq_trajectory_destroy(rknq_trajectory* tr) { delete tr; }

long rknq_trajectory_node_count(const rknq_trajectory* tr) {
    return tr ? static_cast<long>(tr->data.base.nodes.size()) : 0;
}

int rknq_trajectory_dim(const rknq_trajectory* tr) { return tr ? tr->data.base.dim : 0; }

rknq_status rknq_trajectory_node_state(const rknq_trajectory* tr, long i, double* x, double* pos,
                                       double* vel) {
    if (rknq_status s = require(tr != nullptr, "null argument"); s != RKNQ_OK) return s;
    if (rknq_status s = require(i >= 0 && i < rknq_trajectory_node_count(tr), "node out of range");
        s != RKNQ_OK)
        return s;
    const auto& node = tr->data.base.nodes[static_cast<std::size_t>(i)];
    if (x) *x = node.state.x;
    for (int j = 0; j < tr->data.base.dim; ++j) {
        if (pos) pos[j] = node.state.pos[j];
        if (vel) vel[j] = node.state.vel[j];
    }
    return RKNQ_OK;
}

rknq_status rknq_trajectory_node_errors(const rknq_trajectory* tr, long i, double* h,
                                        double* err_local, double* err_global_est,
                                        double* err_true, int* quenched) {
    if (rknq_status s = require(tr != nullptr, "null argument"); s != RKNQ_OK) return s;
    if (rknq_status s = require(i >= 0 && i < rknq_trajectory_node_count(tr), "node out of range");
        s != RKNQ_OK)
        return s;
    const auto& base = tr->data.base;
    const auto& node = base.nodes[static_cast<std::size_t>(i)];
    if (h) *h = node.h;
    if (err_local) *err_local = node.err_local;
    if (err_global_est)
        *err_global_est = tr->has_tracker ? tr->data.global_err_est[static_cast<std::size_t>(i)]
                                          : kNan;
    if (quenched)
        *quenched = tr->has_tracker && tr->data.quenched[static_cast<std::size_t>(i)] ? 1 : 0;
    if (err_true) {
        if (base.reference) {
            return guarded([&] {
                const auto [ry, ryp] = base.reference(node.state.x);
                rknq::Vec delta(static_cast<std::size_t>(base.dim));
                for (int j = 0; j < base.dim; ++j) delta[j] = node.state.pos[j] - ry[j];
                *err_true = rknq::error_norm(base.norm, delta, ry);
            });
        }
        *err_true = kNan;
    }
    return RKNQ_OK;
}

rknq_status rknq_trajectory_summary(const rknq_trajectory* tr, rknq_run_summary* out) {
    if (rknq_status s = require(tr && out, "null argument"); s != RKNQ_OK) return s;
    return guarded([&] {
        const rknq::RunSummary s =
            tr->has_tracker ? rknq::summarize(tr->data) : rknq::summarize(tr->data.base);
        out->node_count = s.node_count;
        out->steps_accepted = s.steps_accepted;
        out->steps_rejected = s.steps_rejected;
        out->quench_count = s.quench_count;
        out->max_global_err_est = s.max_global_err_est;
        out->max_true_err = s.max_true_err;
        out->f_evals_working = s.f_evals_working;
        out->f_evals_tracker = s.f_evals_tracker;
    });
}

rknq_status rknq_convergence_study(const rknq_tableau* t, const rknq_problem* p,
                                   const double* h_list, int count, double x_end,
                                   rknq_convergence_row* rows) {
    if (rknq_status s = require(t && p && h_list && rows && count >= 2, "bad argument");
        s != RKNQ_OK)
        return s;
    return guarded([&] {
        const auto study =
            rknq::observed_order(*reinterpret_cast<const rknq::NystromTableau*>(t), p->ivp,
                                 std::span<const double>(h_list, static_cast<std::size_t>(count)),
                                 x_end);
        for (int i = 0; i < count; ++i) {
            rows[i].h = study.samples[static_cast<std::size_t>(i)].h;
            rows[i].err = study.samples[static_cast<std::size_t>(i)].err;
            rows[i].at_floor = study.samples[static_cast<std::size_t>(i)].at_floor ? 1 : 0;
            rows[i].slope = kNan;
            rows[i].has_slope = 0;
            if (i > 0) {
                const auto& sl = study.slopes[static_cast<std::size_t>(i - 1)];
                if (sl.valid) {
                    rows[i].slope = sl.slope;
                    rows[i].has_slope = 1;
                }
            }
        }
    });
}

} /* extern "C" */
