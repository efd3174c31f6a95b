#include <cmath>
#include <cstring>

#include "doctest.h"
#include "rknq.h"

namespace {

// y'' = -y with y = cos x, y' = -sin x
int cosine_accel(double, const double* y, double* out, int, void*) {
    out[0] = -y[0];
    return 0;
}

int cosine_reference(double x, double* y, double* yprime, int, void*) {
    y[0] = std::cos(x);
    if (yprime) yprime[0] = -std::sin(x);
    return 0;
}

// y' = lam y with analytic Jacobian
struct ExpField {
    double lam;
};

int exp_field(double, const double* y, double* out, int, void* user) {
    out[0] = static_cast<ExpField*>(user)->lam * y[0];
    return 0;
}

int exp_jacobian(double, const double*, double* jac, int, void* user) {
    jac[0] = static_cast<ExpField*>(user)->lam;
    return 0;
}

int failing_eval(double, const double*, double*, int, void*) { return 1; }

}  // namespace

TEST_CASE("tableau lookup and validation") {
    const rknq_tableau* t = nullptr;
    REQUIRE(rknq_tableau_builtin("RKN4", &t) == RKNQ_OK);
    CHECK(rknq_tableau_order(t) == 4);
    CHECK(rknq_tableau_stages(t) == 3);
    CHECK(std::strcmp(rknq_tableau_name(t), "RKN4") == 0);

    rknq_validation_report rep{};
    REQUIRE(rknq_tableau_validate(t, &rep) == RKNQ_OK);
    CHECK(rep.all_passed);
    CHECK(rep.shape_ok);
    CHECK(rep.explicit_ok);
    CHECK(rep.position_sum_ok);
    CHECK(rep.position_sum_residual <= 1e-13);
    CHECK(rep.velocity_sum_ok);
    CHECK(rep.weight_relation_holds);

    const rknq_tableau* bad = nullptr;
    CHECK(rknq_tableau_builtin("RKN99", &bad) == RKNQ_ERROR_UNKNOWN_NAME);
    CHECK(std::strlen(rknq_last_error()) > 0);
    CHECK(rknq_tableau_builtin(nullptr, &bad) == RKNQ_ERROR_INVALID_ARGUMENT);
}

TEST_CASE("built-in problems through the C surface") {
    rknq_problem* p = nullptr;
    REQUIRE(rknq_problem_builtin("exp1000", &p) == RKNQ_OK);
    CHECK(rknq_problem_dim(p) == 1);
    CHECK(rknq_problem_x0(p) == 0.0);
    CHECK(rknq_problem_has_reference(p) == 1);

    double y = 0.0, yp = 0.0;
    REQUIRE(rknq_problem_reference(p, 100.0, &y, &yp) == RKNQ_OK);
    CHECK(y == doctest::Approx(1000.0).epsilon(1e-12));

    rknq_norm_rule norm = RKNQ_NORM_MIXED;
    double x_end = 0.0;
    REQUIRE(rknq_problem_builtin_info("exp1000", &norm, &x_end) == RKNQ_OK);
    CHECK(norm == RKNQ_NORM_ABSOLUTE);
    CHECK(x_end == 100.0);
    REQUIRE(rknq_problem_builtin_info("sho", &norm, &x_end) == RKNQ_OK);
    CHECK(norm == RKNQ_NORM_MIXED);
    CHECK(x_end == 200.0);

    rknq_problem* nope = nullptr;
    CHECK(rknq_problem_builtin("lorenz", &nope) == RKNQ_ERROR_UNKNOWN_NAME);
    rknq_problem_destroy(p);
}

TEST_CASE("quenched integration end to end") {
    rknq_problem* p = nullptr;
    REQUIRE(rknq_problem_builtin("exp1000", &p) == RKNQ_OK);
    const rknq_tableau *r = nullptr, *v = nullptr, *z = nullptr;
    rknq_tableau_builtin("RKN4", &r);
    rknq_tableau_builtin("RKN5", &v);
    rknq_tableau_builtin("RKN10", &z);

    rknq_tolerance tol{1e-10, 1e-10, RKNQ_NORM_ABSOLUTE};
    rknq_trajectory* tr = nullptr;
    REQUIRE(rknq_integrate_quenched(r, v, z, p, tol, 100.0, -1.0, &tr) == RKNQ_OK);

    rknq_run_summary s{};
    REQUIRE(rknq_trajectory_summary(tr, &s) == RKNQ_OK);
    CHECK(s.node_count > 100);
    CHECK(s.max_true_err <= 1e-10);
    CHECK(s.max_global_err_est <= 1e-10);
    CHECK(s.f_evals_working == 7 * (s.steps_accepted + s.steps_rejected));
    CHECK(s.f_evals_tracker == 16 * s.steps_accepted);

    // last node sits on the requested endpoint
    double x = 0.0, pos = 0.0, vel = 0.0;
    REQUIRE(rknq_trajectory_node_state(tr, s.node_count - 1, &x, &pos, &vel) == RKNQ_OK);
    CHECK(x == doctest::Approx(100.0).epsilon(1e-12));
    CHECK(pos == doctest::Approx(1000.0).epsilon(1e-9));

    double h = 0.0, el = 0.0, eg = 0.0, et = 0.0;
    int quenched = -1;
    REQUIRE(rknq_trajectory_node_errors(tr, 0, &h, &el, &eg, &et, &quenched) == RKNQ_OK);
    CHECK(std::isnan(h));  // no step into node 0
    CHECK(std::isnan(el));
    CHECK(eg == 0.0);
    CHECK(et == 0.0);
    CHECK(quenched == 0);

    CHECK(rknq_trajectory_node_state(tr, s.node_count, &x, &pos, &vel) ==
          RKNQ_ERROR_INVALID_ARGUMENT);

    rknq_trajectory_destroy(tr);
    rknq_problem_destroy(p);
}

TEST_CASE("custom problems via callbacks") {
    rknq_problem* p = nullptr;
    const double y0 = 1.0, y0p = 0.0;
    REQUIRE(rknq_problem_create(1, 0.0, &y0, &y0p, cosine_accel, nullptr, cosine_reference,
                                nullptr, &p) == RKNQ_OK);

    const rknq_tableau* t = nullptr;
    rknq_tableau_builtin("RKN5", &t);
    rknq_trajectory* tr = nullptr;
    REQUIRE(rknq_integrate_fixed(t, p, 0.05, 3.0, RKNQ_NORM_MIXED, &tr) == RKNQ_OK);
    rknq_run_summary s{};
    REQUIRE(rknq_trajectory_summary(tr, &s) == RKNQ_OK);
    CHECK(s.max_true_err < 1e-9);
    CHECK(std::isnan(s.max_global_err_est));

    double h = 0.0, el = 0.0, eg = 0.0, et = 0.0;
    int q = -1;
    REQUIRE(rknq_trajectory_node_errors(tr, 1, &h, &el, &eg, &et, &q) == RKNQ_OK);
    CHECK(h == doctest::Approx(0.05));
    CHECK(std::isnan(el));  // fixed runs carry no local estimate
    CHECK(std::isnan(eg));  // no tracker chain
    CHECK(et < 1e-9);

    rknq_trajectory_destroy(tr);
    rknq_problem_destroy(p);
}

TEST_CASE("first-order transform via callbacks") {
    ExpField field{std::log(1000.0) / 100.0};
    rknq_first_order* fo = nullptr;
    const double y0 = 1.0;
    REQUIRE(rknq_first_order_create(1, 0.0, &y0, exp_field, &field, exp_jacobian, &field,
                                    nullptr, nullptr, 1, &fo) == RKNQ_OK);
    rknq_problem* p = nullptr;
    REQUIRE(rknq_first_order_transform(fo, &p) == RKNQ_OK);
    CHECK(rknq_problem_dim(p) == 1);
    CHECK(rknq_problem_has_reference(p) == 0);

    // adaptive pair run against the analytic solution
    const rknq_tableau *r = nullptr, *v = nullptr;
    rknq_tableau_builtin("RKN4", &r);
    rknq_tableau_builtin("RKN5", &v);
    rknq_tolerance tol{1e-10, HUGE_VAL, RKNQ_NORM_ABSOLUTE};
    rknq_trajectory* tr = nullptr;
    REQUIRE(rknq_integrate_local(r, v, p, tol, 10.0, -1.0, &tr) == RKNQ_OK);

    const long n = rknq_trajectory_node_count(tr);
    double x = 0.0, pos = 0.0, vel = 0.0;
    REQUIRE(rknq_trajectory_node_state(tr, n - 1, &x, &pos, &vel) == RKNQ_OK);
    CHECK(pos == doctest::Approx(std::exp(field.lam * x)).epsilon(1e-9));
    CHECK(vel == doctest::Approx(field.lam * std::exp(field.lam * x)).epsilon(1e-9));

    rknq_trajectory_destroy(tr);
    rknq_problem_destroy(p);
    rknq_first_order_destroy(fo);
}

TEST_CASE("failing evaluators surface as evaluation errors") {
    rknq_problem* p = nullptr;
    const double y0 = 1.0, y0p = 0.0;
    CHECK(rknq_problem_create(1, 0.0, &y0, &y0p, failing_eval, nullptr, nullptr, nullptr, &p) ==
          RKNQ_ERROR_EVALUATION);
    CHECK(rknq_problem_create(0, 0.0, &y0, &y0p, cosine_accel, nullptr, nullptr, nullptr, &p) ==
          RKNQ_ERROR_INVALID_ARGUMENT);
}

TEST_CASE("convergence study rows") {
    rknq_problem* p = nullptr;
    REQUIRE(rknq_problem_builtin("sho", &p) == RKNQ_OK);
    const rknq_tableau* t = nullptr;
    rknq_tableau_builtin("RKN4", &t);

    const double hs[] = {0.2, 0.1, 0.05, 0.025};
    rknq_convergence_row rows[4];
    REQUIRE(rknq_convergence_study(t, p, hs, 4, 2.0 * std::acos(-1.0), rows) == RKNQ_OK);
    CHECK_FALSE(rows[0].has_slope);
    CHECK(std::isnan(rows[0].slope));
    for (int i = 1; i < 4; ++i) {
        CHECK(rows[i].has_slope);
        CHECK(rows[i].slope == doctest::Approx(4.0).epsilon(0.075));
        CHECK(rows[i].err < rows[i - 1].err);
    }
    rknq_problem_destroy(p);
}
