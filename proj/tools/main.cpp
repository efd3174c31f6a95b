// Batch front end: integrates the built-in problems and writes CSV
// trajectories, error curves, or convergence tables. Uses only the C API.

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rknq.h"

namespace {

constexpr int kExitBadArgs = 1;
constexpr int kExitIntegrationFailure = 2;

struct Options {
    std::string problem;
    std::string method;
    double tol_local = 1e-8;
    double tol_global = -1.0;  // default: same as tol_local
    double x_end = -1.0;       // default: problem-specific
    double h0 = -1.0;          // default: (x_end - x0)/1000
    double fixed_h = -1.0;
    std::string emit = "trajectory";
    std::string output;
};

void write_field(std::FILE* f, double v, bool leading_comma = true) {
    if (leading_comma) std::fputc(',', f);
    if (std::isnan(v)) return;  // empty field
    std::fprintf(f, "%.16e", v);
}

int fail(rknq_status s, const char* what) {
    std::fprintf(stderr, "error: %s: %s (%s)\n", what, rknq_last_error(), rknq_status_name(s));
    return s == RKNQ_ERROR_INVALID_ARGUMENT || s == RKNQ_ERROR_UNKNOWN_NAME
               ? kExitBadArgs
               : kExitIntegrationFailure;
}

int emit_trajectory(const rknq_trajectory* tr, std::FILE* f) {
    const int dim = rknq_trajectory_dim(tr);
    std::fputs("x", f);
    for (int j = 1; j <= dim; ++j) std::fprintf(f, ",w_%d", j);
    for (int j = 1; j <= dim; ++j) std::fprintf(f, ",wprime_%d", j);
    std::fputc('\n', f);

    std::vector<double> pos(static_cast<std::size_t>(dim)), vel(static_cast<std::size_t>(dim));
    const long n = rknq_trajectory_node_count(tr);
    for (long i = 0; i < n; ++i) {
        double x = 0.0;
        if (rknq_status s = rknq_trajectory_node_state(tr, i, &x, pos.data(), vel.data());
            s != RKNQ_OK)
            return fail(s, "reading trajectory node");
        write_field(f, x, false);
        for (int j = 0; j < dim; ++j) write_field(f, pos[static_cast<std::size_t>(j)]);
        for (int j = 0; j < dim; ++j) write_field(f, vel[static_cast<std::size_t>(j)]);
        std::fputc('\n', f);
    }
    return 0;
}

int emit_errors(const rknq_trajectory* tr, std::FILE* f) {
    std::fputs("x,h,err_local_est,err_global_est,err_true,quench\n", f);
    const long n = rknq_trajectory_node_count(tr);
    for (long i = 0; i < n; ++i) {
        double x = 0.0, h = 0.0, el = 0.0, eg = 0.0, et = 0.0;
        int quenched = 0;
        if (rknq_status s = rknq_trajectory_node_state(tr, i, &x, nullptr, nullptr); s != RKNQ_OK)
            return fail(s, "reading trajectory node");
        if (rknq_status s = rknq_trajectory_node_errors(tr, i, &h, &el, &eg, &et, &quenched);
            s != RKNQ_OK)
            return fail(s, "reading trajectory errors");
        write_field(f, x, false);
        write_field(f, h);
        write_field(f, el);
        write_field(f, eg);
        write_field(f, et);
        std::fprintf(f, ",%d\n", quenched);
    }
    return 0;
}

int emit_convergence(const rknq_tableau* tab, const rknq_problem* prob, double h0, double x_end,
                     std::FILE* f) {
    constexpr int kRows = 5;  // h halved four times
    double hs[kRows];
    hs[0] = h0;
    for (int i = 1; i < kRows; ++i) hs[i] = hs[i - 1] / 2.0;

    rknq_convergence_row rows[kRows];
    if (rknq_status s = rknq_convergence_study(tab, prob, hs, kRows, x_end, rows); s != RKNQ_OK)
        return fail(s, "convergence study");

    std::fputs("h,err_global_true,observed_order\n", f);
    for (const auto& row : rows) {
        write_field(f, row.h, false);
        write_field(f, row.err);
        write_field(f, row.has_slope ? row.slope : NAN);
        std::fputc('\n', f);
    }
    return 0;
}

void print_summary(const rknq_trajectory* tr) {
    rknq_run_summary s{};
    if (rknq_trajectory_summary(tr, &s) != RKNQ_OK) return;
    std::printf("nodes=%ld accepted=%ld rejected=%ld quenches=%ld", s.node_count,
                s.steps_accepted, s.steps_rejected, s.quench_count);
    if (!std::isnan(s.max_global_err_est))
        std::printf(" max_est_global_err=%.3e", s.max_global_err_est);
    if (!std::isnan(s.max_true_err)) std::printf(" max_true_err=%.3e", s.max_true_err);
    std::printf(" f_evals=%ld", s.f_evals_working + s.f_evals_tracker);
    if (s.f_evals_tracker > 0)
        std::printf(" (pair %ld, tracker %ld)", s.f_evals_working, s.f_evals_tracker);
    std::printf("\n");
}

}  // namespace

int main(int argc, char** argv) {
    Options opt;
    CLI::App app{"Nystrom integration of built-in benchmark problems with local and "
                 "global error control"};
    app.add_option("--problem", opt.problem, "Problem name: exp1000 or sho")->required();
    app.add_option("--method", opt.method,
                   "Method: rkn4, rkn5, rkn10 (fixed step), rkn45 (adaptive pair), or "
                   "rkn45q10 (adaptive pair with global-error quenching)")
        ->required();
    app.add_option("--tol-local", opt.tol_local, "Local error tolerance (adaptive methods)");
    app.add_option("--tol-global", opt.tol_global,
                   "Global error tolerance (rkn45q10 only; default: same as --tol-local)");
    app.add_option("--x-end", opt.x_end, "Interval end (default: problem-specific)");
    app.add_option("--h0", opt.h0, "Initial stepsize (default: (x_end - x0)/1000)");
    app.add_option("--fixed-h", opt.fixed_h,
                   "Fixed stepsize; required by rkn4/rkn5/rkn10, invalid otherwise. For "
                   "--emit convergence it is the coarsest h of the halving sequence");
    app.add_option("--emit", opt.emit, "Output kind: trajectory, errors, or convergence")
        ->check(CLI::IsMember({"trajectory", "errors", "convergence"}));
    app.add_option("--output", opt.output, "Output CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitBadArgs;
    }

    const bool single = opt.method == "rkn4" || opt.method == "rkn5" || opt.method == "rkn10";
    const bool pair = opt.method == "rkn45";
    const bool quenched = opt.method == "rkn45q10";
    if (!single && !pair && !quenched) {
        std::fprintf(stderr, "error: unknown method '%s'\n", opt.method.c_str());
        return kExitBadArgs;
    }
    if (single && opt.fixed_h <= 0.0) {
        std::fprintf(stderr, "error: method %s integrates with a fixed step; pass --fixed-h\n",
                     opt.method.c_str());
        return kExitBadArgs;
    }
    if (!single && opt.fixed_h > 0.0) {
        std::fprintf(stderr, "error: --fixed-h is only valid with rkn4/rkn5/rkn10\n");
        return kExitBadArgs;
    }
    if (opt.emit == "convergence" && !single) {
        std::fprintf(stderr, "error: --emit convergence needs a single fixed-step method\n");
        return kExitBadArgs;
    }

    rknq_norm_rule norm = RKNQ_NORM_MIXED;
    double default_x_end = 0.0;
    if (rknq_status s = rknq_problem_builtin_info(opt.problem.c_str(), &norm, &default_x_end);
        s != RKNQ_OK)
        return fail(s, "looking up problem");
    rknq_problem* prob = nullptr;
    if (rknq_status s = rknq_problem_builtin(opt.problem.c_str(), &prob); s != RKNQ_OK)
        return fail(s, "creating problem");

    const double x_end = app.count("--x-end") > 0 ? opt.x_end : default_x_end;
    rknq_tolerance tol{opt.tol_local,
                       app.count("--tol-global") > 0 ? opt.tol_global : opt.tol_local, norm};
    if (!quenched) tol.tol_global = HUGE_VAL;
    if (x_end <= rknq_problem_x0(prob) || tol.tol_local <= 0.0 || tol.tol_global <= 0.0) {
        std::fprintf(stderr, "error: x-end must exceed the start and tolerances must be "
                             "positive\n");
        rknq_problem_destroy(prob);
        return kExitBadArgs;
    }

    const rknq_tableau* rkn4 = nullptr;
    const rknq_tableau* rkn5 = nullptr;
    const rknq_tableau* rkn10 = nullptr;
    rknq_tableau_builtin("RKN4", &rkn4);
    rknq_tableau_builtin("RKN5", &rkn5);
    rknq_tableau_builtin("RKN10", &rkn10);
    const rknq_tableau* single_tab =
        opt.method == "rkn4" ? rkn4 : (opt.method == "rkn5" ? rkn5 : rkn10);

    std::FILE* out = std::fopen(opt.output.c_str(), "w");
    if (!out) {
        std::fprintf(stderr, "error: cannot open output file '%s'\n", opt.output.c_str());
        rknq_problem_destroy(prob);
        return kExitBadArgs;
    }

    int rc = 0;
    rknq_trajectory* tr = nullptr;
    if (opt.emit == "convergence") {
        rc = emit_convergence(single_tab, prob, opt.fixed_h, x_end, out);
    } else {
        rknq_status s = RKNQ_OK;
        if (single)
            s = rknq_integrate_fixed(single_tab, prob, opt.fixed_h, x_end, norm, &tr);
        else if (pair)
            s = rknq_integrate_local(rkn4, rkn5, prob, tol, x_end, opt.h0, &tr);
        else
            s = rknq_integrate_quenched(rkn4, rkn5, rkn10, prob, tol, x_end, opt.h0, &tr);
        if (s != RKNQ_OK) {
            rc = fail(s, "integration");
        } else {
            rc = opt.emit == "errors" ? emit_errors(tr, out) : emit_trajectory(tr, out);
            if (rc == 0) print_summary(tr);
        }
    }

    std::fclose(out);
    rknq_trajectory_destroy(tr);
    rknq_problem_destroy(prob);
    return rc;
}
