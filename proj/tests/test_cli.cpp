// Black-box CLI checks: exit codes, CSV schemas, determinism. Takes the
// CLI binary path as its single argument.

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

std::string g_cli;
int g_failures = 0;

void check(bool ok, const std::string& what) {
    std::printf("%s %s\n", ok ? "ok " : "FAIL", what.c_str());
    if (!ok) ++g_failures;
}

int run(const std::string& args, const std::string& stdout_path = "/dev/null") {
    const std::string cmd = g_cli + " " + args + " >" + stdout_path + " 2>/dev/null";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: %s <cli-binary>\n", argv[0]);
        return 2;
    }
    g_cli = argv[1];
    const std::string dir = "cli_test_out";
    if (std::system(("rm -rf " + dir + " && mkdir -p " + dir).c_str()) != 0) {
        std::fprintf(stderr, "cannot prepare scratch directory\n");
        return 2;
    }

    // bad invocations exit 1
    check(run("--problem nope --method rkn45 --output " + dir + "/x.csv") == 1,
          "unknown problem exits 1");
    check(run("--problem sho --method rk4 --output " + dir + "/x.csv") == 1,
          "unknown method exits 1");
    check(run("--problem sho --method rkn4 --output " + dir + "/x.csv") == 1,
          "single method without --fixed-h exits 1");
    check(run("--problem sho --method rkn45 --fixed-h 0.1 --output " + dir + "/x.csv") == 1,
          "--fixed-h with a pair method exits 1");
    check(run("--problem sho --method rkn45") == 1, "missing --output exits 1");

    // integration failures exit 2
    check(run("--problem exp1000 --method rkn45q10 --tol-local 1e-6 --tol-global 1e-18 "
              "--output " + dir + "/x.csv") == 2,
          "unattainable global tolerance exits 2");

    // quenched run over the exponential problem: every estimate row
    // within tolerance, quench column consistent with the summary
    {
        const std::string out = dir + "/errors.csv";
        const std::string log = dir + "/summary.txt";
        const int rc = run("--problem exp1000 --method rkn45q10 --tol-local 1e-10 "
                           "--tol-global 1e-10 --emit errors --output " + out,
                           log);
        check(rc == 0, "exp1000 rkn45q10 run exits 0");
        const std::string text = slurp(out);
        const auto lines = split(text, '\n');
        check(lines[0] == "x,h,err_local_est,err_global_est,err_true,quench",
              "errors.csv header");
        int quench_ones = 0;
        bool est_ok = true, true_ok = true;
        for (std::size_t i = 1; i + 1 < lines.size(); ++i) {
            const auto fields = split(lines[i], ',');
            if (fields.size() != 6) {
                est_ok = false;
                break;
            }
            if (fields[5] == "1") ++quench_ones;
            if (!fields[3].empty() && std::atof(fields[3].c_str()) > 1e-10) est_ok = false;
            if (!fields[4].empty() && std::atof(fields[4].c_str()) > 1e-10) true_ok = false;
        }
        check(est_ok, "every est-error row <= 1e-10");
        check(true_ok, "every true-error row <= 1e-10");
        check(quench_ones >= 1, "quench column has the quenched nodes");

        const std::string summary = slurp(log);
        const auto pos = summary.find("quenches=");
        const int reported =
            pos == std::string::npos ? -1 : std::atoi(summary.c_str() + pos + 9);
        check(reported == quench_ones, "quench column total matches the reported count");
    }

    // determinism: identical configs produce byte-identical CSVs
    {
        const std::string a = dir + "/a.csv", b = dir + "/b.csv";
        check(run("--problem sho --method rkn45 --tol-local 1e-8 --x-end 25 --emit errors "
                  "--output " + a) == 0,
              "sho rkn45 run exits 0");
        check(run("--problem sho --method rkn45 --tol-local 1e-8 --x-end 25 --emit errors "
                  "--output " + b) == 0,
              "repeat run exits 0");
        check(slurp(a) == slurp(b) && !slurp(a).empty(), "identical configs are byte-identical");
    }

    // trajectory schema carries one column per component
    {
        const std::string out = dir + "/traj.csv";
        check(run("--problem sho --method rkn5 --fixed-h 0.1 --x-end 1 --emit trajectory "
                  "--output " + out) == 0,
              "fixed-step trajectory run exits 0");
        const auto lines = split(slurp(out), '\n');
        check(lines[0] == "x,w_1,w_2,wprime_1,wprime_2", "trajectory.csv header");
        check(split(lines[1], ',').size() == 5, "trajectory row width");
        // node count: ten full steps over [0, 1] plus the initial node
        check(lines.size() >= 12, "trajectory has the expected nodes");
    }

    // convergence table: coarsest h first, orders from the second row
    {
        const std::string out = dir + "/conv.csv";
        check(run("--problem sho --method rkn4 --fixed-h 0.2 --x-end 6.2831853071795862 "
                  "--emit convergence --output " + out) == 0,
              "convergence run exits 0");
        const auto lines = split(slurp(out), '\n');
        check(lines[0] == "h,err_global_true,observed_order", "convergence.csv header");
        const auto first = split(lines[1], ',');
        const auto second = split(lines[2], ',');
        check(first.size() == 3 && first[2].empty(), "first convergence row has no order");
        check(second.size() == 3 && !second[2].empty() &&
                  std::atof(second[2].c_str()) > 3.5 && std::atof(second[2].c_str()) < 4.5,
              "second convergence row shows order ~4");
        check(lines.size() == 7, "five convergence rows");  // header + 5 + trailing newline
    }

    if (g_failures == 0) std::printf("all CLI checks passed\n");
    return g_failures;
}
