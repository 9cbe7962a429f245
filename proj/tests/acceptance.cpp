// Acceptance criteria 1-11, one PASS/FAIL line each.
// Usage: acceptance [--report file] [k ...]  (default: all criteria)

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <string>

#include "nlbem/experiment.hpp"
#include "nlbem/verify.hpp"

using namespace nlbem;

namespace {

constexpr std::uint64_t seed = 20240611;

struct Line {
    bool passed;
    std::string detail;
};

Line from(const CheckResult& r)
{
    return {r.passed, r.detail + " (" + std::to_string(r.seconds) + " s)"};
}

Line both(const CheckResult& a, const CheckResult& b)
{
    return {a.passed && b.passed, a.name + ": " + (a.passed ? "pass" : "FAIL") + ", " + a.detail + "; " + b.name +
                                      ": " + (b.passed ? "pass" : "FAIL") + ", " + b.detail};
}

double now()
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
}

std::string fmt(const char* f, double a, double b = 0, double c = 0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

Line convergence()
{
    const double t_start = now();
    const std::string dir = NLBEM_SOURCE_DIR "/configs/";
    std::string detail;
    bool ok = true;
    try {
        ExperimentConfig ct = load_config(dir + "converge_time.json");
        const ConvergenceTable tt = run_convergence(ct, Axis::time);
        const double fit = tt.fitted_order();
        const double finest = tt.orders().back();
        const bool tok = fit >= 1.3 && fit <= 2.5 && finest >= 1.7;
        detail += fmt("time: order %.3f in [1.3,2.5], finest pair %.3f >= 1.7", fit, finest);
        detail += tok ? " ok" : " FAIL";
        detail += " (pairs";
        for (double o : tt.orders())
            detail += fmt(" %.2f", o);
        detail += ")";
        ok = ok && tok;

        ExperimentConfig cs = load_config(dir + "converge_space.json");
        const ConvergenceTable ts = run_convergence(cs, Axis::space);
        const double sfit = ts.fitted_order();
        const bool sok = sfit >= 0.6 && sfit <= 1.5;
        detail += fmt("; space: order %.3f in [0.6,1.5]", sfit);
        detail += sok ? " ok" : " FAIL";
        detail += " (pairs";
        for (double o : ts.orders())
            detail += fmt(" %.2f", o);
        detail += ")";
        ok = ok && sok;
    }
    catch (const std::exception& e) {
        ok = false;
        detail += std::string("; error: ") + e.what();
    }
    const double secs = now() - t_start;
    const bool tok = secs < 3600.0;
    detail += fmt("; runtime %.0f s < 3600 s", secs);
    return {ok && tok, detail};
}

Line run(int k)
{
    switch (k) {
    case 1: return from(check_nonlinearity_inequalities(100000, seed));
    case 2: return from(check_inverse_roundtrip(100000, seed + 1));
    case 3: return from(check_cq_scalar_orders());
    case 4: return from(check_partial_integration(512));
    case 5: return from(check_coercivity(1000, 64, seed + 2));
    case 6: return both(check_calderon_positivity(2, 100, seed + 3), check_calderon_projector());
    case 7: return from(check_off_surface_pde(5, seed + 4));
    case 8: return both(check_causality(-2.0), check_causality(2.0));
    case 9: return convergence();
    case 10: return from(check_alpha_one_linearity());
    case 11: return from(check_zero_data_and_determinism());
    }
    return {false, "no such criterion"};
}

}// namespace

int main(int argc, char** argv)
{
    std::set<int> which;
    std::ofstream report;
    for (int i = 1; i < argc; ++i) {
        if (std::string(argv[i]) == "--report" && i + 1 < argc)
            report.open(argv[++i]);
        else
            which.insert(std::atoi(argv[i]));
    }
    if (which.empty())
        for (int k = 1; k <= 11; ++k)
            which.insert(k);
    int failed = 0;
    for (int k : which) {
        Line l;
        try {
            l = run(k);
        }
        catch (const std::exception& e) {
            l = {false, std::string("exception: ") + e.what()};
        }
        char head[64];
        std::snprintf(head, sizeof head, "criterion %d: %s  ", k, l.passed ? "PASS" : "FAIL");
        std::printf("%s%s\n", head, l.detail.c_str());
        std::fflush(stdout);
        if (report)
            report << head << l.detail << std::endl;
        failed += !l.passed;
    }
    return failed == 0 ? 0 : 1;
}
