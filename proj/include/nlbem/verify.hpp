#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "nlbem/scattering_solver.hpp"

namespace nlbem {

// Time harmonic field of an electric dipole with moment p at x0:
// H = grad G x p, E = (grad div (G p) - s^2 G p) / s, G = e^(-s r)/(4 pi r).
// Solves s E = curl H, s H = -curl E away from x0.
struct DipoleField {
    cplx s;
    Vec3 x0, p;

    void eval(const Vec3& x, CVec3& E, CVec3& H) const;
    // (gamma_T H, -gamma_T E) interpolated into the RT0 space
    std::pair<Eigen::VectorXcd, Eigen::VectorXcd> traces(const RTSpace& space) const;
};

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
    nlohmann::json metrics = nlohmann::json::object();
    double seconds = 0.0;
};

struct VerifyOptions {
    std::uint64_t seed = 20240611;
    int cube_refinement = 2;
};

// Property suites. Each returns pass/fail with the measured quantities.

// (u-v).(a(u)-a(v)) >= alpha (|u|+|v|)^(alpha-1) |u-v|^2 and
// |a(u)-a(v)| <= 2 |u-v|^alpha on random pairs, alpha in {0.1,0.5,0.9,1}
CheckResult check_nonlinearity_inequalities(int pairs, std::uint64_t seed);
// a^-1(a(x)) = x, |x| log-uniform in [1e-6, 1e6]
CheckResult check_inverse_roundtrip(int samples, std::uint64_t seed);
// L(s) = s and 1/s on g(t) = t^5, steps T/16 .. T/256
CheckResult check_cq_scalar_orders();
// partial integration matrix bound at 512 contour samples, m = 2, 3
CheckResult check_partial_integration(int samples);
// time discrete coercivity on random sequences
CheckResult check_coercivity(int sequences, int length, std::uint64_t seed);
// Re u^H C(s) u >= -1e-8 |C| |u|^2 on a cube mesh
CheckResult check_calderon_positivity(int refinement, int samples, std::uint64_t seed);
// ||C c - (-P psi, P phi)/2|| / ||(P psi, P phi)/2|| for the traces of an
// interior dipole field, refinements 1, 2, 4; must decrease monotonically
CheckResult check_calderon_projector();
// P^T = -P
CheckResult check_pairing_antisymmetry(const Eigen::MatrixXd& P);
// ||s E - curl H|| / ||s E|| at random exterior points (central differences)
CheckResult check_off_surface_pde(int points, std::uint64_t seed);
// scattered E at the origin stays below 1e-6 before the geometric arrival
// time (single cube n=4 at (1,0,0), m=2, N=64)
CheckResult check_causality(double t0);
// alpha = 1: one Newton iteration per step, equal to the linear reference
CheckResult check_alpha_one_linearity();
// zero wave gives a zero history; two runs are bit identical
CheckResult check_zero_data_and_determinism();
// alpha outside (0,1] is rejected
CheckResult check_alpha_rejected(double alpha);

std::vector<std::string> verify_suite_names();
// Empty selection runs every suite.
std::vector<CheckResult> run_verify(const std::vector<std::string>& selection, const VerifyOptions& opt = {});
nlohmann::json verify_report(const std::vector<CheckResult>& results);

// Writes the JSON report to path (stdout if empty). Exit code 0 if all
// checks pass, 1 for an unknown selection, 2 otherwise.
int cmd_verify(const std::vector<std::string>& selection, const VerifyOptions& opt, const std::string& path);

}// namespace nlbem
