#include <doctest.h>

#include "nlbem/scattering_solver.hpp"
#include "nlbem/verify.hpp"

using namespace nlbem;

namespace {

SolverConfig small_config(int m, int N, double alpha)
{
    SolverConfig c;
    c.alpha = alpha;
    c.m = m;
    c.N = N;
    c.tau = 3.0 / N;
    c.wave.t0 = 1.0;
    c.wave.c = 20.0;
    return c;
}

}// namespace

TEST_SUITE("scattering_solver") {

TEST_CASE("incident wave")
{
    IncidentWave w;
    const Vec3 x(0.1, 0.2, 0.3);
    CHECK(w.E(w.t0 + 0.3, x).isApprox(Vec3(1, 0, 0)));
    CHECK(w.H(w.t0 + 0.3, x).isApprox(Vec3(0, 1, 0)));
    w.polarization = Vec3(0, 0, 1);
    CHECK_THROWS_AS(w.validate(), ValidationError);
}

TEST_CASE("configuration checks")
{
    SolverConfig c = small_config(3, 8, 0.5);
    CHECK(c.effective_sigma() == doctest::Approx(1.0 / 3.0));
    c.sigma = 0.0;
    CHECK_THROWS_AS(c.validate(), ValidationError);
    c.allow_unshifted = true;
    CHECK_NOTHROW(c.validate());
    CHECK(small_config(2, 8, 0.5).effective_sigma() == 0.0);
    CHECK_THROWS_AS(small_config(2, 8, 1.5).validate(), ValidationError);
}

TEST_CASE("zero data and determinism")
{
    const CheckResult r = check_zero_data_and_determinism();
    INFO(r.detail);
    CHECK(r.passed);
}

TEST_CASE("alpha = 1 reduces to the linear scheme")
{
    const CheckResult r = check_alpha_one_linearity();
    INFO(r.detail);
    CHECK(r.passed);
}

TEST_CASE("contour bounds enclose every stage frequency")
{
    for (int m : {2, 3}) {
        const CQContext ctx = make_cq_context(radau_tableau(m), 3.0 / 64, 64);
        const double sigma = 0.25;
        const FrequencyBounds b = contour_bounds(ctx, sigma);
        CHECK(b.min_real > 0.0);
        for (int l = 0; l <= ctx.M / 2; ++l) {
            const SymbolPoint y = ctx.symbol(l);
            for (Eigen::Index k = 0; k < y.lambda.size(); ++k) {
                const cplx s = y.lambda[k] / ctx.tau + sigma;
                CHECK(std::abs(s) <= b.max_abs);
                CHECK(std::abs(s.imag()) <= b.max_imag);
                CHECK(s.real() >= b.min_real);
            }// for
        }// for
    }// for
}

TEST_CASE("contour synthesis of the first weight")
{
    const RTSpace sp(make_cube_mesh(Vec3::Zero(), 1.0, 1));
    SolverConfig c = small_config(2, 12, 0.5);
    c.contour_points = 2 * (c.N + 1);
    const ScatteringSolver s(sp, c);
    CHECK((s.contour_w0() - s.w0()).norm() < 1e-8 * s.w0().norm());
}

TEST_CASE("converged stage systems satisfy an independently assembled residual")
{
    const RTSpace sp(make_cube_mesh(Vec3::Zero(), 1.0, 1));
    SolverConfig c = small_config(2, 32, 0.5);
    ScatteringSolver solver(sp, c);
    const DensityHistory h = solver.run();
    const CQContext& ctx = solver.context();
    const auto W = explicit_stage_weights(sp, ctx, 0.0);
    const int m = 2;
    const Eigen::Index D = sp.dim();
    const NonlinearTerm term(sp, PowerLaw(c.alpha, 0.0));
    auto stacked = [&](int j) {
        Eigen::VectorXd u(2 * m * D);
        for (int i = 0; i < m; ++i) {
            u.segment(i * D, D) = h.phi[j].col(i);
            u.segment(m * D + i * D, D) = h.psi[j].col(i);
        }
        return u;
    };
    double worst = 0.0;
    for (int n = 0; n <= c.N; ++n) {
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(2 * m * D);
        for (int i = 0; i < m; ++i)
            rhs.segment(i * D, D) = incident_rhs(sp, c.wave, ctx.stage_time(n, i));
        for (int j = 0; j < n; ++j)
            rhs -= W[n - j] * stacked(j);
        Eigen::VectorXd R = W[0] * stacked(n) - rhs;
        for (int i = 0; i < m; ++i) {
            const double t = ctx.stage_time(n, i);
            R.segment(i * D, D) += assemble_nonlinear_residual(sp, PowerLaw(c.alpha, 0.0), h.phi[n].col(i),
                                                               [&](int tri, const Vec3& x) {
                                                                   return Vec3(c.wave.H(t, x).cross(sp.mesh().normals()[tri]));
                                                               });
        }
        if (rhs.norm() > 0.0)
            worst = std::max(worst, R.norm() / rhs.norm());
    }
    CAPTURE(worst);
    CHECK(worst < 1e-9);
}

TEST_CASE("shifted and unshifted runs agree at m = 2")
{
    const RTSpace sp(make_cube_mesh(Vec3::Zero(), 1.0, 1));
    SolverConfig a = small_config(2, 48, 0.5);
    SolverConfig b = a;
    b.sigma = 1.0 / 3.0;
    const DensityHistory ha = ScatteringSolver(sp, a).run();
    const DensityHistory hb = ScatteringSolver(sp, b).run();
    const ErrorNorms d = error_norms(ha, hb, sp, radau_tableau(2));
    DensityHistory zero = ha;
    for (auto& p : zero.phi)
        p.setZero();
    for (auto& p : zero.psi)
        p.setZero();
    const ErrorNorms ref = error_norms(ha, zero, sp, radau_tableau(2));
    CAPTURE(d.phi / ref.phi);
    CAPTURE(d.psi / ref.psi);
    CHECK(d.phi < 0.05 * ref.phi);
    CHECK(d.psi < 0.05 * ref.psi);
}

TEST_CASE("error norms: identity and linearity")
{
    const RTSpace sp(make_cube_mesh(Vec3::Zero(), 1.0, 1));
    const DensityHistory h = ScatteringSolver(sp, small_config(2, 16, 0.5)).run();
    CHECK(error_norms(h, h, sp, radau_tableau(2)).phi == 0.0);
    DensityHistory twice = h, zero = h;
    for (int n = 0; n < h.steps(); ++n) {
        twice.phi[n] *= 2.0;
        twice.psi[n] *= 2.0;
        zero.phi[n].setZero();
        zero.psi[n].setZero();
    }
    const ErrorNorms a = error_norms(twice, h, sp, radau_tableau(2));
    const ErrorNorms b = error_norms(h, zero, sp, radau_tableau(2));
    CHECK(a.phi == doctest::Approx(b.phi).epsilon(1e-14));
    CHECK(a.psi == doctest::Approx(b.psi).epsilon(1e-14));
}

TEST_CASE("stability under time step refinement")
{
    const RTSpace sp(make_cube_mesh(Vec3::Zero(), 1.0, 1));
    double prev = 0.0;
    for (int N : {16, 32, 64}) {
        const DensityHistory h = ScatteringSolver(sp, small_config(2, N, 0.5)).run();
        double sup = 0.0;
        for (int n = 0; n < h.steps(); ++n)
            sup = std::max(sup, lp_norm(sp, h.phi[n].col(1), 1.5));
        if (prev > 0.0) {
            CHECK(sup < 2.0 * prev);
            CHECK(sup > 0.5 * prev);
        }
        prev = sup;
    }
}

TEST_CASE("steps must be solved in order")
{
    const RTSpace sp(make_cube_mesh(Vec3::Zero(), 1.0, 1));
    ScatteringSolver s(sp, small_config(2, 8, 0.5));
    CHECK_THROWS_AS(s.step(1), ValidationError);
}

TEST_CASE("field evaluation: parallel equals serial")
{
    const RTSpace sp(make_cube_mesh(Vec3::Zero(), 1.0, 1));
    ScatteringSolver s(sp, small_config(2, 16, 0.5));
    const DensityHistory h = s.run();
    const std::vector<Vec3> pts{Vec3(3, 0, 0), Vec3(0, -2.5, 1)};
    const FieldSamples a = evaluate_fields(sp, s.context(), s.sigma(), h, pts, Execution::serial);
    const FieldSamples b = evaluate_fields(sp, s.context(), s.sigma(), h, pts, Execution::parallel);
    double diff = 0.0, ref = 0.0;
    for (size_t p = 0; p < pts.size(); ++p)
        for (size_t k = 0; k < a.E[p].size(); ++k) {
            diff = std::max(diff, (a.E[p][k] - b.E[p][k]).norm());
            ref = std::max(ref, a.E[p][k].norm());
        }
    CHECK(ref > 0.0);
    CHECK(diff <= 1e-13 * ref);
}

}
