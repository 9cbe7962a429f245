#include <doctest.h>

#include <random>

#include "nlbem/cq_engine.hpp"
#include "nlbem/verify.hpp"

using namespace nlbem;

TEST_SUITE("cq_engine") {

TEST_CASE("Radau IIA tableaux")
{
    for (int m : {2, 3}) {
        const ButcherTableau t = radau_tableau(m);
        CHECK(t.b.sum() == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(t.c[m - 1] == doctest::Approx(1.0).epsilon(1e-15));
        CHECK((t.A.rowwise().sum() - t.c).norm() < 1e-14);
        // stiffly accurate
        CHECK((t.A.row(m - 1).transpose() - t.b).norm() < 1e-14);
        // quadrature order 2m-1
        for (int k = 0; k < 2 * m - 1; ++k)
            CHECK(t.b.dot(t.c.array().pow(k).matrix()) == doctest::Approx(1.0 / (k + 1)).epsilon(1e-14));
    }
    CHECK_THROWS_AS(radau_tableau(4), ValidationError);
}

TEST_CASE("differentiation symbol, two forms agree")
{
    for (int m : {2, 3}) {
        const ButcherTableau t = radau_tableau(m);
        for (cplx z : {cplx(0.3, 0.2), cplx(-0.5, 0.1), cplx(0.0, 0.9)}) {
            const Eigen::MatrixXcd a = delta(t, z), b = delta_sherman_morrison(t, z);
            CHECK((a - b).norm() < 1e-12 * a.norm());
            const SymbolPoint sp = decompose_symbol(a, z);
            CHECK((sp.E * sp.lambda.asDiagonal() * sp.Einv - a).norm() < 1e-11 * a.norm());
            // A-stability: spectrum in the right half plane
            CHECK(sp.lambda.real().minCoeff() > 0.0);
        }
    }
}

TEST_CASE("weights of L(s) = 1 are the identity impulse")
{
    const CQContext ctx = make_cq_context(radau_tableau(2), 0.1, 20);
    const auto W = cq_weights(ctx, [](cplx) { return Eigen::MatrixXcd::Identity(1, 1); }, 20);
    CHECK((W[0] - Eigen::MatrixXcd::Identity(2, 2)).norm() < 1e-12);
    for (int n = 1; n <= 20; ++n)
        CHECK(W[n].norm() < 1e-9);   // contour error ~ sqrt(eps)
    CHECK(imaginary_residue(W) < 1e-9);
}

TEST_CASE("weights of L(s) = s differentiate exactly at step 0")
{
    const ButcherTableau tab = radau_tableau(3);
    const double tau = 0.05;
    const CQContext ctx = make_cq_context(tab, tau, 16);
    const auto W = cq_weights(ctx, [](cplx s) { return Eigen::MatrixXcd::Constant(1, 1, s); }, 16);
    const Eigen::MatrixXd Ainv = tab.A.inverse();
    CHECK((W[0].real() - Ainv / tau).norm() < 1e-9 * Ainv.norm() / tau);
}

TEST_CASE("scalar convergence orders")
{
    const CheckResult r = check_cq_scalar_orders();
    INFO(r.detail);
    CHECK(r.passed);
}

TEST_CASE("partial integration bound and coercivity")
{
    const CheckResult pi = check_partial_integration(128);
    INFO(pi.detail);
    CHECK(pi.passed);
    const CheckResult co = check_coercivity(100, 32, 9);
    INFO(co.detail);
    CHECK(co.passed);
}

TEST_CASE("coercivity margin of a constant sequence")
{
    const ButcherTableau tab = radau_tableau(2);
    std::vector<Eigen::VectorXd> f(10, Eigen::VectorXd::Ones(2));
    CHECK(discrete_coercivity_margin(tab, f, 0.1, 1.0) >= 0.0);
    CHECK(check_discrete_coercivity(tab, f, 0.1, 1.0));
}

TEST_CASE("least squares slope")
{
    CHECK(least_squares_slope({1, 2, 3}, {2, 4, 6}) == doctest::Approx(2.0));
}

}
