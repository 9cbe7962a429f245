#include <doctest.h>

#include <random>

#include "nlbem/nonlinearity.hpp"
#include "nlbem/verify.hpp"

using namespace nlbem;

TEST_SUITE("nonlinearity") {

TEST_CASE("power law values")
{
    const PowerLaw pl(0.5);
    const Vec3 x(3.0, 0.0, 4.0);
    CHECK((a_eval(pl, x) - x / std::sqrt(5.0)).norm() < 1e-15);
    CHECK(a_eval(pl, Vec3::Zero()).norm() == 0.0);
    CHECK((a_eval(PowerLaw(1.0), x) - x).norm() == 0.0);
    CHECK_THROWS_AS(PowerLaw(1.5), ValidationError);
    CHECK_THROWS_AS(PowerLaw(0.0), ValidationError);
}

TEST_CASE("monotonicity and Hoelder bound on random pairs")
{
    const CheckResult r = check_nonlinearity_inequalities(20000, 7);
    INFO(r.detail);
    CHECK(r.passed);
}

TEST_CASE("inverse round trip")
{
    const CheckResult r = check_inverse_roundtrip(20000, 11);
    INFO(r.detail);
    CHECK(r.passed);
}

TEST_CASE("jacobian matches central differences")
{
    std::mt19937_64 rng(3);
    std::normal_distribution<double> nd;
    for (double alpha : {0.3, 0.5, 0.9, 1.0}) {
        const PowerLaw pl(alpha, 0.0);
        for (int k = 0; k < 20; ++k) {
            const Vec3 x(nd(rng), nd(rng), nd(rng));
            const Mat3 J = a_jacobian(pl, x);
            const double h = 1e-6;
            for (int j = 0; j < 3; ++j) {
                const Vec3 e = Vec3::Unit(j) * h;
                const Vec3 fd = (a_eval(pl, x + e) - a_eval(pl, x - e)) / (2 * h);
                CHECK((J.col(j) - fd).norm() < 1e-7 * (1.0 + J.norm()));
            }
            // symmetric positive definite
            CHECK((J - J.transpose()).norm() < 1e-14 * J.norm());
            CHECK(Eigen::SelfAdjointEigenSolver<Mat3>(J).eigenvalues().minCoeff() > 0.0);
        }
    }
}

TEST_CASE("Galerkin term: jacobian against differences of the residual")
{
    const RTSpace sp(make_cube_mesh(Vec3::Zero(), 1.0, 2));
    const NonlinearTerm term(sp, PowerLaw(0.5, 0.0));
    std::mt19937_64 rng(5);
    std::normal_distribution<double> nd;
    Eigen::VectorXd c(sp.dim());
    for (int i = 0; i < c.size(); ++i)
        c[i] = nd(rng);
    std::vector<Vec3> h(term.n_points());
    for (auto& v : h)
        v = Vec3(nd(rng), nd(rng), nd(rng));
    const double in = 0.8, out = 1.3;
    const Eigen::MatrixXd J = term.jacobian(c, h, in, out);
    Eigen::VectorXd d(sp.dim());
    for (int i = 0; i < d.size(); ++i)
        d[i] = nd(rng);
    const double eps = 1e-6;
    const Eigen::VectorXd fd = (term.residual(c + eps * d, h, in, out) - term.residual(c - eps * d, h, in, out)) / (2 * eps);
    CHECK((J * d - fd).norm() < 1e-6 * fd.norm());
    // the Galerkin Jacobian of a monotone map is symmetric
    CHECK((J - J.transpose()).norm() < 1e-12 * J.norm());
}

TEST_CASE("alpha = 1 gives the mass matrix")
{
    const RTSpace sp(make_cube_mesh(Vec3::Zero(), 1.0, 2));
    const NonlinearTerm term(sp, PowerLaw(1.0));
    const Eigen::VectorXd c = Eigen::VectorXd::LinSpaced(sp.dim(), -1.0, 2.0);
    const std::vector<Vec3> zero(term.n_points(), Vec3::Zero());
    const Eigen::MatrixXd M = assemble_mass(sp);
    CHECK((term.residual(c, zero) - M * c).norm() < 1e-12 * (M * c).norm());
    CHECK((term.jacobian(c, zero) - M).norm() < 1e-12 * M.norm());
}

TEST_CASE("secant linearization at flagged points")
{
    const RTSpace sp(make_cube_mesh(Vec3::Zero(), 1.0, 1));
    const NonlinearTerm term(sp, PowerLaw(0.5));
    const Eigen::VectorXd c = Eigen::VectorXd::LinSpaced(sp.dim(), 0.5, 1.5);
    const std::vector<Vec3> zero(term.n_points(), Vec3::Zero());
    const std::vector<char> all(term.n_points(), 1);
    // |x|^(alpha-1) I applied to x reproduces a(x), so J_secant c = residual
    const Eigen::MatrixXd S = term.newton_jacobian(c, zero, 1.0, 1.0, &all);
    CHECK((S * c - term.residual(c, zero)).norm() < 1e-10 * c.norm());
}

}
