#include <doctest.h>

#include "nlbem/rt_space.hpp"

using namespace nlbem;

TEST_SUITE("rt_space") {

TEST_CASE("one DOF per edge, zero mean divergence")
{
    const RTSpace sp(make_cube_mesh(Vec3::Zero(), 1.0, 3));
    CHECK(sp.dim() == int(sp.mesh().n_edges()));
    Eigen::VectorXd flux = Eigen::VectorXd::Zero(sp.dim());
    for (size_t t = 0; t < sp.mesh().n_triangles(); ++t)
        for (int k = 0; k < 3; ++k) {
            const LocalBasis& b = sp.local(int(t), k);
            flux[b.dof] += 2.0 * b.coef * sp.mesh().areas()[t];
        }
    CHECK(flux.cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("normal component is continuous across edges")
{
    const RTSpace sp(make_cube_mesh(Vec3(0.3, 0.1, 0), 2.0, 2));
    const SurfaceMesh& m = sp.mesh();
    for (size_t e = 0; e < m.n_edges(); ++e) {
        const Edge& E = m.edges()[e];
        const Vec3 a = m.vertices()[E.v[0]], b = m.vertices()[E.v[1]];
        const Vec3 mid = 0.5 * (a + b);
        Eigen::VectorXd c = Eigen::VectorXd::Zero(sp.dim());
        c[e] = 1.0;
        double fl[2];
        for (int s = 0; s < 2; ++s) {
            const int t = E.tri[s];
            const Vec3 conormal = (b - a).cross(m.normals()[t]).normalized();
            const Vec3 out = conormal.dot(mid - m.centroid(t)) > 0 ? conormal : Vec3(-conormal);
            fl[s] = eval_function(sp, c, t, mid).dot(out);
        }
        // outflow of one side is inflow of the other, unit normal component
        CHECK(fl[0] == doctest::Approx(-fl[1]).epsilon(1e-12));
        CHECK(std::abs(fl[0]) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("pairing is antisymmetric, mass is symmetric positive definite")
{
    const RTSpace sp(make_cube_mesh(Vec3::Zero(), 1.0, 2));
    const Eigen::MatrixXd P = assemble_pairing(sp), M = assemble_mass(sp);
    CHECK((P + P.transpose()).norm() < 1e-14 * P.norm());
    CHECK((M - M.transpose()).norm() < 1e-14 * M.norm());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
    CHECK(es.eigenvalues().minCoeff() > 0.0);
}

TEST_CASE("piecewise constant traces are reproduced")
{
    const RTSpace sp(make_cube_mesh(Vec3(0.5, 0.5, 0.5), 1.0, 2));
    const Vec3 f(0.3, -1.2, 0.7);
    const auto field = [&](const Vec3&) { return f; };
    const Eigen::VectorXd ci = interpolate_trace(sp, field);
    const Eigen::VectorXd cp = project_trace(sp, field);
    CHECK((ci - cp).norm() < 1e-12 * ci.norm());
    for (size_t t = 0; t < sp.mesh().n_triangles(); ++t) {
        const Vec3 x = sp.mesh().centroid(int(t));
        const Vec3 ex = f.cross(sp.mesh().normals()[t]);
        CHECK((eval_function(sp, ci, int(t), x) - ex).norm() < 1e-12);
    }
    // |f x nu| integrated over the surface
    double ref = 0.0;
    for (size_t t = 0; t < sp.mesh().n_triangles(); ++t)
        ref += sp.mesh().areas()[t] * std::pow(f.cross(sp.mesh().normals()[t]).norm(), 1.5);
    CHECK(lp_norm(sp, ci, 1.5) == doctest::Approx(std::pow(ref, 1.0 / 1.5)).epsilon(1e-12));
}

TEST_CASE("interpolation commutes with the surface divergence")
{
    // div_Gamma (F x nu) = nu . curl F, and curl F = (0, 0, 2) for F = (-y, x, 0)
    const RTSpace sp(make_cube_mesh(Vec3(0.2, 0.0, -0.1), 1.0, 3));
    const Eigen::VectorXd c = interpolate_trace(sp, [](const Vec3& x) { return Vec3(-x[1], x[0], 0.0); });
    for (size_t t = 0; t < sp.mesh().n_triangles(); ++t) {
        double div = 0.0;
        for (int k = 0; k < 3; ++k) {
            const LocalBasis& b = sp.local(int(t), k);
            div += 2.0 * b.coef * c[b.dof];
        }
        CHECK(div == doctest::Approx(2.0 * sp.mesh().normals()[t][2]).epsilon(1e-10));
    }
}

}
