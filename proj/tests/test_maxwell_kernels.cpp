#include <doctest.h>

#include "nlbem/maxwell_kernels.hpp"
#include "nlbem/verify.hpp"

using namespace nlbem;

TEST_SUITE("maxwell_kernels") {

TEST_CASE("serial and parallel assembly agree")
{
    const RTSpace sp(make_cube_mesh(Vec3::Zero(), 1.0, 2));
    AssemblyOptions ser, par;
    ser.exec = Execution::serial;
    par.exec = Execution::parallel;
    for (cplx s : {cplx(1.0, 0.0), cplx(2.0, 3.0)}) {
        const BoundaryOperators a = assemble_boundary_operators(sp, s, ser);
        const BoundaryOperators b = assemble_boundary_operators(sp, s, par);
        CHECK((a.V - b.V).norm() <= 1e-14 * a.V.norm());
        CHECK((a.K - b.K).norm() <= 1e-14 * a.K.norm());
    }
}

TEST_CASE("frozen bounds at s itself reproduce the per-frequency rule")
{
    const RTSpace sp(make_cube_mesh(Vec3::Zero(), 1.0, 2));
    const cplx s(3.0, 40.0);
    AssemblyOptions frozen;
    frozen.frozen = FrequencyBounds{std::abs(s), std::abs(s.imag()), s.real()};
    const BoundaryOperators a = assemble_boundary_operators(sp, s);
    const BoundaryOperators b = assemble_boundary_operators(sp, s, frozen);
    CHECK((a.V - b.V).norm() <= 1e-14 * a.V.norm());
    CHECK((a.K - b.K).norm() <= 1e-14 * a.K.norm());
    // a larger bound only adds points; checked where the mesh resolves s
    const cplx s1(1.0, 5.0);
    frozen.frozen = FrequencyBounds{4.0 * std::abs(s1), 4.0 * std::abs(s1.imag()), s1.real()};
    const BoundaryOperators d = assemble_boundary_operators(sp, s1);
    const BoundaryOperators e = assemble_boundary_operators(sp, s1, frozen);
    CHECK((d.V - e.V).norm() <= 1e-3 * d.V.norm());
    CHECK((d.V - e.V).norm() > 0.0);
}

TEST_CASE("single layer is symmetric, real frequencies give real matrices")
{
    const RTSpace sp(make_cube_mesh(Vec3::Zero(), 1.0, 2));
    const BoundaryOperators op = assemble_boundary_operators(sp, cplx(1.5, 0.0));
    CHECK((op.V - op.V.transpose()).norm() < 1e-12 * op.V.norm());
    CHECK(op.V.imag().norm() < 1e-14 * op.V.norm());
    CHECK(op.K.imag().norm() < 1e-14 * op.K.norm());
    // conjugate symmetry in s
    const BoundaryOperators a = assemble_boundary_operators(sp, cplx(1.0, 2.0));
    const BoundaryOperators b = assemble_boundary_operators(sp, cplx(1.0, -2.0));
    CHECK((a.V - b.V.conjugate()).norm() < 1e-12 * a.V.norm());
    CHECK((a.K - b.K.conjugate()).norm() < 1e-12 * a.K.norm());
}

TEST_CASE("Green's function")
{
    const cplx s(2.0, 1.0);
    CHECK(std::abs(greens(s, 0.5) - std::exp(-s * 0.5) / (4.0 * M_PI * 0.5)) < 1e-15);
}

TEST_CASE("Calderon operator is positive")
{
    const CheckResult r = check_calderon_positivity(1, 20, 3);
    INFO(r.detail);
    CHECK(r.passed);
}

TEST_CASE("dipole field solves Maxwell's equations")
{
    const CheckResult r = check_off_surface_pde(5, 13);
    INFO(r.detail);
    CHECK(r.passed);
}

TEST_CASE("representation formula reproduces a radiating field")
{
    const DipoleField dip{cplx(1.0, 0.5), Vec3(0.1, -0.05, 0.08), Vec3(0.3, 1.0, -0.4)};
    const std::vector<Vec3> xs{Vec3(2.0, 0.3, -0.4), Vec3(-1.5, 1.5, 0.5), Vec3(0.2, 0.1, 2.5)};
    double prev = 1e300;
    for (int n : {1, 2, 4}) {
        const RTSpace sp(make_cube_mesh(Vec3::Zero(), 1.0, n));
        const auto [phi, psi] = dip.traces(sp);
        double err = 0.0, ref = 0.0;
        for (const Vec3& x : xs) {
            CVec3 E, H;
            dip.eval(x, E, H);
            const FieldValue f = eval_potentials(sp, dip.s, phi, psi, x);
            err += (f.E - E).squaredNorm() + (f.H - H).squaredNorm();
            ref += E.squaredNorm() + H.squaredNorm();
        }
        const double rel = std::sqrt(err / ref);
        CAPTURE(n);
        CAPTURE(rel);
        CHECK(rel < prev);
        prev = rel;
    }
    CHECK(prev < 0.02);
}

TEST_CASE("Calderon projector residual decreases under refinement")
{
    const CheckResult r = check_calderon_projector();
    INFO(r.detail);
    CHECK(r.passed);
}

TEST_CASE("points near the surface are rejected")
{
    const RTSpace sp(make_cube_mesh(Vec3::Zero(), 1.0, 2));
    CHECK_THROWS_AS(potential_rows(sp, 1.0, Vec3(0.7, 0.0, 0.0)), ValidationError);
    CHECK_NOTHROW(potential_rows(sp, 1.0, Vec3(2.0, 0.0, 0.0)));
    CHECK(point_triangle_distance(sp.mesh(), 0, Vec3(0, 0, 0)) == doctest::Approx(0.5));
}

}
