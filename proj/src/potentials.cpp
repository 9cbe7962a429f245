#include "nlbem/maxwell_kernels.hpp"

#include <cmath>
#include <numbers>

namespace nlbem {

// Closest point on a triangle (Ericson, Real-Time Collision Detection 5.1.5).
double point_triangle_distance(const SurfaceMesh& mesh, int t, const Vec3& p)
{
    const Vec3 a = mesh.vertex(t, 0), b = mesh.vertex(t, 1), c = mesh.vertex(t, 2);
    const Vec3 ab = b - a, ac = c - a, ap = p - a;
    const double d1 = ab.dot(ap), d2 = ac.dot(ap);
    if (d1 <= 0 && d2 <= 0)
        return (p - a).norm();
    const Vec3 bp = p - b;
    const double d3 = ab.dot(bp), d4 = ac.dot(bp);
    if (d3 >= 0 && d4 <= d3)
        return (p - b).norm();
    const double vc = d1 * d4 - d3 * d2;
    if (vc <= 0 && d1 >= 0 && d3 <= 0)
        return (p - (a + d1 / (d1 - d3) * ab)).norm();
    const Vec3 cp = p - c;
    const double d5 = ab.dot(cp), d6 = ac.dot(cp);
    if (d6 >= 0 && d5 <= d6)
        return (p - c).norm();
    const double vb = d5 * d2 - d1 * d6;
    if (vb <= 0 && d2 >= 0 && d6 <= 0)
        return (p - (a + d2 / (d2 - d6) * ac)).norm();
    const double va = d3 * d6 - d5 * d4;
    if (va <= 0 && (d4 - d3) >= 0 && (d5 - d6) >= 0)
        return (p - (b + (d4 - d3) / ((d4 - d3) + (d5 - d6)) * (c - b))).norm();
    const double denom = 1.0 / (va + vb + vc);
    return (p - (a + ab * (vb * denom) + ac * (vc * denom))).norm();
}

namespace {

constexpr double inv4pi = 0.25 / std::numbers::pi;

struct PointAccum {
    CVec3 g_y = CVec3::Zero();     // sum w G y
    cplx g0 = 0.0;                 // sum w G
    CVec3 f_d = CVec3::Zero();     // sum w F (x - y)
    CVec3 f_dxy = CVec3::Zero();   // sum w F (x - y) x y
};

void integrate(PointAccum& acc, const Vec3& x, const Vec3 q[3], double area, cplx s, int depth)
{
    const Vec3 c = (q[0] + q[1] + q[2]) / 3.0;
    const double size = std::max({(q[0] - q[1]).norm(), (q[1] - q[2]).norm(), (q[2] - q[0]).norm()});
    if (depth < 3 && ((x - c).norm() < 2.5 * size || std::abs(s) * size > 4.0)) {
        const Vec3 m01 = 0.5 * (q[0] + q[1]), m12 = 0.5 * (q[1] + q[2]), m20 = 0.5 * (q[2] + q[0]);
        const Vec3 parts[4][3] = {{q[0], m01, m20}, {m01, q[1], m12}, {m20, m12, q[2]}, {m01, m12, m20}};
        for (const auto& p : parts)
            integrate(acc, x, p, 0.25 * area, s, depth + 1);
        return;
    }
    const TriangleRule& rule = triangle_rule_7();
    for (size_t i = 0; i < rule.size(); ++i) {
        const double a1 = rule.points[i][0], a2 = rule.points[i][1];
        const Vec3 y = (1.0 - a1 - a2) * q[0] + a1 * q[1] + a2 * q[2];
        const Vec3 d = x - y;
        const double r = d.norm();
        const cplx e = std::exp(-s * r);
        const double w = rule.weights[i] * area;
        const cplx g = w * e * (inv4pi / r);
        const cplx f = w * e * (1.0 + s * r) * (inv4pi / (r * r * r));
        acc.g0 += g;
        acc.g_y += g * y.cast<cplx>();
        acc.f_d += f * d.cast<cplx>();
        acc.f_dxy += f * d.cross(y).cast<cplx>();
    }
}

}// namespace

PotentialRows potential_rows(const RTSpace& space, cplx s, const Vec3& x)
{
    if (!(s.real() > 0.0))
        throw ValidationError("potential evaluation requires Re s > 0");
    const SurfaceMesh& mesh = space.mesh();
    const int n = space.dim();
    PotentialRows rows{Eigen::Matrix<cplx, 3, Eigen::Dynamic>::Zero(3, n), Eigen::Matrix<cplx, 3, Eigen::Dynamic>::Zero(3, n)};
    const cplx inv_s = 1.0 / s;

    for (int t = 0; t < static_cast<int>(mesh.n_triangles()); ++t) {
        const double dist = point_triangle_distance(mesh, t, x);
        if (dist < mesh.diameter(t))
            throw ValidationError("evaluation point is closer to the surface than one panel diameter");
        const Vec3 q[3] = {mesh.vertex(t, 0), mesh.vertex(t, 1), mesh.vertex(t, 2)};
        PointAccum acc;
        integrate(acc, x, q, mesh.areas()[t], s, 0);
        for (int l = 0; l < 3; ++l) {
            const LocalBasis& b = space.local(t, l);
            const CVec3 ql = q[l].cast<cplx>();
            // int G (y - q_l), int grad_x G div = -2 int F (x - y)
            const CVec3 gphi = acc.g_y - acc.g0 * ql;
            rows.S.col(b.dof) += b.coef * (-s * gphi - 2.0 * inv_s * acc.f_d);
            // int grad_x G x phi = -int F (x - y) x (y - q_l)
            const CVec3 dxq(acc.f_d[1] * ql[2] - acc.f_d[2] * ql[1], acc.f_d[2] * ql[0] - acc.f_d[0] * ql[2],
                            acc.f_d[0] * ql[1] - acc.f_d[1] * ql[0]);
            rows.D.col(b.dof) += -b.coef * (acc.f_dxy - dxq);
        }
    }
    return rows;
}

FieldValue eval_potentials(const RTSpace& space, cplx s, const Eigen::VectorXcd& phi, const Eigen::VectorXcd& psi,
                           const Vec3& x)
{
    if (phi.size() != space.dim() || psi.size() != space.dim())
        throw ValidationError("density length does not match the space");
    const PotentialRows rows = potential_rows(space, s, x);
    return {-rows.S * phi + rows.D * psi, -rows.D * phi - rows.S * psi};
}

}// namespace nlbem
