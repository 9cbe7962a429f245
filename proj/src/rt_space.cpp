#include "nlbem/rt_space.hpp"

#include <cmath>

namespace nlbem {

RTSpace::RTSpace(SurfaceMesh mesh) : mesh_(std::move(mesh))
{
    const int nt = static_cast<int>(mesh_.n_triangles());
    local_.resize(nt);
    for (int t = 0; t < nt; ++t) {
        for (int k = 0; k < 3; ++k) {
            const int e = mesh_.triangle_edge(t, k);
            const Edge& edge = mesh_.edges()[e];
            const double len = (mesh_.vertices()[edge.v[0]] - mesh_.vertices()[edge.v[1]]).norm();
            const double sign = edge.tri[0] == t ? 1.0 : -1.0;
            local_[t][k] = {e, sign, sign * len / (2.0 * mesh_.areas()[t])};
        }
    }
}

Vec3 RTSpace::point(int t, double a1, double a2) const
{
    return (1.0 - a1 - a2) * mesh_.vertex(t, 0) + a1 * mesh_.vertex(t, 1) + a2 * mesh_.vertex(t, 2);
}

std::array<RTValue, 3> eval_rt0(const RTSpace& space, int t, double a1, double a2)
{
    if (t < 0 || t >= static_cast<int>(space.mesh().n_triangles()))
        throw ValidationError("triangle index out of range");
    const Vec3 x = space.point(t, a1, a2);
    std::array<RTValue, 3> out;
    for (int k = 0; k < 3; ++k) {
        const LocalBasis& b = space.local(t, k);
        out[k] = {b.dof, b.coef * (x - space.mesh().vertex(t, k)), 2.0 * b.coef};
    }
    return out;
}

Vec3 eval_function(const RTSpace& space, const Eigen::VectorXd& c, int t, const Vec3& x)
{
    Vec3 u = Vec3::Zero();
    for (int k = 0; k < 3; ++k) {
        const LocalBasis& b = space.local(t, k);
        u += c[b.dof] * b.coef * (x - space.mesh().vertex(t, k));
    }
    return u;
}

namespace {

// Sums a 3x3 local matrix per triangle into a dense global matrix.
template <typename Local>
Eigen::MatrixXd assemble_local(const RTSpace& space, Local local)
{
    const int n = space.dim();
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    const TriangleRule& rule = triangle_rule_7();
    const SurfaceMesh& mesh = space.mesh();
    for (int t = 0; t < static_cast<int>(mesh.n_triangles()); ++t) {
        Eigen::Matrix3d loc = Eigen::Matrix3d::Zero();
        for (size_t q = 0; q < rule.size(); ++q) {
            const Vec3 x = space.point(t, rule.points[q][0], rule.points[q][1]);
            Vec3 f[3];
            for (int k = 0; k < 3; ++k)
                f[k] = space.local(t, k).coef * (x - mesh.vertex(t, k));
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l)
                    loc(k, l) += rule.weights[q] * local(f[k], f[l], mesh.normals()[t]);
        }
        loc *= mesh.areas()[t];
        for (int k = 0; k < 3; ++k)
            for (int l = 0; l < 3; ++l)
                A(space.local(t, k).dof, space.local(t, l).dof) += loc(k, l);
    }
    return A;
}

}// namespace

Eigen::MatrixXd assemble_pairing(const RTSpace& space)
{
    return assemble_local(space, [](const Vec3& fi, const Vec3& fj, const Vec3& nu) { return fi.cross(nu).dot(fj); });
}

Eigen::MatrixXd assemble_mass(const RTSpace& space)
{
    return assemble_local(space, [](const Vec3& fi, const Vec3& fj, const Vec3&) { return fi.dot(fj); });
}

Eigen::VectorXd tangential_moments(const RTSpace& space, const TangentialField& f)
{
    const SurfaceMesh& mesh = space.mesh();
    const TriangleRule& rule = triangle_rule_7();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(space.dim());
    for (int t = 0; t < static_cast<int>(mesh.n_triangles()); ++t) {
        for (size_t q = 0; q < rule.size(); ++q) {
            const Vec3 x = space.point(t, rule.points[q][0], rule.points[q][1]);
            const Vec3 v = f(t, x);
            const double w = rule.weights[q] * mesh.areas()[t];
            for (int k = 0; k < 3; ++k) {
                const LocalBasis& lb = space.local(t, k);
                b[lb.dof] += w * lb.coef * (x - mesh.vertex(t, k)).dot(v);
            }
        }
    }
    return b;
}

Eigen::VectorXd project_tangential(const RTSpace& space, const TangentialField& f)
{
    const Eigen::LLT<Eigen::MatrixXd> llt(assemble_mass(space));
    if (llt.info() != Eigen::Success)
        throw NumericalError("mass matrix is not positive definite (broken mesh?)");
    return llt.solve(tangential_moments(space, f));
}

Eigen::VectorXd project_trace(const RTSpace& space, const VectorField& field)
{
    const auto& normals = space.mesh().normals();
    return project_tangential(space, [&](int t, const Vec3& x) { return Vec3(field(x).cross(normals[t])); });
}

Eigen::VectorXd interpolate_tangential(const RTSpace& space, const TangentialField& f)
{
    const SurfaceMesh& mesh = space.mesh();
    std::vector<double> gx, gw;
    gauss_legendre_01(4, gx, gw);
    Eigen::VectorXd c = Eigen::VectorXd::Zero(space.dim());
    for (int t = 0; t < static_cast<int>(mesh.n_triangles()); ++t) {
        for (int k = 0; k < 3; ++k) {
            const LocalBasis& b = space.local(t, k);
            const Vec3 p = mesh.vertex(t, k);
            const Vec3 a = mesh.vertex(t, (k + 1) % 3), e = mesh.vertex(t, (k + 2) % 3) - a;
            // outward conormal of the edge opposite p
            Vec3 n = (a - p) - (a - p).dot(e) / e.squaredNorm() * e;
            n.normalize();
            double flux = 0.0;
            for (size_t q = 0; q < gx.size(); ++q)
                flux += gw[q] * f(t, a + gx[q] * e).dot(n);
            c[b.dof] += 0.5 * b.sign * flux;
        }
    }
    return c;
}

Eigen::VectorXd interpolate_trace(const RTSpace& space, const VectorField& field)
{
    const auto& normals = space.mesh().normals();
    return interpolate_tangential(space, [&](int t, const Vec3& x) { return Vec3(field(x).cross(normals[t])); });
}

double lp_norm(const RTSpace& space, const Eigen::VectorXd& c, double p)
{
    if (!(p >= 1.0))
        throw ValidationError("lp_norm needs p >= 1");
    if (c.size() != space.dim())
        throw ValidationError("coefficient vector length does not match the space");
    const SurfaceMesh& mesh = space.mesh();
    const TriangleRule& rule = triangle_rule_7();
    double sum = 0.0;
    for (int t = 0; t < static_cast<int>(mesh.n_triangles()); ++t) {
        for (size_t q = 0; q < rule.size(); ++q) {
            const Vec3 x = space.point(t, rule.points[q][0], rule.points[q][1]);
            sum += rule.weights[q] * mesh.areas()[t] * std::pow(eval_function(space, c, t, x).norm(), p);
        }
    }
    return std::pow(sum, 1.0 / p);
}

}// namespace nlbem
