#include "nlbem/maxwell_kernels.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

#include <omp.h>

namespace nlbem {

cplx greens(cplx s, double r)
{
    if (!(r > 0.0))
        throw ValidationError("greens: distance must be positive");
    return std::exp(-s * r) / (4.0 * std::numbers::pi * r);
}

namespace {

constexpr double inv4pi = 0.25 / std::numbers::pi;

// Raw sums for one triangle pair, before the basis coefficients:
//   v0    = sum w g
//   v[kl] = sum w g (x - p_k).(y - q_l)
//   k[kl] = sum w F (x - p_k).((x - y) x (y - q_l)),  grad_x G = -(x - y) F
struct Accum {
    cplx v0 = 0.0;
    cplx v[3][3] = {};
    cplx k[3][3] = {};
};

struct Geometry {
    Vec3 p[3];       // triangle vertices in mesh order
    double area;
    double diam;
    Vec3 centroid;
    Vec3 normal;
};

inline void accumulate(Accum& acc, const Vec3& x, const Vec3& y, double w, cplx s, const Geometry& A,
                       const Geometry& B, bool with_k)
{
    const Vec3 d = x - y;
    const double r = d.norm();
    const double decay = std::exp(-s.real() * r);
    cplx e(decay, 0.0);
    if (s.imag() != 0.0) {
        const double ang = s.imag() * r;
        e = cplx(decay * std::cos(ang), -decay * std::sin(ang));
    }
    const cplx g = e * (inv4pi / r);
    const Vec3 a[3] = {x - A.p[0], x - A.p[1], x - A.p[2]};
    const Vec3 c[3] = {y - B.p[0], y - B.p[1], y - B.p[2]};
    const cplx wg = w * g;
    acc.v0 += wg;
    for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l)
            acc.v[k][l] += wg * a[k].dot(c[l]);
    if (with_k) {
        const cplx wf = w * e * (1.0 + s * r) * (inv4pi / (r * r * r));
        const Vec3 dc[3] = {d.cross(c[0]), d.cross(c[1]), d.cross(c[2])};
        for (int k = 0; k < 3; ++k)
            for (int l = 0; l < 3; ++l)
                acc.k[k][l] += wf * a[k].dot(dc[l]);
    }
}

Geometry geometry(const SurfaceMesh& mesh, int t)
{
    Geometry g;
    for (int k = 0; k < 3; ++k)
        g.p[k] = mesh.vertex(t, k);
    g.area = mesh.areas()[t];
    g.diam = mesh.diameter(t);
    g.centroid = mesh.centroid(t);
    g.normal = mesh.normals()[t];
    return g;
}

struct SubTriangle {
    Vec3 q[3];
    double area;
};

double radius(const SubTriangle& t, const Vec3& c)
{
    return std::max({(t.q[0] - c).norm(), (t.q[1] - c).norm(), (t.q[2] - c).norm()});
}

double diameter(const SubTriangle& t)
{
    return std::max({(t.q[0] - t.q[1]).norm(), (t.q[1] - t.q[2]).norm(), (t.q[2] - t.q[0]).norm()});
}

std::array<SubTriangle, 4> split(const SubTriangle& t)
{
    const Vec3 m01 = 0.5 * (t.q[0] + t.q[1]), m12 = 0.5 * (t.q[1] + t.q[2]), m20 = 0.5 * (t.q[2] + t.q[0]);
    const double a = 0.25 * t.area;
    return {SubTriangle{{t.q[0], m01, m20}, a}, SubTriangle{{m01, t.q[1], m12}, a},
            SubTriangle{{m20, m12, t.q[2]}, a}, SubTriangle{{m01, m12, m20}, a}};
}

// Non-touching pair, 7x7 point rule with adaptive subdivision.
void regular_pair(Accum& acc, const SubTriangle& sa, const SubTriangle& sb, int depth, cplx s,
                  const Geometry& A, const Geometry& B, bool with_k, const AssemblyOptions& opt)
{
    const Vec3 ca = (sa.q[0] + sa.q[1] + sa.q[2]) / 3.0;
    const Vec3 cb = (sb.q[0] + sb.q[1] + sb.q[2]) / 3.0;
    const double cdist = (ca - cb).norm();
    const double lower = cdist - radius(sa, ca) - radius(sb, cb);
    const double damping = opt.frozen ? opt.frozen->min_real : s.real();
    if (lower > 0.0 && damping * lower > opt.prune_exponent)
        return;

    const double size = std::max(diameter(sa), diameter(sb));
    const double s_abs = opt.frozen ? opt.frozen->max_abs : std::abs(s);
    if (depth < opt.max_depth && (cdist < size || s_abs * size > opt.subdivide_kappa)) {
        const auto parts_a = split(sa);
        const auto parts_b = split(sb);
        for (const auto& pa : parts_a)
            for (const auto& pb : parts_b)
                regular_pair(acc, pa, pb, depth + 1, s, A, B, with_k, opt);
        return;
    }

    const TriangleRule& rule = triangle_rule_7();
    Vec3 xs[7], ys[7];
    for (int q = 0; q < 7; ++q) {
        const double a1 = rule.points[q][0], a2 = rule.points[q][1];
        xs[q] = (1.0 - a1 - a2) * sa.q[0] + a1 * sa.q[1] + a2 * sa.q[2];
        ys[q] = (1.0 - a1 - a2) * sb.q[0] + a1 * sb.q[1] + a2 * sb.q[2];
    }
    const double wab = sa.area * sb.area;
    for (int i = 0; i < 7; ++i)
        for (int j = 0; j < 7; ++j)
            accumulate(acc, xs[i], ys[j], wab * rule.weights[i] * rule.weights[j], s, A, B, with_k);
}

const PairRule& cached_rule(int ncommon, int order, int order_xi)
{
    static std::mutex lock;
    static std::map<std::tuple<int, int, int>, PairRule> cache;
    std::lock_guard<std::mutex> guard(lock);
    auto key = std::make_tuple(ncommon, order, order_xi);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, sauter_schwab_rule(ncommon, order, order_xi)).first;
    return it->second;
}

bool coplanar(const Geometry& A, const Geometry& B)
{
    const double tol = 1e-12 * std::max(A.diam, B.diam);
    return A.normal.cross(B.normal).norm() < 1e-12 && std::abs((B.centroid - A.centroid).dot(A.normal)) < tol;
}

PairBlock pair_block(const RTSpace& space, int ta, int tb, cplx s, const AssemblyOptions& opt)
{
    const SurfaceMesh& mesh = space.mesh();
    const Geometry A = geometry(mesh, ta), B = geometry(mesh, tb);
    // the double layer integrand vanishes identically on a common plane
    const bool with_k = !coplanar(A, B);
    Accum acc;

    const VertexMatch m = match_vertices(mesh.triangles()[ta], mesh.triangles()[tb]);
    if (m.count > 0) {
        const double diam = std::max(A.diam, B.diam);
        const double s_abs = opt.frozen ? opt.frozen->max_abs : std::abs(s);
        const double s_imag = opt.frozen ? opt.frozen->max_imag : std::abs(s.imag());
        const double kappa = s_abs * diam;
        // too few points on weakly damped oscillating pairs break Re C(s) >= 0
        const int q = std::min(opt.max_singular_order,
                               opt.singular_order + static_cast<int>(std::ceil(opt.order_per_oscillation * s_imag * diam)));
        const int qxi = std::min(opt.max_singular_order, q + static_cast<int>(std::ceil(opt.xi_order_per_kappa * kappa)));
        const PairRule& rule = cached_rule(m.count, q, qxi);
        const Vec3 a0 = A.p[m.perm1[0]], a1 = A.p[m.perm1[1]], a2 = A.p[m.perm1[2]];
        const Vec3 b0 = B.p[m.perm2[0]], b1 = B.p[m.perm2[1]], b2 = B.p[m.perm2[2]];
        const double scale = 4.0 * A.area * B.area;
        for (size_t i = 0; i < rule.size(); ++i) {
            const auto& u = rule.p1[i];
            const auto& v = rule.p2[i];
            const Vec3 x = (1.0 - u[0] - u[1]) * a0 + u[0] * a1 + u[1] * a2;
            const Vec3 y = (1.0 - v[0] - v[1]) * b0 + v[0] * b1 + v[1] * b2;
            accumulate(acc, x, y, scale * rule.weights[i], s, A, B, with_k);
        }
    }
    else {
        const SubTriangle sa{{A.p[0], A.p[1], A.p[2]}, A.area};
        const SubTriangle sb{{B.p[0], B.p[1], B.p[2]}, B.area};
        regular_pair(acc, sa, sb, 0, s, A, B, with_k, opt);
    }

    PairBlock out;
    const cplx inv_s = 1.0 / s;
    for (int k = 0; k < 3; ++k) {
        const double ck = space.local(ta, k).coef;
        for (int l = 0; l < 3; ++l) {
            const double cl = space.local(tb, l).coef;
            // div phi = 2 coef on each side
            out.V(k, l) = ck * cl * (-s * acc.v[k][l] - 4.0 * inv_s * acc.v0);
            out.K(k, l) = -ck * cl * acc.k[k][l];
        }
    }
    return out;
}

void check_frequency(cplx s)
{
    if (!(s.real() > 0.0))
        throw ValidationError("operator assembly requires Re s > 0");
    if (!std::isfinite(s.real()) || !std::isfinite(s.imag()))
        throw ValidationError("operator assembly requires a finite frequency");
}

}// namespace

PairBlock assemble_pair(const RTSpace& space, int ta, int tb, cplx s, const AssemblyOptions& opt)
{
    check_frequency(s);
    return pair_block(space, ta, tb, s, opt);
}

BoundaryOperators assemble_boundary_operators(const RTSpace& space, cplx s, const AssemblyOptions& opt)
{
    check_frequency(s);
    const int n = space.dim();
    const int nt = static_cast<int>(space.mesh().n_triangles());
    BoundaryOperators ops{s, Eigen::MatrixXcd::Zero(n, n), Eigen::MatrixXcd::Zero(n, n)};

    auto scatter = [&](int ta, int tb, const PairBlock& blk) {
        for (int k = 0; k < 3; ++k) {
            const int i = space.local(ta, k).dof;
            for (int l = 0; l < 3; ++l) {
                const int j = space.local(tb, l).dof;
                ops.V(i, j) += blk.V(k, l);
                ops.K(i, j) += blk.K(k, l);
                if (ta != tb) {
                    // both forms are symmetric under (i,x) <-> (j,y)
                    ops.V(j, i) += blk.V(k, l);
                    ops.K(j, i) += blk.K(k, l);
                }
            }
        }
    };

    if (opt.exec == Execution::serial) {
        for (int ta = 0; ta < nt; ++ta)
            for (int tb = ta; tb < nt; ++tb)
                scatter(ta, tb, pair_block(space, ta, tb, s, opt));
        return ops;
    }

    // Rows of the upper triangle are computed in parallel into a buffer,
    // then merged serially so that no two threads touch the same entry.
    const int chunk = std::max(1, std::min(nt, 64));
    std::vector<std::vector<PairBlock>> rows(chunk);
    for (int start = 0; start < nt; start += chunk) {
        const int stop = std::min(nt, start + chunk);
#pragma omp parallel for schedule(dynamic, 1)
        for (int ta = start; ta < stop; ++ta) {
            auto& row = rows[ta - start];
            row.resize(nt - ta);
            for (int tb = ta; tb < nt; ++tb)
                row[tb - ta] = pair_block(space, ta, tb, s, opt);
        }// for
        for (int ta = start; ta < stop; ++ta)
            for (int tb = ta; tb < nt; ++tb)
                scatter(ta, tb, rows[ta - start][tb - ta]);
    }
    return ops;
}

Eigen::MatrixXcd assemble_single_layer(const RTSpace& space, cplx s, const AssemblyOptions& opt)
{
    return assemble_boundary_operators(space, s, opt).V;
}

Eigen::MatrixXcd assemble_double_layer(const RTSpace& space, cplx s, const AssemblyOptions& opt)
{
    return assemble_boundary_operators(space, s, opt).K;
}

Eigen::MatrixXcd CalderonAssembly::c() const
{
    const Eigen::Index n = V.rows();
    Eigen::MatrixXcd C(2 * n, 2 * n);
    C.topLeftCorner(n, n) = -V;
    C.topRightCorner(n, n) = K;
    C.bottomLeftCorner(n, n) = -K;
    C.bottomRightCorner(n, n) = -V;
    return C;
}

Eigen::MatrixXcd CalderonAssembly::cimp(const Eigen::MatrixXd& P) const
{
    const Eigen::Index n = V.rows();
    Eigen::MatrixXcd C = c();
    C.topRightCorner(n, n) -= 0.5 * P.cast<cplx>();
    C.bottomLeftCorner(n, n) -= 0.5 * P.cast<cplx>();
    return C;
}

CalderonAssembly assemble_calderon(const RTSpace& space, cplx s, double sigma, const AssemblyOptions& opt)
{
    if (sigma < 0.0)
        throw ValidationError("shift sigma must be non-negative");
    BoundaryOperators ops = assemble_boundary_operators(space, s + sigma, opt);
    return {s, sigma, std::move(ops.V), std::move(ops.K)};
}

}// namespace nlbem
