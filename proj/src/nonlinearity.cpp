#include "nlbem/nonlinearity.hpp"

#include <algorithm>
#include <cmath>

namespace nlbem {

PowerLaw::PowerLaw(double alpha_, double reg_eps_) : alpha(alpha_), reg_eps(reg_eps_)
{
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw ValidationError("power law exponent alpha must lie in (0,1], got " + std::to_string(alpha));
    if (!(reg_eps >= 0.0 && reg_eps < 1e-6))
        throw ValidationError("reg_eps must lie in [0,1e-6)");
}

namespace {

// |x| without underflow of the squares; states reach 1e-270 before a wave arrives
double norm3(const Vec3& x)
{
    return std::hypot(x[0], x[1], x[2]);
}

}// namespace

Vec3 a_eval(const PowerLaw& pl, const Vec3& x)
{
    const double n = norm3(x);
    if (n == 0.0 || pl.alpha == 1.0)
        return x;
    return std::pow(n, pl.alpha - 1.0) * x;
}

Vec3 a_inv(const PowerLaw& pl, const Vec3& y)
{
    const double n = norm3(y);
    if (n == 0.0 || pl.alpha == 1.0)
        return y;
    return std::pow(n, (1.0 - pl.alpha) / pl.alpha) * y;
}

Mat3 a_jacobian(const PowerLaw& pl, const Vec3& x)
{
    if (pl.alpha == 1.0)
        return Mat3::Identity();
    const double r = std::hypot(norm3(x), pl.reg_eps);
    if (r == 0.0)
        throw NumericalError("a_jacobian: singular at x = 0 without regularization");
    const double p = std::pow(r, pl.alpha - 1.0);
    const Vec3 e = x / r;
    return (pl.alpha - 1.0) * p * (e * e.transpose()) + p * Mat3::Identity();
}

NonlinearTerm::NonlinearTerm(const RTSpace& space, PowerLaw pl) : space_(space), pl_(pl)
{
    const SurfaceMesh& mesh = space.mesh();
    const TriangleRule& rule = triangle_rule_7();
    for (int t = 0; t < static_cast<int>(mesh.n_triangles()); ++t) {
        for (size_t q = 0; q < rule.size(); ++q) {
            const Vec3 x = space.point(t, rule.points[q][0], rule.points[q][1]);
            points_.push_back(x);
            weights_.push_back(rule.weights[q] * mesh.areas()[t]);
            std::array<Vec3, 3> b;
            for (int k = 0; k < 3; ++k)
                b[k] = space.local(t, k).coef * (x - mesh.vertex(t, k));
            basis_.push_back(b);
        }
    }
}

Vec3 NonlinearTerm::state(const Eigen::VectorXd& c, int q) const
{
    const int t = triangle_of(q);
    Vec3 u = Vec3::Zero();
    for (int k = 0; k < 3; ++k)
        u += c[space_.local(t, k).dof] * basis_[q][k];
    return u;
}

Eigen::VectorXd NonlinearTerm::residual(const Eigen::VectorXd& c, const std::vector<Vec3>& h, double in_scale,
                                        double out_scale) const
{
    Eigen::VectorXd r = Eigen::VectorXd::Zero(space_.dim());
    for (int q = 0; q < n_points(); ++q) {
        const Vec3 a = a_eval(pl_, in_scale * state(c, q) + h[q]);
        const int t = triangle_of(q);
        for (int k = 0; k < 3; ++k)
            r[space_.local(t, k).dof] += out_scale * weights_[q] * basis_[q][k].dot(a);
    }
    return r;
}

Eigen::MatrixXd NonlinearTerm::jacobian(const Eigen::VectorXd& c, const std::vector<Vec3>& h, double in_scale,
                                        double out_scale) const
{
    return jacobian_with(pl_, c, h, in_scale, out_scale, nullptr);
}

std::vector<Vec3> NonlinearTerm::states(const Eigen::VectorXd& c, const std::vector<Vec3>& h, double in_scale) const
{
    std::vector<Vec3> v(n_points());
    for (int q = 0; q < n_points(); ++q)
        v[q] = in_scale * state(c, q) + h[q];
    return v;
}

Eigen::MatrixXd NonlinearTerm::newton_jacobian(const Eigen::VectorXd& c, const std::vector<Vec3>& h, double in_scale,
                                               double out_scale, const std::vector<char>* secant) const
{
    double scale = 0.0;
    for (int q = 0; q < n_points(); ++q)
        scale = std::max(scale, norm3(in_scale * state(c, q) + h[q]));
    PowerLaw pl = pl_;
    if (scale > 0.0)
        pl.reg_eps *= std::min(1.0, 1e-6 * scale);
    return jacobian_with(pl, c, h, in_scale, out_scale, secant);
}

Eigen::MatrixXd NonlinearTerm::jacobian_with(const PowerLaw& pl, const Eigen::VectorXd& c, const std::vector<Vec3>& h,
                                             double in_scale, double out_scale, const std::vector<char>* secant) const
{
    const int n = space_.dim();
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int q = 0; q < n_points(); ++q) {
        const Vec3 x = in_scale * state(c, q) + h[q];
        Mat3 D;
        if (secant && (*secant)[q]) {
            // a(x) = K(x) x with K(x) = |x|^(alpha-1)
            const double r = std::hypot(norm3(x), pl.reg_eps);
            if (r == 0.0 && pl.alpha < 1.0)
                throw NumericalError("secant matrix of a at x = 0 without regularization");
            D = (pl.alpha == 1.0 ? 1.0 : std::pow(r, pl.alpha - 1.0)) * Mat3::Identity();
        }
        else
            D = a_jacobian(pl, x);
        const int t = triangle_of(q);
        const double w = out_scale * in_scale * weights_[q];
        for (int k = 0; k < 3; ++k) {
            const Vec3 Db = D * basis_[q][k];
            for (int l = 0; l < 3; ++l)
                J(space_.local(t, l).dof, space_.local(t, k).dof) += w * basis_[q][l].dot(Db);
        }
    }
    return J;
}

namespace {

std::vector<Vec3> sample(const NonlinearTerm& term, const TangentialField& f)
{
    std::vector<Vec3> h(term.n_points());
    for (int q = 0; q < term.n_points(); ++q)
        h[q] = f ? f(term.triangle_of(q), term.points()[q]) : Vec3::Zero();
    return h;
}

}// namespace

Eigen::VectorXd assemble_nonlinear_residual(const RTSpace& space, const PowerLaw& pl, const Eigen::VectorXd& c,
                                            const TangentialField& incident_trace)
{
    const NonlinearTerm term(space, pl);
    return term.residual(c, sample(term, incident_trace));
}

Eigen::MatrixXd assemble_nonlinear_jacobian(const RTSpace& space, const PowerLaw& pl, const Eigen::VectorXd& c,
                                            const TangentialField& incident_trace)
{
    const NonlinearTerm term(space, pl);
    return term.jacobian(c, sample(term, incident_trace));
}

}// namespace nlbem
