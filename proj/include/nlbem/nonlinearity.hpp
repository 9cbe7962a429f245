#pragma once

#include "nlbem/rt_space.hpp"

namespace nlbem {

// a(x) = |x|^(alpha-1) x
struct PowerLaw {
    double alpha = 1.0;
    double reg_eps = 1e-10;   // used by a_jacobian only

    PowerLaw() = default;
    PowerLaw(double alpha_, double reg_eps_ = 1e-10);
};

Vec3 a_eval(const PowerLaw& pl, const Vec3& x);
Vec3 a_inv(const PowerLaw& pl, const Vec3& y);
Mat3 a_jacobian(const PowerLaw& pl, const Vec3& x);

// Galerkin form of u -> (phi_i, a(u_h + h))_Gamma on the 7-point rule.
// Quadrature points and basis values are cached so that repeated
// evaluations inside Newton only cost the pointwise nonlinearity.
class NonlinearTerm {
public:
    NonlinearTerm(const RTSpace& space, PowerLaw pl);

    const PowerLaw& law() const { return pl_; }
    int n_points() const { return static_cast<int>(points_.size()); }
    const std::vector<Vec3>& points() const { return points_; }
    int triangle_of(int q) const { return q / 7; }

    // h holds the incident trace at points(); the evaluated term is
    // out_scale * a(in_scale * u_h + h), which covers the shifted form.
    Eigen::VectorXd residual(const Eigen::VectorXd& c, const std::vector<Vec3>& h, double in_scale = 1.0,
                             double out_scale = 1.0) const;
    Eigen::MatrixXd jacobian(const Eigen::VectorXd& c, const std::vector<Vec3>& h, double in_scale = 1.0,
                             double out_scale = 1.0) const;

    // The same with the regularization reg_eps * min(1, 1e-6 |x|_max),
    // |x|_max the largest state magnitude of the iterate. Used as the
    // Newton matrix: near vanishing states sit at |x| ~ residual^(1/alpha),
    // far below any fixed absolute floor. At points flagged in
    // secant, Da is replaced by |x|^(alpha-1) I (fixed point linearization
    // of a), which does not overshoot through x = 0.
    Eigen::MatrixXd newton_jacobian(const Eigen::VectorXd& c, const std::vector<Vec3>& h, double in_scale = 1.0,
                                    double out_scale = 1.0, const std::vector<char>* secant = nullptr) const;

    // in_scale * u_h + h at points()
    std::vector<Vec3> states(const Eigen::VectorXd& c, const std::vector<Vec3>& h, double in_scale = 1.0) const;

private:
    Eigen::MatrixXd jacobian_with(const PowerLaw& pl, const Eigen::VectorXd& c, const std::vector<Vec3>& h,
                                  double in_scale, double out_scale, const std::vector<char>* secant) const;
    Vec3 state(const Eigen::VectorXd& c, int q) const;

    const RTSpace& space_;
    PowerLaw pl_;
    std::vector<Vec3> points_;
    std::vector<double> weights_;
    std::vector<std::array<Vec3, 3>> basis_;   // per point, the three local basis values
};

Eigen::VectorXd assemble_nonlinear_residual(const RTSpace& space, const PowerLaw& pl, const Eigen::VectorXd& c,
                                            const TangentialField& incident_trace);
Eigen::MatrixXd assemble_nonlinear_jacobian(const RTSpace& space, const PowerLaw& pl, const Eigen::VectorXd& c,
                                            const TangentialField& incident_trace);

}// namespace nlbem
