#pragma once

#include <functional>

#include "nlbem/surface_mesh.hpp"
#include "nlbem/quadrature.hpp"

namespace nlbem {

// Local data of one RT0 basis function restricted to one triangle:
// phi(x) = coef * (x - opposite vertex), div phi = 2 * coef.
struct LocalBasis {
    int dof;
    double sign;   // +1 on the lower-index adjacent triangle, -1 on the other
    double coef;   // sign * |e| / (2 |T|)
};

struct RTValue {
    int dof;
    Vec3 value;
    double div;
};

// Lowest order Raviart-Thomas space, one DOF per edge.
class RTSpace {
public:
    explicit RTSpace(SurfaceMesh mesh);

    const SurfaceMesh& mesh() const { return mesh_; }
    int dim() const { return static_cast<int>(mesh_.n_edges()); }

    // basis function of local edge k (opposite vertex k) on triangle t
    const LocalBasis& local(int t, int k) const { return local_[t][k]; }

    // physical point of unit-triangle coordinates (a1,a2)
    Vec3 point(int t, double a1, double a2) const;

private:
    SurfaceMesh mesh_;
    std::vector<std::array<LocalBasis, 3>> local_;
};

using TangentialField = std::function<Vec3(int triangle, const Vec3& x)>;
using VectorField = std::function<Vec3(const Vec3& x)>;

std::array<RTValue, 3> eval_rt0(const RTSpace& space, int t, double a1, double a2);

// u_h(x) on triangle t for the coefficient vector c
Vec3 eval_function(const RTSpace& space, const Eigen::VectorXd& c, int t, const Vec3& x);

// P_ij = int (phi_i x nu) . phi_j
Eigen::MatrixXd assemble_pairing(const RTSpace& space);

// M_ij = int phi_i . phi_j
Eigen::MatrixXd assemble_mass(const RTSpace& space);

// b_i = int f . phi_i with the 7-point rule
Eigen::VectorXd tangential_moments(const RTSpace& space, const TangentialField& f);

// L2 projection of the tangential trace field x nu.
Eigen::VectorXd project_trace(const RTSpace& space, const VectorField& field);

// L2 projection of an already tangential field.
Eigen::VectorXd project_tangential(const RTSpace& space, const TangentialField& f);

// Edge flux interpolation, dof = mean normal flux across the edge
// (averaged over both sides). Commutes with the surface divergence.
Eigen::VectorXd interpolate_tangential(const RTSpace& space, const TangentialField& f);
Eigen::VectorXd interpolate_trace(const RTSpace& space, const VectorField& field);

// (int |u_h|^p)^(1/p)
double lp_norm(const RTSpace& space, const Eigen::VectorXd& c, double p);

}// namespace nlbem
