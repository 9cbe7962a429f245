#pragma once

#include "nlbem/rt_space.hpp"

#include <optional>

namespace nlbem {

// Frequency range of a whole contour.
struct FrequencyBounds {
    double max_abs = 0.0;    // max |s|
    double max_imag = 0.0;   // max |Im s|
    double min_real = 0.0;   // min Re s
};

struct AssemblyOptions {
    int singular_order = 4;        // Gauss points per dimension for touching pairs
    double order_per_oscillation = 0.02;   // extra points per unit of |Im s| * diameter
    double xi_order_per_kappa = 1.0;   // extra radial points per unit of |s| * diameter
    int max_singular_order = 16;
    double subdivide_kappa = 1e300;   // also subdivide while |s| * size exceeds this (off by default)
    int max_depth = 2;             // subdivision levels for regular pairs
    double prune_exponent = 36.0;  // drop pairs with Re(s) * distance beyond this
    // When set, quadrature orders and pruning follow these bounds instead of s.
    // The rule is then the same at every s and the matrices are analytic in s,
    // which contour weights need: order jumps between contour points are
    // amplified by rho^-N.
    std::optional<FrequencyBounds> frozen;
    Execution exec = Execution::parallel;
};

cplx greens(cplx s, double r);

// Galerkin matrices of the boundary operators, tested with the
// antisymmetric pairing:
//   V_ij = -s <<G phi_j, phi_i>> - 1/s <<G div phi_j, div phi_i>>
//   K_ij = << grad_x G(x-y) x phi_j(y), phi_i(x) >>
struct BoundaryOperators {
    cplx s;
    Eigen::MatrixXcd V, K;
};

BoundaryOperators assemble_boundary_operators(const RTSpace& space, cplx s, const AssemblyOptions& opt = {});
Eigen::MatrixXcd assemble_single_layer(const RTSpace& space, cplx s, const AssemblyOptions& opt = {});
Eigen::MatrixXcd assemble_double_layer(const RTSpace& space, cplx s, const AssemblyOptions& opt = {});

// Local 3x3 blocks of V and K for one ordered triangle pair.
struct PairBlock {
    Eigen::Matrix3cd V, K;
};
PairBlock assemble_pair(const RTSpace& space, int ta, int tb, cplx s, const AssemblyOptions& opt = {});

// C(s + sigma) in Galerkin form. cimp() realizes
//   [[-V, K - P/2], [-K - P/2, -V]]
// and c() the same without the pairing blocks.
struct CalderonAssembly {
    cplx s;
    double sigma = 0.0;
    Eigen::MatrixXcd V, K;

    Eigen::MatrixXcd c() const;
    Eigen::MatrixXcd cimp(const Eigen::MatrixXd& P) const;
};

CalderonAssembly assemble_calderon(const RTSpace& space, cplx s, double sigma = 0.0, const AssemblyOptions& opt = {});

// Rows of the point potentials at x: S(s) c = S_x c and D(s) c = D_x c,
// each 3 x dim.
struct PotentialRows {
    Eigen::Matrix<cplx, 3, Eigen::Dynamic> S, D;
};

// Throws ValidationError if x is closer to a panel than its diameter.
PotentialRows potential_rows(const RTSpace& space, cplx s, const Vec3& x);

struct FieldValue {
    CVec3 E, H;
};

// (E, H) = (-S phi + D psi, -D phi - S psi) at x
FieldValue eval_potentials(const RTSpace& space, cplx s, const Eigen::VectorXcd& phi, const Eigen::VectorXcd& psi,
                           const Vec3& x);

// distance from x to triangle t
double point_triangle_distance(const SurfaceMesh& mesh, int t, const Vec3& x);

}// namespace nlbem
