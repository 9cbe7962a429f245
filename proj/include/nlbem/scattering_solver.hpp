#pragma once

#include <optional>

#include "nlbem/cq_engine.hpp"
#include "nlbem/maxwell_kernels.hpp"
#include "nlbem/nonlinearity.hpp"

namespace nlbem {

// Gaussian plane wave
//   E(t,x) = A exp(-c (t - d.x - t0)^2) p,  H(t,x) = A exp(-c (t - d.x - t0)^2) (d x p)
struct IncidentWave {
    Vec3 direction{0.0, 0.0, 1.0};
    Vec3 polarization{1.0, 0.0, 0.0};
    double c = 100.0;
    double t0 = 2.0;
    double amplitude = 1.0;

    void validate() const;
    double profile(double t, const Vec3& x) const;
    Vec3 E(double t, const Vec3& x) const;
    Vec3 H(double t, const Vec3& x) const;
};

struct NewtonOptions {
    double tol_rel = 1e-9;
    double tol_abs = 1e-12;
    int max_iter = 100;
    int max_halvings = 30;
};

struct SolverConfig {
    double alpha = 0.5;
    double reg_eps = 1e-10;
    int m = 2;
    double tau = 0.1;
    int N = 10;
    std::optional<double> sigma;   // unset: 0 for m = 2, 1/T for m = 3
    bool allow_unshifted = false;  // accept sigma = 0 with m = 3
    double eps_acc = 1e-14;
    int contour_points = 0;        // 0 means N+1
    NewtonOptions newton;
    AssemblyOptions assembly;
    IncidentWave wave;
    bool verbose = false;

    double horizon() const { return N * tau; }
    double effective_sigma() const;
    void validate() const;
};

// Per step n = 0..N: stage values of the densities, one column per stage.
struct DensityHistory {
    double tau = 0.0;
    double sigma = 0.0;
    Eigen::VectorXd c;   // stage abscissae
    std::vector<Eigen::MatrixXd> phi, psi;   // D x m, un-shifted
    std::vector<int> newton_iterations;

    int steps() const { return static_cast<int>(phi.size()); }
    double stage_time(int n, int i) const { return (n + c[i]) * tau; }
};

struct StepResult {
    Eigen::MatrixXd phi, psi;   // shifted stage values, D x m
    int iterations = 0;
    double residual = 0.0;
    double rhs_norm = 0.0;
};

class ScatteringSolver {
public:
    ScatteringSolver(const RTSpace& space, SolverConfig config);

    const SolverConfig& config() const { return cfg_; }
    const CQContext& context() const { return ctx_; }
    const RTSpace& space() const { return space_; }
    double sigma() const { return sigma_; }
    int dim() const { return space_.dim(); }

    // step independent stage matrix of C_imp, layout [phi stages; psi stages]
    const Eigen::MatrixXd& w0() const { return w0_; }
    // the same block synthesized from the cached contour frequencies
    Eigen::MatrixXd contour_w0() const;

    // Solves step n; steps 0..n-1 must have been solved already.
    StepResult step(int n);
    DensityHistory run();

    // gamma_T H^inc at the nonlinear quadrature points
    std::vector<Vec3> incident_trace_points(double t) const;

private:
    struct Frequency {
        SymbolPoint sym;
        std::vector<BoundaryOperators> ops;   // one per eigenvalue
    };

    Eigen::MatrixXd history_term(int n) const;   // 2D x m, [phi; psi] rows
    void append_history(const Eigen::MatrixXd& phi, const Eigen::MatrixXd& psi);
    int n_half() const { return ctx_.M / 2 + 1; }

    const RTSpace& space_;
    SolverConfig cfg_;
    CQContext ctx_;
    double sigma_ = 0.0;
    NonlinearTerm nonlinear_;
    Eigen::MatrixXd P_, w0_;
    std::vector<Frequency> freq_;
    // running sums sum_j zeta_l^j U_j, 2D x m per contour point
    std::vector<Eigen::MatrixXcd> uhat_;
    int solved_ = 0;
    // Schur complement data
    Eigen::PartialPivLU<Eigen::MatrixXd> a22_;
    Eigen::MatrixXd a12_, a21_, schur_;
    Eigen::VectorXd last_phi_;
};

// [gamma_T E^inc(t), eta_i] = -int E^inc(t) . phi_i
Eigen::VectorXd incident_rhs(const RTSpace& space, const IncidentWave& wave, double t);

// Range of the shifted stage frequencies lambda / tau + sigma over the
// contour and Delta(0).
FrequencyBounds contour_bounds(const CQContext& ctx, double sigma);

// Stage matrices W_0..W_N of C_imp(s + sigma), layout [phi stages; psi stages].
// W_0 is evaluated directly at A^-1/tau, the others come from the contour.
std::vector<Eigen::MatrixXd> explicit_stage_weights(const RTSpace& space, const CQContext& ctx, double sigma,
                                                    const AssemblyOptions& opt = {});

// Stage matrix of a 2D x 2D frequency operator family L(s) evaluated at
// A^-1/tau, real part, layout [phi stages; psi stages].
Eigen::MatrixXd stage_matrix_at_zero(const CQContext& ctx, const std::function<Eigen::MatrixXcd(cplx)>& C);

struct FieldSamples {
    std::vector<Vec3> points;
    int steps = 0;
    int m = 0;
    double tau = 0.0;
    Eigen::VectorXd c;
    // index [point][n * m + i]
    std::vector<std::vector<Vec3>> E, H;
    double time(int n, int i) const { return (n + c[i]) * tau; }
};

// Discrete representation formulas at points off Gamma for all steps.
FieldSamples evaluate_fields(const RTSpace& space, const CQContext& ctx, double sigma, const DensityHistory& history,
                             const std::vector<Vec3>& points, Execution exec = Execution::parallel);

struct ErrorNorms {
    double phi = 0.0;   // (tau sum_n sum_i b_i |phi_a - phi_b|^2_L2)^(1/2)
    double psi = 0.0;
};

ErrorNorms error_norms(const DensityHistory& a, const DensityHistory& b, const RTSpace& space,
                       const ButcherTableau& tab);

// Independent linear (alpha = 1) solver with explicit weights W_0..W_N and
// a full LU per step, used to cross check the Newton path.
DensityHistory solve_linear_reference(const RTSpace& space, const SolverConfig& config);

}// namespace nlbem
