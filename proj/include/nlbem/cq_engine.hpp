#pragma once

#include <functional>
#include <vector>

#include "nlbem/common.hpp"

namespace nlbem {

struct ButcherTableau {
    int m = 0;
    Eigen::MatrixXd A;
    Eigen::VectorXd b, c;
};

// Radau IIA with m = 2 or 3 stages.
ButcherTableau radau_tableau(int m);

// Delta(zeta) = (A + zeta/(1-zeta) 1 b^T)^-1, |zeta| < 1.
Eigen::MatrixXcd delta(const ButcherTableau& tab, cplx zeta);
// The same via A^-1 (I - zeta 1 e_m^T).
Eigen::MatrixXcd delta_sherman_morrison(const ButcherTableau& tab, cplx zeta);

// Eigen decomposition Delta = E diag(lambda) E^-1 at one contour point.
struct SymbolPoint {
    cplx zeta;
    Eigen::VectorXcd lambda;
    Eigen::MatrixXcd E, Einv;
};

SymbolPoint decompose_symbol(const Eigen::MatrixXcd& D, cplx zeta);

// Time grid and contour. Weights W_0..W_N come from M >= N+1 contour
// points on |zeta| = rho; by default M = N+1, rho = eps^(1/(2(N+1))).
struct CQContext {
    ButcherTableau tab;
    double tau = 0.0;
    int N = 0;
    int M = 1;
    double rho = 0.0;

    int m() const { return tab.m; }
    double stage_time(int n, int i) const { return (n + tab.c[i]) * tau; }
    cplx zeta(int l) const;
    SymbolPoint symbol(int l) const;   // decomposition at zeta(l)
    SymbolPoint symbol_at_zero() const;   // Delta(0) = A^-1
};

CQContext make_cq_context(const ButcherTableau& tab, double tau, int N, double eps_acc = 1e-14, int M = 0);

// Operator valued transfer function L(s) with fixed r x c shape.
using OperatorSymbol = std::function<Eigen::MatrixXcd(cplx s)>;

// Weights W_0..W_{n_max} of L(Delta(zeta)/tau), each (m r) x (m c) with
// stage blocks (i, j). If real_symbol, L(conj s) = conj L(s) is used to
// halve the number of evaluations.
std::vector<Eigen::MatrixXcd> cq_weights(const CQContext& ctx, const OperatorSymbol& L, int n_max,
                                         bool real_symbol = true);

// Largest |Im W_n| / max |W_n| over the sequence.
double imaginary_residue(const std::vector<Eigen::MatrixXcd>& W);

// sum_{j=0}^n W_{n-j} g_j
Eigen::VectorXcd apply_convolution(const std::vector<Eigen::MatrixXcd>& W, const std::vector<Eigen::VectorXcd>& g,
                                   int n);

// Stage samples g_n = (g(t_n + c_i tau))_i for n = 0..count-1.
std::vector<Eigen::VectorXcd> stage_samples(const CQContext& ctx, const std::function<double(double)>& g, int count);

struct OrderStudy {
    std::vector<int> steps;
    std::vector<double> tau, error;
    std::vector<double> pairwise_order;
    double order = 0.0;   // least squares slope of log error vs log tau
};

// Max stage error of L(d_t^tau) g against the exact convolution on (0,T].
OrderStudy scalar_order_study(const ButcherTableau& tab, const std::function<cplx(cplx)>& L,
                              const std::function<double(double)>& g, const std::function<double(double)>& exact,
                              double T, const std::vector<int>& steps, int contour_factor = 1, double eps_acc = 1e-14);

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y);

struct PartialIntegrationCheck {
    double max_slack = 0.0;   // max(lhs - bound) over the samples
    double max_lhs = 0.0;
    double bound = 0.0;
};

// ||Delta(conj z)^T B Delta(z)^-1|| against (1+sqrt m)||A^-T B A|| + ||e_m b^T||
// for z = rho exp(2 pi i k / samples). Spectral norms, B = diag(b).
PartialIntegrationCheck check_partial_integration_matrix_bound(const ButcherTableau& tab, double rho, int samples);
double partial_integration_lhs(const ButcherTableau& tab, cplx zeta);

// tau sum e^{-2n tau/T} <f_n, (d_t^tau f)_n>_B minus the right hand side
// (tau/2T) sum e^{-2n tau/T} |f_n|_B^2 for m = 2, minus zero otherwise.
// f holds one m-vector per step.
double discrete_coercivity_margin(const ButcherTableau& tab, const std::vector<Eigen::VectorXd>& f, double tau,
                                  double T);
bool check_discrete_coercivity(const ButcherTableau& tab, const std::vector<Eigen::VectorXd>& f, double tau,
                               double T);

}// namespace nlbem
