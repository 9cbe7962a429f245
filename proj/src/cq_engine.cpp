#include "nlbem/cq_engine.hpp"

#include <cmath>
#include <numbers>

#include <fftw3.h>

namespace nlbem {

ButcherTableau radau_tableau(int m)
{
    ButcherTableau t;
    t.m = m;
    if (m == 2) {
        t.A.resize(2, 2);
        t.A << 5.0 / 12.0, -1.0 / 12.0, 3.0 / 4.0, 1.0 / 4.0;
        t.b = Eigen::Vector2d(3.0 / 4.0, 1.0 / 4.0);
        t.c = Eigen::Vector2d(1.0 / 3.0, 1.0);
    }
    else if (m == 3) {
        const double s6 = std::sqrt(6.0);
        t.A.resize(3, 3);
        t.A << (88.0 - 7.0 * s6) / 360.0, (296.0 - 169.0 * s6) / 1800.0, (-2.0 + 3.0 * s6) / 225.0,
            (296.0 + 169.0 * s6) / 1800.0, (88.0 + 7.0 * s6) / 360.0, (-2.0 - 3.0 * s6) / 225.0,
            (16.0 - s6) / 36.0, (16.0 + s6) / 36.0, 1.0 / 9.0;
        t.b = t.A.row(2).transpose();
        t.c = Eigen::Vector3d((4.0 - s6) / 10.0, (4.0 + s6) / 10.0, 1.0);
    }
    else
        throw ValidationError("Radau IIA is available for m = 2 or 3 stages, got " + std::to_string(m));
    return t;
}

Eigen::MatrixXcd delta(const ButcherTableau& tab, cplx zeta)
{
    if (!(std::abs(zeta) < 1.0))
        throw ValidationError("delta: |zeta| must be < 1");
    const int m = tab.m;
    const Eigen::MatrixXcd ones_b = Eigen::VectorXcd::Ones(m) * tab.b.transpose().cast<cplx>();
    const Eigen::MatrixXcd M = tab.A.cast<cplx>() + zeta / (1.0 - zeta) * ones_b;
    return M.inverse();
}

Eigen::MatrixXcd delta_sherman_morrison(const ButcherTableau& tab, cplx zeta)
{
    if (!(std::abs(zeta) < 1.0))
        throw ValidationError("delta: |zeta| must be < 1");
    const int m = tab.m;
    Eigen::MatrixXcd U = Eigen::MatrixXcd::Identity(m, m);
    U.col(m - 1) -= zeta * Eigen::VectorXcd::Ones(m);
    return tab.A.inverse().cast<cplx>() * U;
}

SymbolPoint decompose_symbol(const Eigen::MatrixXcd& D, cplx zeta)
{
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(D);
    if (es.info() != Eigen::Success)
        throw NumericalError("eigendecomposition of Delta(zeta) failed");
    SymbolPoint p;
    p.zeta = zeta;
    p.lambda = es.eigenvalues();
    p.E = es.eigenvectors();
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(p.E);
    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(p.E);
    const double cond = svd.singularValues()(0) / svd.singularValues()(svd.singularValues().size() - 1);
    if (!lu.isInvertible() || !(cond < 1e10))
        throw NumericalError("Delta(zeta) is (nearly) defective on the contour");
    p.Einv = lu.inverse();
    return p;
}

cplx CQContext::zeta(int l) const
{
    return rho * std::polar(1.0, 2.0 * std::numbers::pi * l / M);
}

SymbolPoint CQContext::symbol(int l) const
{
    const cplx z = zeta(l);
    return decompose_symbol(delta_sherman_morrison(tab, z), z);
}

SymbolPoint CQContext::symbol_at_zero() const
{
    return decompose_symbol(tab.A.inverse().cast<cplx>(), 0.0);
}

CQContext make_cq_context(const ButcherTableau& tab, double tau, int N, double eps_acc, int M)
{
    if (!(tau > 0.0))
        throw ValidationError("time step tau must be positive");
    if (N < 0)
        throw ValidationError("number of steps N must be non-negative");
    if (!(eps_acc > 0.0 && eps_acc < 1.0))
        throw ValidationError("contour accuracy must lie in (0,1)");
    CQContext ctx;
    ctx.tab = tab;
    ctx.tau = tau;
    ctx.N = N;
    ctx.M = M > 0 ? M : N + 1;
    if (ctx.M < N + 1)
        throw ValidationError("need at least N+1 contour points");
    ctx.rho = std::pow(eps_acc, 1.0 / (2.0 * (N + 1)));
    return ctx;
}

std::vector<Eigen::MatrixXcd> cq_weights(const CQContext& ctx, const OperatorSymbol& L, int n_max, bool real_symbol)
{
    if (n_max < 0 || n_max >= ctx.M)
        throw ValidationError("cq_weights: n_max must lie in [0, M)");
    const int m = ctx.m();
    const int M = ctx.M;
    Eigen::Index rows = 0, cols = 0;

    // Stage level transfer matrices L(Delta(zeta_l)/tau), l-major storage.
    std::vector<Eigen::MatrixXcd> Ls(M);
    const int last = real_symbol ? M / 2 : M - 1;
    for (int l = 0; l <= last; ++l) {
        const SymbolPoint p = ctx.symbol(l);
        std::vector<Eigen::MatrixXcd> vals(m);
        for (int k = 0; k < m; ++k) {
            vals[k] = L(p.lambda[k] / ctx.tau);
            if (k == 0 && l == 0) {
                rows = vals[0].rows();
                cols = vals[0].cols();
            }
            if (vals[k].rows() != rows || vals[k].cols() != cols)
                throw ValidationError("cq_weights: symbol changed shape between frequencies");
        }
        Eigen::MatrixXcd Lz = Eigen::MatrixXcd::Zero(m * rows, m * cols);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                for (int k = 0; k < m; ++k)
                    Lz.block(i * rows, j * cols, rows, cols) += (p.E(i, k) * p.Einv(k, j)) * vals[k];
        Ls[l] = std::move(Lz);
    }
    if (real_symbol)
        for (int l = last + 1; l < M; ++l)
            Ls[l] = Ls[M - l].conjugate();

    const Eigen::Index entries = m * rows * m * cols;
    fftw_complex* data = fftw_alloc_complex(static_cast<size_t>(entries) * M);
    for (int l = 0; l < M; ++l) {
        const cplx* src = Ls[l].data();
        for (Eigen::Index e = 0; e < entries; ++e) {
            data[l * entries + e][0] = src[e].real();
            data[l * entries + e][1] = src[e].imag();
        }
        Ls[l].resize(0, 0);
    }
    int n = M;
    fftw_plan plan = fftw_plan_many_dft(1, &n, static_cast<int>(entries), data, nullptr, static_cast<int>(entries), 1,
                                        data, nullptr, static_cast<int>(entries), 1, FFTW_FORWARD, FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);

    std::vector<Eigen::MatrixXcd> W(n_max + 1, Eigen::MatrixXcd(m * rows, m * cols));
    for (int k = 0; k <= n_max; ++k) {
        const double scale = std::pow(ctx.rho, -k) / M;
        cplx* dst = W[k].data();
        for (Eigen::Index e = 0; e < entries; ++e)
            dst[e] = scale * cplx(data[k * entries + e][0], data[k * entries + e][1]);
    }
    fftw_free(data);
    return W;
}

double imaginary_residue(const std::vector<Eigen::MatrixXcd>& W)
{
    double re = 0.0, im = 0.0;
    for (const auto& w : W) {
        re = std::max(re, w.cwiseAbs().maxCoeff());
        im = std::max(im, w.imag().cwiseAbs().maxCoeff());
    }
    return re > 0.0 ? im / re : im;
}

Eigen::VectorXcd apply_convolution(const std::vector<Eigen::MatrixXcd>& W, const std::vector<Eigen::VectorXcd>& g,
                                   int n)
{
    if (n < 0 || n >= static_cast<int>(g.size()) || n >= static_cast<int>(W.size()))
        throw ValidationError("apply_convolution: index out of range");
    Eigen::VectorXcd out = W[n] * g[0];
    for (int j = 1; j <= n; ++j)
        out += W[n - j] * g[j];
    return out;
}

std::vector<Eigen::VectorXcd> stage_samples(const CQContext& ctx, const std::function<double(double)>& g, int count)
{
    std::vector<Eigen::VectorXcd> out(count, Eigen::VectorXcd(ctx.m()));
    for (int n = 0; n < count; ++n)
        for (int i = 0; i < ctx.m(); ++i)
            out[n][i] = g(ctx.stage_time(n, i));
    return out;
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

OrderStudy scalar_order_study(const ButcherTableau& tab, const std::function<cplx(cplx)>& L,
                              const std::function<double(double)>& g, const std::function<double(double)>& exact,
                              double T, const std::vector<int>& steps, int contour_factor, double eps_acc)
{
    OrderStudy study;
    std::vector<double> lx, ly;
    for (int N : steps) {
        const double tau = T / N;
        const CQContext ctx = make_cq_context(tab, tau, N, eps_acc, contour_factor * (N + 1));
        const auto W = cq_weights(ctx, [&](cplx s) { return Eigen::MatrixXcd::Constant(1, 1, L(s)); }, N);
        const auto samples = stage_samples(ctx, g, N);
        double err = 0.0;
        for (int n = 0; n < N; ++n) {
            const Eigen::VectorXcd v = apply_convolution(W, samples, n);
            for (int i = 0; i < tab.m; ++i)
                err = std::max(err, std::abs(v[i] - exact(ctx.stage_time(n, i))));
        }
        study.steps.push_back(N);
        study.tau.push_back(tau);
        study.error.push_back(err);
        lx.push_back(std::log(tau));
        ly.push_back(std::log(err));
    }
    for (size_t k = 1; k < study.error.size(); ++k)
        study.pairwise_order.push_back(std::log(study.error[k - 1] / study.error[k]) /
                                       std::log(study.tau[k - 1] / study.tau[k]));
    study.order = least_squares_slope(lx, ly);
    return study;
}

double partial_integration_lhs(const ButcherTableau& tab, cplx zeta)
{
    const Eigen::MatrixXcd B = tab.b.asDiagonal().toDenseMatrix().cast<cplx>();
    const Eigen::MatrixXcd Dbar_t = delta_sherman_morrison(tab, std::conj(zeta)).transpose();
    const int m = tab.m;
    const Eigen::MatrixXcd ones_b = Eigen::VectorXcd::Ones(m) * tab.b.transpose().cast<cplx>();
    // Delta(zeta)^-1 = A + zeta/(1-zeta) 1 b^T
    const Eigen::MatrixXcd Dinv = tab.A.cast<cplx>() + zeta / (1.0 - zeta) * ones_b;
    const Eigen::MatrixXcd X = Dbar_t * B * Dinv;
    return Eigen::JacobiSVD<Eigen::MatrixXcd>(X).singularValues()(0);
}

PartialIntegrationCheck check_partial_integration_matrix_bound(const ButcherTableau& tab, double rho, int samples)
{
    if (!(rho > 0.0 && rho < 1.0))
        throw ValidationError("contour radius must lie in (0,1)");
    const int m = tab.m;
    const Eigen::MatrixXd B = tab.b.asDiagonal();
    const Eigen::MatrixXd Ainv = tab.A.inverse();
    const Eigen::MatrixXd X = Ainv.transpose() * B * tab.A;
    Eigen::MatrixXd emb = Eigen::MatrixXd::Zero(m, m);
    emb.row(m - 1) = tab.b.transpose();
    PartialIntegrationCheck out;
    out.bound = (1.0 + std::sqrt(double(m))) * Eigen::JacobiSVD<Eigen::MatrixXd>(X).singularValues()(0) +
                Eigen::JacobiSVD<Eigen::MatrixXd>(emb).singularValues()(0);
    out.max_slack = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < samples; ++k) {
        const cplx z = rho * std::polar(1.0, 2.0 * std::numbers::pi * k / samples);
        const double lhs = partial_integration_lhs(tab, z);
        out.max_lhs = std::max(out.max_lhs, lhs);
        out.max_slack = std::max(out.max_slack, lhs - out.bound);
    }
    return out;
}

double discrete_coercivity_margin(const ButcherTableau& tab, const std::vector<Eigen::VectorXd>& f, double tau,
                                  double T)
{
    const int m = tab.m;
    // d_t^tau has the two exact weights A^-1/tau and -A^-1 1 e_m^T/tau
    const Eigen::MatrixXd W0 = tab.A.inverse() / tau;
    Eigen::MatrixXd W1 = Eigen::MatrixXd::Zero(m, m);
    W1.col(m - 1) = -W0 * Eigen::VectorXd::Ones(m);
    const Eigen::VectorXd b = tab.b;

    double lhs = 0.0, rhs = 0.0;
    for (size_t n = 0; n < f.size(); ++n) {
        Eigen::VectorXd df = W0 * f[n];
        if (n > 0)
            df += W1 * f[n - 1];
        const double w = std::exp(-2.0 * n * tau / T);
        lhs += tau * w * f[n].dot(b.cwiseProduct(df));
        rhs += tau / (2.0 * T) * w * f[n].dot(b.cwiseProduct(f[n]));
    }
    return m == 2 ? lhs - rhs : lhs;
}

bool check_discrete_coercivity(const ButcherTableau& tab, const std::vector<Eigen::VectorXd>& f, double tau,
                               double T)
{
    return discrete_coercivity_margin(tab, f, tau, T) >= -1e-12;
}

}// namespace nlbem
