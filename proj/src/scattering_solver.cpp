#include "nlbem/scattering_solver.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <numbers>

#include <omp.h>

namespace nlbem {

void IncidentWave::validate() const
{
    if (!(std::abs(direction.norm() - 1.0) < 1e-12))
        throw ValidationError("wave.direction must be a unit vector");
    if (!(std::abs(polarization.norm() - 1.0) < 1e-12))
        throw ValidationError("wave.polarization must be a unit vector");
    if (!(std::abs(direction.dot(polarization)) < 1e-12))
        throw ValidationError("wave.polarization must be orthogonal to wave.direction");
    if (!(c > 0.0) || !std::isfinite(c))
        throw ValidationError("wave.c must be positive");
    if (!std::isfinite(t0) || !std::isfinite(amplitude))
        throw ValidationError("wave.t0 and wave.amplitude must be finite");
}

double IncidentWave::profile(double t, const Vec3& x) const
{
    const double u = t - direction.dot(x) - t0;
    return amplitude * std::exp(-c * u * u);
}

Vec3 IncidentWave::E(double t, const Vec3& x) const
{
    return profile(t, x) * polarization;
}

Vec3 IncidentWave::H(double t, const Vec3& x) const
{
    return profile(t, x) * direction.cross(polarization);
}

double SolverConfig::effective_sigma() const
{
    if (sigma)
        return *sigma;
    if (m == 2)
        return 0.0;
    const double T = N > 0 ? horizon() : tau;
    return 1.0 / T;
}

void SolverConfig::validate() const
{
    PowerLaw(alpha, reg_eps);
    if (m != 2 && m != 3)
        throw ValidationError("m must be 2 or 3");
    if (!(tau > 0.0) || !std::isfinite(tau))
        throw ValidationError("tau must be positive");
    if (N < 0)
        throw ValidationError("N must be non-negative");
    const double s = effective_sigma();
    if (!(s >= 0.0) || !std::isfinite(s))
        throw ValidationError("sigma must be non-negative");
    if (m > 2 && s == 0.0 && !allow_unshifted)
        throw ValidationError("m > 2 requires a positive shift sigma (set allow_unshifted to override)");
    if (!(newton.tol_rel >= 0.0) || !(newton.tol_abs >= 0.0) || newton.max_iter < 1 || newton.max_halvings < 0)
        throw ValidationError("invalid Newton options");
    if (contour_points != 0 && contour_points < N + 1)
        throw ValidationError("contour_points must be 0 or at least N+1");
    wave.validate();
}

namespace {

// C(s) = [[-V, K], [-K, -V]] applied to a 2D x m block
Eigen::MatrixXcd apply_c(const BoundaryOperators& op, const Eigen::MatrixXcd& v)
{
    const Eigen::Index D = op.V.rows();
    Eigen::MatrixXcd out(2 * D, v.cols());
    out.topRows(D) = -op.V * v.topRows(D) + op.K * v.bottomRows(D);
    out.bottomRows(D) = -op.K * v.topRows(D) - op.V * v.bottomRows(D);
    return out;
}

Eigen::MatrixXcd c_matrix(const BoundaryOperators& op)
{
    const Eigen::Index D = op.V.rows();
    Eigen::MatrixXcd C(2 * D, 2 * D);
    C << -op.V, op.K, -op.K, -op.V;
    return C;
}

// Stage matrix sum_k E(:,k) Einv(k,:) (x) C_k in [phi stages; psi stages] layout.
Eigen::MatrixXcd stage_matrix(const SymbolPoint& sym, const std::vector<Eigen::MatrixXcd>& C)
{
    const int m = static_cast<int>(sym.lambda.size());
    const Eigen::Index D = C[0].rows() / 2;
    Eigen::MatrixXcd W = Eigen::MatrixXcd::Zero(2 * m * D, 2 * m * D);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k) {
                const cplx f = sym.E(i, k) * sym.Einv(k, j);
                for (int a = 0; a < 2; ++a)
                    for (int b = 0; b < 2; ++b)
                        W.block(a * m * D + i * D, b * m * D + j * D, D, D) += f * C[k].block(a * D, b * D, D, D);
            }
    return W;
}

void add_pairing(Eigen::MatrixXd& W, const Eigen::MatrixXd& P, int m)
{
    const Eigen::Index D = P.rows();
    for (int i = 0; i < m; ++i) {
        W.block(i * D, m * D + i * D, D, D) -= 0.5 * P;
        W.block(m * D + i * D, i * D, D, D) -= 0.5 * P;
    }
}

// stage-major (i, block, dof) -> [phi stages; psi stages]
Eigen::MatrixXd to_block_layout(const Eigen::MatrixXd& W, int m, Eigen::Index D)
{
    Eigen::MatrixXd out(W.rows(), W.cols());
    for (int i = 0; i < m; ++i)
        for (int a = 0; a < 2; ++a)
            for (int j = 0; j < m; ++j)
                for (int b = 0; b < 2; ++b)
                    out.block(a * m * D + i * D, b * m * D + j * D, D, D) =
                        W.block(i * 2 * D + a * D, j * 2 * D + b * D, D, D);
    return out;
}

}// namespace

Eigen::MatrixXd stage_matrix_at_zero(const CQContext& ctx, const std::function<Eigen::MatrixXcd(cplx)>& C)
{
    const SymbolPoint sym = ctx.symbol_at_zero();
    std::vector<Eigen::MatrixXcd> vals;
    for (int k = 0; k < ctx.m(); ++k)
        vals.push_back(C(sym.lambda[k] / ctx.tau));
    return stage_matrix(sym, vals).real();
}

Eigen::VectorXd incident_rhs(const RTSpace& space, const IncidentWave& wave, double t)
{
    return -tangential_moments(space, [&](int, const Vec3& x) { return wave.E(t, x); });
}

FrequencyBounds contour_bounds(const CQContext& ctx, double sigma)
{
    FrequencyBounds b;
    b.min_real = std::numeric_limits<double>::infinity();
    auto add = [&](const SymbolPoint& y) {
        for (Eigen::Index k = 0; k < y.lambda.size(); ++k) {
            const cplx s = y.lambda[k] / ctx.tau + sigma;
            b.max_abs = std::max(b.max_abs, std::abs(s));
            b.max_imag = std::max(b.max_imag, std::abs(s.imag()));
            b.min_real = std::min(b.min_real, s.real());
        }// for
    };
    add(ctx.symbol_at_zero());
    for (int l = 0; l <= ctx.M / 2; ++l)
        add(ctx.symbol(l));
    return b;
}

ScatteringSolver::ScatteringSolver(const RTSpace& space, SolverConfig config)
    : space_(space), cfg_(std::move(config)), nonlinear_(space, PowerLaw(cfg_.alpha, cfg_.reg_eps))
{
    cfg_.validate();
    ctx_ = make_cq_context(radau_tableau(cfg_.m), cfg_.tau, cfg_.N, cfg_.eps_acc, cfg_.contour_points);
    sigma_ = cfg_.effective_sigma();
    if (!cfg_.assembly.frozen)
        cfg_.assembly.frozen = contour_bounds(ctx_, sigma_);
    P_ = assemble_pairing(space_);
    const int m = ctx_.m();
    const Eigen::Index D = dim();

    // direct W_0
    w0_ = stage_matrix_at_zero(ctx_, [&](cplx s) {
        return c_matrix(assemble_boundary_operators(space_, s + sigma_, cfg_.assembly));
    });
    add_pairing(w0_, P_, m);

    // frequency store for the history convolution
    freq_.resize(n_half());
    for (int l = 0; l < n_half(); ++l) {
        Frequency& f = freq_[l];
        try {
            f.sym = ctx_.symbol(l);
            for (int k = 0; k < m; ++k)
                f.ops.push_back(
                    assemble_boundary_operators(space_, f.sym.lambda[k] / ctx_.tau + sigma_, cfg_.assembly));
        }
        catch (const std::exception& e) {
            throw NumericalError("frequency " + std::to_string(l) + ": " + e.what());
        }
        if (cfg_.verbose)
            std::fprintf(stderr, "assembled contour point %d/%d\n", l + 1, n_half());
    }
    uhat_.assign(n_half(), Eigen::MatrixXcd::Zero(2 * D, m));

    const Eigen::Index mD = m * D;
    const Eigen::MatrixXd a11 = w0_.topLeftCorner(mD, mD);
    a12_ = w0_.topRightCorner(mD, mD);
    a21_ = w0_.bottomLeftCorner(mD, mD);
    a22_.compute(w0_.bottomRightCorner(mD, mD));
    schur_ = a11 - a12_ * a22_.solve(a21_);
    if (!schur_.allFinite())
        throw NumericalError("stage matrix W_0 could not be factorized");
    last_phi_ = Eigen::VectorXd::Zero(D);
}

Eigen::MatrixXd ScatteringSolver::contour_w0() const
{
    const int M = ctx_.M;
    const int m = ctx_.m();
    const Eigen::Index D = dim();
    Eigen::MatrixXd W = Eigen::MatrixXd::Zero(2 * m * D, 2 * m * D);
    for (int l = 0; l < n_half(); ++l) {
        std::vector<Eigen::MatrixXcd> vals;
        for (const auto& op : freq_[l].ops)
            vals.push_back(c_matrix(op));
        const double weight = (l == 0 || 2 * l == M) ? 1.0 : 2.0;
        W += weight * stage_matrix(freq_[l].sym, vals).real();
    }
    W /= M;
    add_pairing(W, P_, m);
    return W;
}

std::vector<Vec3> ScatteringSolver::incident_trace_points(double t) const
{
    const auto& pts = nonlinear_.points();
    std::vector<Vec3> h(pts.size());
    for (size_t q = 0; q < pts.size(); ++q)
        h[q] = cfg_.wave.H(t, pts[q]).cross(space_.mesh().normals()[nonlinear_.triangle_of(static_cast<int>(q))]);
    return h;
}

Eigen::MatrixXd ScatteringSolver::history_term(int n) const
{
    const int M = ctx_.M;
    const int m = ctx_.m();
    const Eigen::Index D = dim();
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(2 * D, m);
    if (n == 0)
        return h;
    auto contribution = [&](int l) -> Eigen::MatrixXd {
        const Frequency& f = freq_[l];
        // move to the eigenbasis of Delta, apply C at each eigenvalue, move back
        const Eigen::MatrixXcd v = uhat_[l] * f.sym.Einv.transpose();
        Eigen::MatrixXcd w(2 * D, m);
        for (int k = 0; k < m; ++k)
            w.col(k) = apply_c(f.ops[k], v.col(k));
        const double phase = -2.0 * std::numbers::pi * double(l) * n / M;
        const cplx factor = std::pow(ctx_.rho, -n) * std::polar(1.0, phase);
        const double weight = (l == 0 || 2 * l == M) ? 1.0 : 2.0;
        return weight * (factor * (w * f.sym.E.transpose())).real();
    };
    // per frequency terms in parallel, summed in a fixed order so that
    // runs are reproducible bit for bit
    std::vector<Eigen::MatrixXd> parts(n_half());
    if (cfg_.assembly.exec == Execution::serial) {
        for (int l = 0; l < n_half(); ++l)
            parts[l] = contribution(l);
    }
    else {
#pragma omp parallel for schedule(dynamic, 1)
        for (int l = 0; l < n_half(); ++l)
            parts[l] = contribution(l);
    }
    for (const Eigen::MatrixXd& p : parts)
        h += p;
    return h / M;
}

void ScatteringSolver::append_history(const Eigen::MatrixXd& phi, const Eigen::MatrixXd& psi)
{
    const Eigen::Index D = dim();
    Eigen::MatrixXd U(2 * D, phi.cols());
    U.topRows(D) = phi;
    U.bottomRows(D) = psi;
    for (int l = 0; l < n_half(); ++l)
        uhat_[l] += std::pow(ctx_.zeta(l), solved_) * U.cast<cplx>();
}

StepResult ScatteringSolver::step(int n)
{
    if (n != solved_)
        throw ValidationError("steps must be solved in order: expected step " + std::to_string(solved_));
    if (n > ctx_.N)
        throw ValidationError("step index beyond N");
    const int m = ctx_.m();
    const Eigen::Index D = dim();
    const Eigen::Index mD = m * D;

    // right hand side minus history, [phi stages; psi stages]
    const Eigen::MatrixXd hist = history_term(n);
    Eigen::VectorXd r(2 * mD);
    std::vector<std::vector<Vec3>> traces(m);
    std::vector<double> shift(m);
    for (int i = 0; i < m; ++i) {
        const double t = ctx_.stage_time(n, i);
        shift[i] = std::exp(-sigma_ * t);
        r.segment(i * D, D) = shift[i] * incident_rhs(space_, cfg_.wave, t) - hist.col(i).head(D);
        r.segment(mD + i * D, D) = -hist.col(i).tail(D);
        traces[i] = incident_trace_points(t);
    }
    const double rhs_norm = r.norm();
    const double tol = cfg_.newton.tol_abs + cfg_.newton.tol_rel * rhs_norm;

    // Newton on the phi stages of S phi + N(phi) = g
    const Eigen::VectorXd r2 = r.tail(mD);
    const Eigen::VectorXd g = r.head(mD) - a12_ * a22_.solve(r2);
    auto residual = [&](const Eigen::VectorXd& x) {
        Eigen::VectorXd R = schur_ * x - g;
        for (int i = 0; i < m; ++i)
            R.segment(i * D, D) += nonlinear_.residual(x.segment(i * D, D), traces[i], 1.0 / shift[i], shift[i]);
        return R;
    };

    Eigen::VectorXd x(mD);
    for (int i = 0; i < m; ++i)
        x.segment(i * D, D) = last_phi_;
    Eigen::VectorXd R = residual(x);
    double rn = R.norm();
    std::vector<double> history{rn};
    std::vector<std::vector<char>> flipped(m, std::vector<char>(nonlinear_.n_points(), 0));
    int it = 0;
    while (true) {
        if (it >= cfg_.newton.max_iter) {
            std::string msg = "Newton did not converge at step " + std::to_string(n) + " after " +
                              std::to_string(it) + " iterations; residual history:";
            char buf[32];
            for (double h : history) {
                std::snprintf(buf, sizeof buf, " %.3e", h);
                msg += buf;
            }
            throw NumericalError(msg);
        }
        // Newton direction. Near vanishing states the Newton update of a
        // overshoots through zero (x -> (1 - 1/alpha) x for the bare power
        // law), so points the full step would carry through zero are
        // linearized with the secant |x|^(alpha-1) I and the direction is
        // recomputed.
        auto direction = [&]() {
            Eigen::MatrixXd J = schur_;
            for (int i = 0; i < m; ++i)
                J.block(i * D, i * D, D, D) +=
                    nonlinear_.newton_jacobian(x.segment(i * D, D), traces[i], 1.0 / shift[i], shift[i], &flipped[i]);
            Eigen::VectorXd d = -J.partialPivLu().solve(R);
            if (!d.allFinite())
                throw NumericalError("Newton matrix singular at step " + std::to_string(n));
            return d;
        };
        for (auto& f : flipped)
            std::fill(f.begin(), f.end(), 0);
        Eigen::VectorXd dx = direction();
        if (cfg_.alpha != 1.0) {
            int n_flip = 0;
            for (int i = 0; i < m; ++i) {
                const Eigen::VectorXd xi = x.segment(i * D, D);
                const auto v0 = nonlinear_.states(xi, traces[i], 1.0 / shift[i]);
                const auto v1 = nonlinear_.states(xi + dx.segment(i * D, D), traces[i], 1.0 / shift[i]);
                for (size_t q = 0; q < v0.size(); ++q) {
                    flipped[i][q] = v0[q].dot(v1[q]) < 0.0;
                    n_flip += flipped[i][q];
                }
            }
            if (n_flip > 0)
                dx = direction();
        }
        Eigen::VectorXd xn = x + dx;
        Eigen::VectorXd Rn = residual(xn);
        double rnn = Rn.norm();
        double lambda = 1.0;
        for (int h = 0; !(rnn < rn || rnn <= tol); ++h) {
            if (h >= cfg_.newton.max_halvings)
                throw NumericalError("Newton damping underflow at step " + std::to_string(n) + ", residual " +
                                     std::to_string(rn));
            lambda *= 0.5;
            xn = x + lambda * dx;
            Rn = residual(xn);
            rnn = Rn.norm();
        }
        x = std::move(xn);
        R = std::move(Rn);
        rn = rnn;
        history.push_back(rn);
        ++it;
        if (rn <= tol)
            break;
    }

    StepResult out;
    out.phi.resize(D, m);
    out.psi.resize(D, m);
    const Eigen::VectorXd psi = a22_.solve(r2 - a21_ * x);
    for (int i = 0; i < m; ++i) {
        out.phi.col(i) = x.segment(i * D, D);
        out.psi.col(i) = psi.segment(i * D, D);
    }
    if (!out.phi.allFinite() || !out.psi.allFinite())
        throw NumericalError("non-finite densities at step " + std::to_string(n));
    out.iterations = it;
    out.residual = rn;
    out.rhs_norm = rhs_norm;
    last_phi_ = out.phi.col(m - 1);
    append_history(out.phi, out.psi);
    ++solved_;
    return out;
}

DensityHistory ScatteringSolver::run()
{
    DensityHistory hist;
    hist.tau = ctx_.tau;
    hist.sigma = sigma_;
    hist.c = ctx_.tab.c;
    for (int n = solved_; n <= ctx_.N; ++n) {
        StepResult r = step(n);
        for (int i = 0; i < ctx_.m(); ++i) {
            const double s = std::exp(sigma_ * ctx_.stage_time(n, i));
            r.phi.col(i) *= s;
            r.psi.col(i) *= s;
        }
        hist.phi.push_back(std::move(r.phi));
        hist.psi.push_back(std::move(r.psi));
        hist.newton_iterations.push_back(r.iterations);
        if (cfg_.verbose)
            std::fprintf(stderr, "step %d/%d: %d Newton iterations\n", n, ctx_.N, r.iterations);
    }
    return hist;
}

std::vector<Eigen::MatrixXd> explicit_stage_weights(const RTSpace& space, const CQContext& ctx, double sigma,
                                                    const AssemblyOptions& options)
{
    AssemblyOptions opt = options;
    if (!opt.frozen)
        opt.frozen = contour_bounds(ctx, sigma);
    const int m = ctx.m();
    const Eigen::Index D = space.dim();
    const auto Wc = cq_weights(ctx, [&](cplx s) { return c_matrix(assemble_boundary_operators(space, s + sigma, opt)); },
                               ctx.N);
    const Eigen::MatrixXd P = assemble_pairing(space);
    std::vector<Eigen::MatrixXd> W;
    for (const auto& w : Wc)
        W.push_back(to_block_layout(w.real(), m, D));
    W[0] = stage_matrix_at_zero(
        ctx, [&](cplx s) { return c_matrix(assemble_boundary_operators(space, s + sigma, opt)); });
    add_pairing(W[0], P, m);
    return W;
}

DensityHistory solve_linear_reference(const RTSpace& space, const SolverConfig& config)
{
    config.validate();
    if (config.alpha != 1.0)
        throw ValidationError("the linear reference solver needs alpha = 1");
    const CQContext ctx = make_cq_context(radau_tableau(config.m), config.tau, config.N, config.eps_acc,
                                          config.contour_points);
    const double sigma = config.effective_sigma();
    const int m = ctx.m();
    const Eigen::Index D = space.dim();
    const Eigen::Index mD = m * D;
    const auto W = explicit_stage_weights(space, ctx, sigma, config.assembly);
    const Eigen::MatrixXd Mass = assemble_mass(space);

    Eigen::MatrixXd A = W[0];
    for (int i = 0; i < m; ++i)
        A.block(i * D, i * D, D, D) += Mass;
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);

    DensityHistory hist;
    hist.tau = ctx.tau;
    hist.sigma = sigma;
    hist.c = ctx.tab.c;
    std::vector<Eigen::VectorXd> U;
    for (int n = 0; n <= ctx.N; ++n) {
        Eigen::VectorXd r = Eigen::VectorXd::Zero(2 * mD);
        for (int i = 0; i < m; ++i) {
            const double t = ctx.stage_time(n, i);
            const Eigen::VectorXd h = tangential_moments(space, [&](int tri, const Vec3& x) {
                return Vec3(config.wave.H(t, x).cross(space.mesh().normals()[tri]));
            });
            r.segment(i * D, D) = std::exp(-sigma * t) * (incident_rhs(space, config.wave, t) - h);
        }
        for (int j = 0; j < n; ++j)
            r -= W[n - j] * U[j];
        U.push_back(lu.solve(r));
        Eigen::MatrixXd phi(D, m), psi(D, m);
        for (int i = 0; i < m; ++i) {
            const double s = std::exp(sigma * ctx.stage_time(n, i));
            phi.col(i) = s * U.back().segment(i * D, D);
            psi.col(i) = s * U.back().segment(mD + i * D, D);
        }
        hist.phi.push_back(std::move(phi));
        hist.psi.push_back(std::move(psi));
        hist.newton_iterations.push_back(1);
    }
    return hist;
}

FieldSamples evaluate_fields(const RTSpace& space, const CQContext& ctx, double sigma, const DensityHistory& history,
                             const std::vector<Vec3>& points, Execution exec)
{
    const int m = ctx.m();
    const Eigen::Index D = space.dim();
    const int steps = history.steps();
    if (steps > ctx.N + 1)
        throw ValidationError("history longer than the CQ horizon");
    if (steps > 0 && (history.phi[0].rows() != D || history.phi[0].cols() != m))
        throw ValidationError("history does not match the space or the stage count");
    // each point is checked up front so that refusals happen before any work
    for (const auto& x : points)
        for (int t = 0; t < static_cast<int>(space.mesh().n_triangles()); ++t)
            if (point_triangle_distance(space.mesh(), t, x) < space.mesh().diameter(t))
                throw ValidationError("evaluation point closer to the surface than one panel diameter");

    // shifted densities, stage-major [phi_i; psi_i]
    std::vector<Eigen::VectorXd> u(steps, Eigen::VectorXd(2 * m * D));
    for (int n = 0; n < steps; ++n)
        for (int i = 0; i < m; ++i) {
            const double s = std::exp(-sigma * ctx.stage_time(n, i));
            u[n].segment(i * 2 * D, D) = s * history.phi[n].col(i);
            u[n].segment(i * 2 * D + D, D) = s * history.psi[n].col(i);
        }

    FieldSamples out;
    out.points = points;
    out.steps = steps;
    out.m = m;
    out.tau = ctx.tau;
    out.c = ctx.tab.c;
    out.E.assign(points.size(), std::vector<Vec3>(steps * m, Vec3::Zero()));
    out.H = out.E;
    if (steps == 0)
        return out;

    auto one_point = [&](size_t p) {
        const Vec3 x = points[p];
        const auto Wc = cq_weights(
            ctx,
            [&](cplx s) {
                const PotentialRows rows = potential_rows(space, s + sigma, x);
                Eigen::MatrixXcd L(6, 2 * D);
                L << -rows.S, rows.D, -rows.D, -rows.S;
                return L;
            },
            steps - 1);
        std::vector<Eigen::MatrixXd> W;
        for (const auto& w : Wc)
            W.push_back(w.real());
        for (int n = 0; n < steps; ++n) {
            Eigen::VectorXd f = W[0] * u[n];
            for (int j = 0; j < n; ++j)
                f += W[n - j] * u[j];
            for (int i = 0; i < m; ++i) {
                const double s = std::exp(sigma * ctx.stage_time(n, i));
                out.E[p][n * m + i] = s * f.segment<3>(6 * i);
                out.H[p][n * m + i] = s * f.segment<3>(6 * i + 3);
            }
        }
    };
    const long np = static_cast<long>(points.size());
    if (exec == Execution::serial) {
        for (long p = 0; p < np; ++p)
            one_point(p);
    }
    else {
#pragma omp parallel for schedule(dynamic, 1)
        for (long p = 0; p < np; ++p)
            one_point(p);
    }
    return out;
}

ErrorNorms error_norms(const DensityHistory& a, const DensityHistory& b, const RTSpace& space,
                       const ButcherTableau& tab)
{
    if (a.steps() != b.steps() || a.tau != b.tau)
        throw ValidationError("error_norms: histories live on different time grids");
    const Eigen::MatrixXd M = assemble_mass(space);
    ErrorNorms e;
    for (int n = 0; n < a.steps(); ++n) {
        if (a.phi[n].rows() != space.dim() || b.phi[n].rows() != space.dim() || a.phi[n].cols() != tab.m ||
            b.phi[n].cols() != tab.m)
            throw ValidationError("error_norms: history shape does not match the space");
        for (int i = 0; i < tab.m; ++i) {
            const Eigen::VectorXd dp = a.phi[n].col(i) - b.phi[n].col(i);
            const Eigen::VectorXd dq = a.psi[n].col(i) - b.psi[n].col(i);
            e.phi += a.tau * tab.b[i] * dp.dot(M * dp);
            e.psi += a.tau * tab.b[i] * dq.dot(M * dq);
        }
    }
    e.phi = std::sqrt(std::max(e.phi, 0.0));
    e.psi = std::sqrt(std::max(e.psi, 0.0));
    return e;
}

}// namespace nlbem
