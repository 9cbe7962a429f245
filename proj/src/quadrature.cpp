#include "nlbem/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace nlbem {

void gauss_legendre_01(int n, std::vector<double>& x, std::vector<double>& w)
{
    if (n < 1)
        throw ValidationError("Gauss rule needs at least one point");
    x.resize(n);
    w.resize(n);
    // Newton iteration on P_n starting from Chebyshev-like guesses
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int k = 1; k <= n; ++k) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
            }
            dp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16)
                break;
        }
        const double wt = 2.0 / ((1.0 - z * z) * dp * dp);
        // map [-1,1] -> [0,1]
        x[i] = 0.5 * (1.0 - z);
        x[n - 1 - i] = 0.5 * (1.0 + z);
        w[i] = w[n - 1 - i] = 0.5 * wt;
    }
}

const TriangleRule& triangle_rule_7()
{
    static const TriangleRule rule = [] {
        TriangleRule r;
        const double s15 = std::sqrt(15.0);
        const double a = (6.0 - s15) / 21.0, b = (6.0 + s15) / 21.0;
        const double wa = (155.0 - s15) / 1200.0, wb = (155.0 + s15) / 1200.0;
        r.points = {{1.0 / 3.0, 1.0 / 3.0}, {a, a}, {1.0 - 2.0 * a, a}, {a, 1.0 - 2.0 * a},
                    {b, b}, {1.0 - 2.0 * b, b}, {b, 1.0 - 2.0 * b}};
        r.weights = {9.0 / 40.0, wa, wa, wa, wb, wb, wb};
        return r;
    }();
    return rule;
}

TriangleRule triangle_rule_collapsed(int n)
{
    std::vector<double> x, w;
    gauss_legendre_01(n, x, w);
    TriangleRule r;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            // (u,v) in the square -> (u, v(1-u)) in the triangle, jacobian 1-u
            r.points.push_back({x[i], x[j] * (1.0 - x[i])});
            r.weights.push_back(2.0 * w[i] * w[j] * (1.0 - x[i]));
        }
    }
    return r;
}

//
// The four cases of the Sauter-Schwab transformation. Points are first
// produced in {0 <= y <= x <= 1} and then shifted to the unit triangle.
//
PairRule sauter_schwab_rule(int ncommon, int order, int order_xi)
{
    std::vector<double> x, w, xx, wx;
    gauss_legendre_01(order, x, w);
    gauss_legendre_01(order_xi, xx, wx);

    PairRule r;
    auto add = [&r](double a0, double a1, double b0, double b1, double weight) {
        r.p1.push_back({a0 - a1, a1});
        r.p2.push_back({b0 - b1, b1});
        r.weights.push_back(weight);
    };

    for (int i = 0; i < order_xi; ++i) {
        const double xi = xx[i];
        const double xi3 = xi * xi * xi;
        for (int i3 = 0; i3 < order; ++i3) {
            const double e3 = x[i3];
            for (int i2 = 0; i2 < order; ++i2) {
                const double e2 = x[i2];
                for (int i1 = 0; i1 < order; ++i1) {
                    const double e1 = x[i1];
                    const double wt = wx[i] * w[i3] * w[i2] * w[i1];
                    switch (ncommon) {
                    case 3: {
                        const double lw = wt * xi3 * e1 * e1 * e2;
                        add(xi, xi * (1 - e1 + e1 * e2), xi * (1 - e1 * e2 * e3), xi * (1 - e1), lw);
                        add(xi * (1 - e1 * e2 * e3), xi * (1 - e1), xi, xi * (1 - e1 + e1 * e2), lw);
                        add(xi, xi * e1 * (1 - e2 + e2 * e3), xi * (1 - e1 * e2), xi * e1 * (1 - e2), lw);
                        add(xi * (1 - e1 * e2), xi * e1 * (1 - e2), xi, xi * e1 * (1 - e2 + e2 * e3), lw);
                        add(xi * (1 - e1 * e2 * e3), xi * e1 * (1 - e2 * e3), xi, xi * e1 * (1 - e2), lw);
                        add(xi, xi * e1 * (1 - e2), xi * (1 - e1 * e2 * e3), xi * e1 * (1 - e2 * e3), lw);
                        break;
                    }
                    case 2: {
                        const double lw = wt * xi3 * e1 * e1 * e2;
                        add(xi, xi * e1 * e3, xi * (1 - e1 * e2), xi * e1 * (1 - e2), wt * xi3 * e1 * e1);
                        add(xi, xi * e1, xi * (1 - e1 * e2 * e3), xi * e1 * e2 * (1 - e3), lw);
                        add(xi * (1 - e1 * e2), xi * e1 * (1 - e2), xi, xi * e1 * e2 * e3, lw);
                        add(xi * (1 - e1 * e2 * e3), xi * e1 * e2 * (1 - e3), xi, xi * e1, lw);
                        add(xi * (1 - e1 * e2 * e3), xi * e1 * (1 - e2 * e3), xi, xi * e1 * e2, lw);
                        break;
                    }
                    case 1: {
                        const double lw = wt * xi3 * e2;
                        add(xi, xi * e1, xi * e2, xi * e2 * e3, lw);
                        add(xi * e2, xi * e2 * e3, xi, xi * e1, lw);
                        break;
                    }
                    case 0:
                        add(xi, xi * e1, e2, e2 * e3, wt * xi * e2);
                        break;
                    default:
                        throw ValidationError("triangle pair with more than 3 shared vertices");
                    }
                }// for
            }// for
        }// for
    }// for
    return r;
}

VertexMatch match_vertices(const std::array<int, 3>& t1, const std::array<int, 3>& t2)
{
    VertexMatch m;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            if (t1[i] == t2[j]) {
                m.perm1[m.count] = i;
                m.perm2[m.count] = j;
                ++m.count;
                break;
            }
        }
    }
    // fill the remaining slots with the unshared vertices in natural order
    auto fill = [&m](std::array<int, 3>& perm) {
        int k = m.count;
        for (int i = 0; i < 3 && k < 3; ++i) {
            bool used = false;
            for (int j = 0; j < m.count; ++j)
                used = used || perm[j] == i;
            if (!used)
                perm[k++] = i;
        }
    };
    fill(m.perm1);
    fill(m.perm2);
    return m;
}

}// namespace nlbem
