#include <doctest.h>

#include <cmath>

#include "nlbem/quadrature.hpp"

using namespace nlbem;

namespace {

double factorial(int n)
{
    return std::tgamma(n + 1.0);
}

// int over the unit triangle of a1^i a2^j
double monomial(int i, int j)
{
    return factorial(i) * factorial(j) / factorial(i + j + 2);
}

double rule_integral(const TriangleRule& r, int i, int j)
{
    double s = 0.0;
    for (size_t q = 0; q < r.size(); ++q)
        s += r.weights[q] * std::pow(r.points[q][0], i) * std::pow(r.points[q][1], j);
    return 0.5 * s;
}

Vec3 map(const std::array<Vec3, 3>& v, const std::array<double, 2>& a)
{
    return (1.0 - a[0] - a[1]) * v[0] + a[0] * v[1] + a[1] * v[2];
}

// int_T1 int_T2 1/|x-y| with shared vertices listed first in both
double coulomb(const std::array<Vec3, 3>& t1, const std::array<Vec3, 3>& t2, int ncommon, int order)
{
    const PairRule r = sauter_schwab_rule(ncommon, order, order);
    double s = 0.0;
    for (size_t q = 0; q < r.size(); ++q)
        s += r.weights[q] / (map(t1, r.p1[q]) - map(t2, r.p2[q])).norm();
    const double A1 = (t1[1] - t1[0]).cross(t1[2] - t1[0]).norm();
    const double A2 = (t2[1] - t2[0]).cross(t2[2] - t2[0]).norm();
    return s * A1 * A2;
}

}// namespace

TEST_SUITE("quadrature") {

TEST_CASE("Gauss-Legendre integrates polynomials of degree 2n-1")
{
    for (int n = 1; n <= 12; ++n) {
        std::vector<double> x, w;
        gauss_legendre_01(n, x, w);
        for (int k = 0; k <= 2 * n - 1; ++k) {
            double s = 0.0;
            for (int q = 0; q < n; ++q)
                s += w[q] * std::pow(x[q], k);
            CHECK(s == doctest::Approx(1.0 / (k + 1)).epsilon(1e-13));
        }
    }
}

TEST_CASE("triangle rules are exact to their degree")
{
    const TriangleRule& r7 = triangle_rule_7();
    for (int i = 0; i <= 5; ++i)
        for (int j = 0; i + j <= 5; ++j)
            CHECK(rule_integral(r7, i, j) == doctest::Approx(monomial(i, j)).epsilon(1e-13));
    const TriangleRule rc = triangle_rule_collapsed(5);
    for (int i = 0; i <= 8; ++i)
        for (int j = 0; i + j <= 8; ++j)
            CHECK(rule_integral(rc, i, j) == doctest::Approx(monomial(i, j)).epsilon(1e-12));
}

TEST_CASE("pair rules have total weight 1/4")
{
    for (int nc = 0; nc <= 3; ++nc) {
        const PairRule r = sauter_schwab_rule(nc, 4, 4);
        double s = 0.0;
        for (double w : r.weights)
            s += w;
        CHECK(s == doctest::Approx(0.25).epsilon(1e-13));
        for (size_t q = 0; q < r.size(); ++q) {
            CHECK(r.p1[q][0] >= -1e-15);
            CHECK(r.p1[q][1] >= -1e-15);
            CHECK(r.p1[q][0] + r.p1[q][1] <= 1.0 + 1e-15);
            CHECK(r.p2[q][0] + r.p2[q][1] <= 1.0 + 1e-15);
        }
    }
}

TEST_CASE("singular rules converge on the Coulomb kernel")
{
    const std::array<Vec3, 3> a{Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0.2, 0.9, 0)};
    struct Case {
        int nc;
        std::array<Vec3, 3> b;
    };
    const Case cases[] = {
        {3, a},
        {2, {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0.4, -0.3, 0.8)}},   // edge adjacent, not coplanar
        {1, {Vec3(0, 0, 0), Vec3(-0.7, 0.2, 0.5), Vec3(-0.3, -0.9, 0.1)}},
        {0, {Vec3(0, 0, 1.0), Vec3(1, 0, 1.2), Vec3(0, 1, 1.1)}},
    };
    for (const Case& c : cases) {
        CAPTURE(c.nc);
        const double ref = coulomb(a, c.b, c.nc, 20);
        const double e4 = std::abs(coulomb(a, c.b, c.nc, 4) - ref);
        const double e8 = std::abs(coulomb(a, c.b, c.nc, 8) - ref);
        CHECK(e8 < e4 + 1e-14);
        CHECK(e8 < 1e-8 * ref);
    }
}

TEST_CASE("vertex matching")
{
    const VertexMatch m = match_vertices({4, 7, 9}, {9, 2, 4});
    CHECK(m.count == 2);
    const std::array<int, 3> t1{4, 7, 9}, t2{9, 2, 4};
    for (int k = 0; k < 2; ++k)
        CHECK(t1[m.perm1[k]] == t2[m.perm2[k]]);
    CHECK(match_vertices({1, 2, 3}, {4, 5, 6}).count == 0);
    CHECK(match_vertices({1, 2, 3}, {3, 1, 2}).count == 3);
}

}
