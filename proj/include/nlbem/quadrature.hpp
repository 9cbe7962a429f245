#pragma once

#include <array>
#include <vector>

#include "nlbem/common.hpp"

namespace nlbem {

// Gauss-Legendre rule on [0,1]; weights sum to 1.
void gauss_legendre_01(int n, std::vector<double>& x, std::vector<double>& w);

// Rule on the unit triangle {a1,a2 >= 0, a1+a2 <= 1}. Points are (a1,a2),
// the physical point is (1-a1-a2) v0 + a1 v1 + a2 v2. Weights sum to 1
// (multiply by the triangle area).
struct TriangleRule {
    std::vector<std::array<double, 2>> points;
    std::vector<double> weights;
    size_t size() const { return weights.size(); }
};

// Symmetric 7-point rule, exact for degree 5.
const TriangleRule& triangle_rule_7();

// Collapsed Gauss product rule with n*n points (exact for degree 2n-2).
TriangleRule triangle_rule_collapsed(int n);

// Rule for a pair of triangles sharing `ncommon` vertices (0..3). Points
// are unit-triangle coordinates relative to vertex orderings in which the
// shared vertices come first, in matching order. Weights sum to 1/4, so
// the physical integral is sum(w f) * (2|T1|) (2|T2|).
struct PairRule {
    std::vector<std::array<double, 2>> p1, p2;
    std::vector<double> weights;
    size_t size() const { return weights.size(); }
};

PairRule sauter_schwab_rule(int ncommon, int order, int order_xi);

// Shared vertices of two triangles, ordered so the first `count` entries
// of perm1/perm2 are the common vertices and the rest follow.
struct VertexMatch {
    int count = 0;
    std::array<int, 3> perm1{0, 1, 2};
    std::array<int, 3> perm2{0, 1, 2};
};

VertexMatch match_vertices(const std::array<int, 3>& t1, const std::array<int, 3>& t2);

}// namespace nlbem
