#pragma once

#include <vector>

#include "mortex/mesh.hpp"

namespace mortex {

struct GaussRule {
    std::vector<Vec2> points;  ///< parent coordinates
    std::vector<double> weights;

    int size() const { return static_cast<int>(points.size()); }
};

/// Volume rule for an element kind: T3 3-point, Q4 2x2.
const GaussRule& volume_rule(ElemKind kind);

/// 3-point rule on the unit parent triangle (weights sum to 1/2).
const GaussRule& triangle_rule();

struct GaussRule1d {
    std::vector<double> points;  ///< in [-1,1]
    std::vector<double> weights;

    int size() const { return static_cast<int>(points.size()); }
};

/// 3-point Gauss-Legendre on [-1,1]; used for interface segments and edge loads.
const GaussRule1d& segment_rule();

/// n-point Gauss-Legendre on [-1,1], n<=20 (test oracles).
GaussRule1d gauss_legendre(int n);

}  // namespace mortex
