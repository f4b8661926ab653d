#pragma once

#include "mortex/mesh.hpp"

namespace mortex {

// Parent domains:
//   T3: (r,s) with r>=0, s>=0, r+s<=1; nodes at (0,0),(1,0),(0,1)
//   Q4: (mu,eta) in [-1,1]^2; nodes at (-1,-1),(1,-1),(1,1),(-1,1)
//   1D edge: xi in [-1,1]; nodes at -1,+1

/// Containment tolerance in parent coordinates (absorbs clipping round-off).
inline constexpr double kParentTol = 1e-9;

VecX shape_values(ElemKind kind, const Vec2& parent);

/// Rows are nodes, columns parent derivatives (d/dr,d/ds or d/dmu,d/deta).
MatX shape_gradients(ElemKind kind, const Vec2& parent);

/// 1D linear edge shape functions [ (1-xi)/2, (1+xi)/2 ].
Eigen::Vector2d edge_shape_values(double xi);

bool parent_contains(ElemKind kind, const Vec2& parent, double tol = kParentTol);

/// Parent center (T3 centroid, Q4 origin).
Vec2 parent_center(ElemKind kind);

/// Parent-node coordinates of local node a.
Vec2 parent_node(ElemKind kind, int a);

Vec2 forward_map(const Element& e, const Mesh& mesh, const Vec2& parent);

/// Jacobian dX/dparent at a parent point.
Mat2 jacobian(const Element& e, const Mesh& mesh, const Vec2& parent);

/// Physical-space shape gradients at a parent point (rows: nodes).
MatX physical_gradients(const Element& e, const Mesh& mesh, const Vec2& parent);

struct InverseMapResult {
    Vec2 parent;
    bool converged = false;
    bool inside = false;
};

/// Host parent coordinates of a physical point. T3 uses the closed-form
/// affine inverse; Q4 uses Newton (tol 1e-13 on the increment, 30 iterations).
InverseMapResult inverse_map_try(const Element& e, const Mesh& mesh, const Vec2& X,
                                 double inside_tol = kParentTol);

/// Throwing variant: non-convergence or an outside point is an error.
Vec2 inverse_map(const Element& e, const Mesh& mesh, const Vec2& X,
                 double inside_tol = kParentTol);

}  // namespace mortex
