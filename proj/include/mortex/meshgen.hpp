#pragma once

#include <functional>
#include <optional>

#include "mortex/mesh.hpp"

namespace mortex {

struct RectSpec {
    double x0 = 0.0, y0 = 0.0, x1 = 1.0, y1 = 1.0;
    int nx = 1, ny = 1;
    ElemKind kind = ElemKind::Q4;
    /// Deterministic jitter of interior nodes; amplitude must stay below half
    /// the minimum element edge.
    double distortion_amplitude = 0.0;
    unsigned distortion_seed = 0;
};

/// Structured rectangle mesh. Registers node sets and CCW boundary polylines
/// "bottom", "right", "top", "left".
Mesh generate_structured_mesh(const RectSpec& spec);

/// Tensor-product mesh from explicit grid lines (graded meshes).
Mesh generate_tensor_mesh(const std::vector<double>& xs,
                          const std::vector<double>& ys, ElemKind kind,
                          double distortion_amplitude = 0.0,
                          unsigned distortion_seed = 0);

/// 1D grid lines over [lo,hi]: spacing h_fine inside [band_lo,band_hi],
/// geometric growth (ratio `growth`) outside.
std::vector<double> graded_coords(double lo, double hi, double band_lo,
                                  double band_hi, double h_fine,
                                  double growth = 1.4);

/// Triangle mesh of a disk of radius `R` centered at `center`, with exactly
/// `n_boundary` boundary segments and radially coarsening interior rings.
/// Registers the closed CCW polyline "boundary".
Mesh generate_disk_mesh(double R, int n_boundary, const Vec2& center = Vec2::Zero(),
                        double growth = 1.35);

/// Closed curve parametrized by s in [0,1).
using Curve = std::function<Vec2(double)>;

Curve circle_curve(double R, const Vec2& center = Vec2::Zero());
/// Square of half-side `a`, radially parametrized to match circle angles.
Curve square_curve(double a, const Vec2& center = Vec2::Zero());

/// Quad O-grid between two closed curves (transfinite interpolation).
/// Registers closed CCW polylines "inner" and "outer" with n_theta nodes each.
Mesh generate_ring_mesh(const Curve& inner, const Curve& outer, int n_theta,
                        int n_r);

/// Welds coincident nodes (within tol) of two meshes into one; polylines and
/// node sets of `b` are carried over with prefixed names on clashes.
Mesh merge_meshes(const Mesh& a, const Mesh& b, double tol);

}  // namespace mortex
