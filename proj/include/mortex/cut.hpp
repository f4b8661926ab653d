#pragma once

#include <array>
#include <optional>

#include "mortex/mesh.hpp"
#include "mortex/shape.hpp"

namespace mortex {

// epsilon policies (relative to element diameter / area)
inline constexpr double kSnapRel = 1e-10;   ///< vertex-on-edge snap
inline constexpr double kAreaRel = 1e-12;   ///< polygon area threshold
inline constexpr double kNudgeRel = 1e-9;   ///< boundary-node-on-host-node nudge

enum class ElementClass { Standard, Blending, Discarded };

/// 0/1 indicator of the effective host volume. phi = 0 inside any discard
/// loop, 1 elsewhere; loops are simple closed polylines in physical space.
struct IndicatorFn {
    std::vector<std::vector<Vec2>> discard_loops;

    bool phi(const Vec2& X) const;
    void validate() const;  ///< throws on self-intersecting loops
};

/// Closes an open interface chain into a discard loop by extending its
/// terminal segments past the host bounding box and wrapping around the side
/// containing `discard_sample`.
IndicatorFn make_indicator_open_chain(const std::vector<Vec2>& chain,
                                      const Vec2& bbox_min, const Vec2& bbox_max,
                                      const Vec2& discard_sample);

/// Nudges loop vertices that coincide with host nodes along the loop tangent.
void nudge_indicator(IndicatorFn& ind, const Mesh& host);

enum class VertexTag { HostNode, ClipIntersection, KinkPoint };

struct ClipPolygon {
    std::vector<Vec2> vertices;  ///< simple, CCW
    std::vector<VertexTag> tags;

    double area() const { return polygon_area(vertices); }
};

struct IntegrationCell {
    std::array<Vec2, 3> parent_tri;  ///< host parent coordinates
    std::vector<Vec2> gauss_parent;
    std::vector<double> gauss_weight;  ///< physical area measure per point
};

std::vector<ElementClass> classify_elements(const Mesh& host,
                                            const IndicatorFn& indicator);

/// Retained-side polygons of one element (possibly several, non-convex).
std::vector<ClipPolygon> clip_element(const Element& e, const Mesh& mesh,
                                      const IndicatorFn& indicator);

/// Triangulates a simple polygon; returns exactly n-2 CCW triangles.
std::vector<std::array<Vec2, 3>> ear_clip(const std::vector<Vec2>& polygon);

std::vector<IntegrationCell> build_integration_cells(
    const Element& e, const Mesh& mesh, const std::vector<ClipPolygon>& polygons);

/// Derived computation mesh where each blending Q4 is split into 2 T3 along
/// the 0-2 diagonal. Node set unchanged.
Mesh triangulate_blending_elements(const Mesh& host,
                                   const std::vector<ElementClass>& classes);

/// Nodes whose every incident element is Discarded.
std::vector<int> orphan_dofs(const Mesh& host,
                             const std::vector<ElementClass>& classes);

/// Classification + clip polygons + integration cells + orphan nodes.
struct CutState {
    std::vector<ElementClass> classes;
    std::vector<std::vector<ClipPolygon>> polygons;       // per element
    std::vector<std::vector<IntegrationCell>> cells;      // per element
    std::vector<int> orphans;

    bool is_active(int elem_id) const {
        return classes[elem_id] != ElementClass::Discarded;
    }
};

CutState build_cut_state(const Mesh& host, const IndicatorFn& indicator);

/// A point strictly inside a simple polygon (first ear centroid).
Vec2 polygon_interior_point(const std::vector<Vec2>& poly);

}  // namespace mortex
