#pragma once

#include <map>
#include <string>
#include <vector>

#include "mortex/types.hpp"

namespace mortex {

enum class ElemKind { T3, Q4 };

inline int node_count(ElemKind k) { return k == ElemKind::T3 ? 3 : 4; }

struct Node {
    int id = -1;
    Vec2 X = Vec2::Zero();  ///< reference coordinates (mm)
};

struct Element {
    int id = -1;
    ElemKind kind = ElemKind::Q4;
    std::array<int, 4> nodes{-1, -1, -1, -1};  ///< CCW, nodes[3] unused for T3

    int nnodes() const { return node_count(kind); }
};

/// 2D mesh of first-order triangles and bilinear quads.
struct Mesh {
    std::vector<Node> nodes;
    std::vector<Element> elements;
    std::map<std::string, std::vector<int>> node_sets;
    /// Ordered node-id chains; closed chains do not repeat the first node.
    std::map<std::string, std::vector<int>> polylines;

    const Vec2& coord(int nid) const { return nodes[nid].X; }

    Vec2 element_centroid(const Element& e) const;
    double element_area(const Element& e) const;  ///< signed, CCW positive
    double element_diameter(const Element& e) const;

    /// Physical corner polygon of an element, CCW.
    std::vector<Vec2> element_polygon(const Element& e) const;

    /// Checks id contiguity, node references, orientation. Throws on failure.
    void validate() const;

    /// Total length of a polyline (closed=true appends first-last edge).
    double polyline_length(const std::vector<int>& chain, bool closed) const;
};

/// Signed area of a simple polygon (shoelace), CCW positive.
double polygon_area(const std::vector<Vec2>& poly);

Vec2 polygon_centroid(const std::vector<Vec2>& poly);

/// Even-odd point-in-polygon test.
bool point_in_polygon(const Vec2& p, const std::vector<Vec2>& poly);

}  // namespace mortex
