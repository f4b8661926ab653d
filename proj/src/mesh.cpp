#include "mortex/mesh.hpp"

#include <cmath>
#include <set>

namespace mortex {

std::vector<Vec2> Mesh::element_polygon(const Element& e) const {
    std::vector<Vec2> poly;
    poly.reserve(e.nnodes());
    for (int a = 0; a < e.nnodes(); ++a) poly.push_back(coord(e.nodes[a]));
    return poly;
}

Vec2 Mesh::element_centroid(const Element& e) const {
    Vec2 c = Vec2::Zero();
    for (int a = 0; a < e.nnodes(); ++a) c += coord(e.nodes[a]);
    return c / e.nnodes();
}

double Mesh::element_area(const Element& e) const {
    return polygon_area(element_polygon(e));
}

double Mesh::element_diameter(const Element& e) const {
    double d = 0.0;
    for (int a = 0; a < e.nnodes(); ++a)
        for (int b = a + 1; b < e.nnodes(); ++b)
            d = std::max(d, (coord(e.nodes[a]) - coord(e.nodes[b])).norm());
    return d;
}

void Mesh::validate() const {
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i].id != static_cast<int>(i))
            throw GeometryError("node ids must be contiguous from 0");
    const int nn = static_cast<int>(nodes.size());
    for (const auto& e : elements) {
        for (int a = 0; a < e.nnodes(); ++a)
            if (e.nodes[a] < 0 || e.nodes[a] >= nn)
                throw GeometryError("element references missing node");
        if (element_area(e) <= 0.0)
            throw GeometryError("element " + std::to_string(e.id) +
                                " is not counter-clockwise");
    }
    for (const auto& [name, chain] : polylines)
        for (int nid : chain)
            if (nid < 0 || nid >= nn)
                throw GeometryError("polyline '" + name + "' references missing node");
}

double Mesh::polyline_length(const std::vector<int>& chain, bool closed) const {
    double len = 0.0;
    const std::size_t n = chain.size();
    for (std::size_t i = 0; i + 1 < n; ++i)
        len += (coord(chain[i + 1]) - coord(chain[i])).norm();
    if (closed && n > 2) len += (coord(chain[0]) - coord(chain[n - 1])).norm();
    return len;
}

double polygon_area(const std::vector<Vec2>& poly) {
    double a = 0.0;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& p = poly[i];
        const Vec2& q = poly[(i + 1) % n];
        a += p.x() * q.y() - q.x() * p.y();
    }
    return 0.5 * a;
}

Vec2 polygon_centroid(const std::vector<Vec2>& poly) {
    double a = 0.0;
    Vec2 c = Vec2::Zero();
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& p = poly[i];
        const Vec2& q = poly[(i + 1) % n];
        const double cross = p.x() * q.y() - q.x() * p.y();
        a += cross;
        c += (p + q) * cross;
    }
    if (std::abs(a) < 1e-300) {
        // degenerate; fall back to vertex average
        c.setZero();
        for (const auto& p : poly) c += p;
        return c / static_cast<double>(n);
    }
    return c / (3.0 * a);
}

bool point_in_polygon(const Vec2& p, const std::vector<Vec2>& poly) {
    bool inside = false;
    const std::size_t n = poly.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Vec2& a = poly[i];
        const Vec2& b = poly[j];
        if ((a.y() > p.y()) != (b.y() > p.y())) {
            const double xint =
                a.x() + (p.y() - a.y()) / (b.y() - a.y()) * (b.x() - a.x());
            if (p.x() < xint) inside = !inside;
        }
    }
    return inside;
}

}  // namespace mortex
