#include "mortex/cut.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "mortex/quadrature.hpp"

namespace mortex {

namespace {

double dist_point_segment(const Vec2& p, const Vec2& a, const Vec2& b) {
    const Vec2 d = b - a;
    const double len2 = d.squaredNorm();
    if (len2 < 1e-300) return (p - a).norm();
    const double u = std::clamp((p - a).dot(d) / len2, 0.0, 1.0);
    return (p - (a + u * d)).norm();
}

double dist_to_polygon_boundary(const Vec2& p, const std::vector<Vec2>& poly) {
    double d = std::numeric_limits<double>::max();
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i)
        d = std::min(d, dist_point_segment(p, poly[i], poly[(i + 1) % n]));
    return d;
}

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

bool segments_intersect(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
    const double d1 = cross2(b - a, c - a);
    const double d2 = cross2(b - a, d - a);
    const double d3 = cross2(d - c, a - c);
    const double d4 = cross2(d - c, b - c);
    return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

/// Interval [t0,t1] of segment a+t(b-a) inside convex CCW polygon; empty if t0>t1.
std::pair<double, double> clip_segment_convex(const Vec2& a, const Vec2& b,
                                              const std::vector<Vec2>& poly,
                                              double snap_abs) {
    double t0 = 0.0, t1 = 1.0;
    const std::size_t n = poly.size();
    const Vec2 d = b - a;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& p = poly[i];
        const Vec2& q = poly[(i + 1) % n];
        const Vec2 e = q - p;
        const double elen = e.norm();
        // signed distance of a point to edge line, positive inside (left)
        const double da = cross2(e, a - p) / elen;
        const double db = cross2(e, b - p) / elen;
        const double num = -da;
        const double den = db - da;
        if (std::abs(den) < 1e-300) {
            if (da < -snap_abs) return {1.0, 0.0};  // parallel, fully outside
            continue;
        }
        const double t = num / den;
        if (den > 0) {
            t0 = std::max(t0, t);
        } else {
            t1 = std::min(t1, t);
        }
    }
    (void)d;
    return {t0, t1};
}

struct Chain {
    std::vector<Vec2> pts;
    std::vector<VertexTag> tags;
};

/// Pieces of one discard loop lying inside the convex element polygon,
/// assembled into boundary-to-boundary chains with interior kink points.
std::vector<Chain> chains_in_element(const std::vector<Vec2>& poly,
                                     const std::vector<Vec2>& loop,
                                     double snap_abs) {
    const int m = static_cast<int>(loop.size());
    struct Piece {
        bool present = false;
        Vec2 p0, p1;
        bool ends_inside = false;  // p1 strictly inside poly
    };
    std::vector<Piece> pieces(m);
    for (int k = 0; k < m; ++k) {
        const Vec2& A = loop[k];
        const Vec2& B = loop[(k + 1) % m];
        auto [t0, t1] = clip_segment_convex(A, B, poly, snap_abs);
        if (t1 - t0 < 1e-12) continue;
        Piece& pc = pieces[k];
        pc.p0 = A + t0 * (B - A);
        pc.p1 = A + t1 * (B - A);
        if ((pc.p1 - pc.p0).norm() < snap_abs) continue;
        pc.present = true;
        pc.ends_inside = t1 > 1.0 - 1e-12 &&
                         dist_to_polygon_boundary(pc.p1, poly) > snap_abs;
    }
    // rotate to a starting edge that does not continue a previous chain
    int k0 = -1;
    for (int k = 0; k < m; ++k) {
        const int prev = (k + m - 1) % m;
        if (!pieces[prev].present || !pieces[prev].ends_inside) {
            k0 = k;
            break;
        }
    }
    if (k0 < 0)
        throw GeometryError("discard loop entirely inside one element (hole)");

    std::vector<Chain> chains;
    Chain cur;
    for (int s = 0; s < m; ++s) {
        const Piece& pc = pieces[(k0 + s) % m];
        if (!pc.present) {
            cur = Chain{};
            continue;
        }
        if (cur.pts.empty()) {
            cur.pts = {pc.p0, pc.p1};
            cur.tags = {VertexTag::ClipIntersection, VertexTag::ClipIntersection};
        } else {
            cur.pts.push_back(pc.p1);
            cur.tags.back() = VertexTag::KinkPoint;
            cur.tags.push_back(VertexTag::ClipIntersection);
        }
        if (!pc.ends_inside) {
            // finalize; drop degenerate chains hugging the boundary
            double maxd = 0.0, len = 0.0;
            for (std::size_t i = 0; i < cur.pts.size(); ++i) {
                maxd = std::max(maxd, dist_to_polygon_boundary(cur.pts[i], poly));
                if (i) len += (cur.pts[i] - cur.pts[i - 1]).norm();
            }
            for (std::size_t i = 0; i + 1 < cur.pts.size(); ++i)
                maxd = std::max(maxd, dist_to_polygon_boundary(
                                          0.5 * (cur.pts[i] + cur.pts[i + 1]), poly));
            if (len > snap_abs && maxd > snap_abs) chains.push_back(cur);
            cur = Chain{};
        }
    }
    if (!cur.pts.empty())
        throw GeometryError("open interface chain terminates inside an element");
    return chains;
}

struct TaggedPoly {
    std::vector<Vec2> v;
    std::vector<VertexTag> t;
};

/// Position of a point on the polygon boundary: (edge index, parameter).
std::pair<int, double> locate_on_boundary(const TaggedPoly& poly, const Vec2& p) {
    int best = -1;
    double bestu = 0.0, bestd = std::numeric_limits<double>::max();
    const int n = static_cast<int>(poly.v.size());
    for (int i = 0; i < n; ++i) {
        const Vec2& a = poly.v[i];
        const Vec2& b = poly.v[(i + 1) % n];
        const Vec2 d = b - a;
        const double len2 = std::max(d.squaredNorm(), 1e-300);
        const double u = std::clamp((p - a).dot(d) / len2, 0.0, 1.0);
        const double dist = (p - (a + u * d)).norm();
        if (dist < bestd) {
            bestd = dist;
            best = i;
            bestu = u;
        }
    }
    return {best, bestu};
}

std::pair<TaggedPoly, TaggedPoly> split_by_chain(const TaggedPoly& poly,
                                                 const Chain& chain,
                                                 double snap_abs) {
    const auto [ea, ua] = locate_on_boundary(poly, chain.pts.front());
    const auto [eb, ub] = locate_on_boundary(poly, chain.pts.back());
    const int n = static_cast<int>(poly.v.size());

    // boundary walk from just after entry point to exit point (inclusive)
    auto walk = [&](int e_from, double u_from, int e_to, double u_to,
                    TaggedPoly& out) {
        int e = e_from;
        double u = u_from;
        int steps = 0;
        while (true) {
            if (++steps > n + 2)
                throw GeometryError("polygon split failed to close");
            if (e == e_to && u <= u_to + 1e-14) {
                const Vec2& a = poly.v[e];
                const Vec2& b = poly.v[(e + 1) % n];
                const Vec2 p = a + u_to * (b - a);
                if (out.v.empty() || (out.v.back() - p).norm() > snap_abs) {
                    out.v.push_back(p);
                    out.t.push_back(VertexTag::ClipIntersection);
                } else if (!out.v.empty()) {
                    out.t.back() = VertexTag::ClipIntersection;
                }
                return;
            }
            // advance to the next polygon vertex
            const int vnext = (e + 1) % n;
            if (out.v.empty() || (out.v.back() - poly.v[vnext]).norm() > snap_abs) {
                out.v.push_back(poly.v[vnext]);
                out.t.push_back(poly.t[vnext]);
            }
            e = vnext;
            u = 0.0;
        }
    };

    // side 1: entry A -> boundary walk -> exit B -> chain reversed -> A
    TaggedPoly s1;
    s1.v.push_back(chain.pts.front());
    s1.t.push_back(VertexTag::ClipIntersection);
    walk(ea, ua, eb, ub, s1);
    for (int i = static_cast<int>(chain.pts.size()) - 2; i >= 1; --i) {
        s1.v.push_back(chain.pts[i]);
        s1.t.push_back(chain.tags[i]);
    }
    // side 2: B -> boundary walk -> A -> chain forward -> B
    TaggedPoly s2;
    s2.v.push_back(chain.pts.back());
    s2.t.push_back(VertexTag::ClipIntersection);
    walk(eb, ub, ea, ua, s2);
    for (std::size_t i = 1; i + 1 < chain.pts.size(); ++i) {
        s2.v.push_back(chain.pts[i]);
        s2.t.push_back(chain.tags[i]);
    }
    // remove a duplicated closing vertex if the walk landed on the start
    auto dedup = [&](TaggedPoly& s) {
        while (s.v.size() > 2 && (s.v.front() - s.v.back()).norm() <= snap_abs) {
            s.v.pop_back();
            s.t.pop_back();
        }
    };
    dedup(s1);
    dedup(s2);
    return {s1, s2};
}

bool bbox_overlap(const Vec2& amin, const Vec2& amax, const Vec2& bmin,
                  const Vec2& bmax) {
    return amin.x() <= bmax.x() && bmin.x() <= amax.x() && amin.y() <= bmax.y() &&
           bmin.y() <= amax.y();
}

}  // namespace

bool IndicatorFn::phi(const Vec2& X) const {
    for (const auto& loop : discard_loops)
        if (point_in_polygon(X, loop)) return false;
    return true;
}

void IndicatorFn::validate() const {
    for (const auto& loop : discard_loops) {
        const int m = static_cast<int>(loop.size());
        if (m < 3) throw GeometryError("discard loop with fewer than 3 vertices");
        for (int i = 0; i < m; ++i)
            for (int j = i + 2; j < m; ++j) {
                if (i == 0 && j == m - 1) continue;  // adjacent via wrap
                if (segments_intersect(loop[i], loop[(i + 1) % m], loop[j],
                                       loop[(j + 1) % m]))
                    throw GeometryError("self-intersecting discard loop");
            }
    }
}

IndicatorFn make_indicator_open_chain(const std::vector<Vec2>& chain,
                                      const Vec2& bbox_min, const Vec2& bbox_max,
                                      const Vec2& discard_sample) {
    if (chain.size() < 2) throw GeometryError("open chain needs >= 2 points");
    const double diag = (bbox_max - bbox_min).norm();
    const Vec2 dir0 = (chain[0] - chain[1]).normalized();
    const Vec2 dir1 = (chain.back() - chain[chain.size() - 2]).normalized();
    std::vector<Vec2> ext = chain;
    ext.front() = chain.front() + 3.0 * diag * dir0;
    ext.insert(ext.begin() + 1, chain.front());
    ext.back() = chain.back();
    ext.push_back(chain.back() + 3.0 * diag * dir1);

    const double M = 4.0 * diag;
    const Vec2 lo = bbox_min - Vec2(M, M), hi = bbox_max + Vec2(M, M);
    const Vec2 F0 = ext.front(), F1 = ext.back();
    // four candidate closures around the inflated box
    const std::vector<std::vector<Vec2>> routes = {
        {{F1.x(), hi.y()}, {F0.x(), hi.y()}},  // over the top
        {{F1.x(), lo.y()}, {F0.x(), lo.y()}},  // under the bottom
        {{hi.x(), F1.y()}, {hi.x(), F0.y()}},  // around the right
        {{lo.x(), F1.y()}, {lo.x(), F0.y()}},  // around the left
    };
    for (const auto& route : routes) {
        std::vector<Vec2> loop = ext;
        loop.insert(loop.end(), route.begin(), route.end());
        IndicatorFn ind{{loop}};
        bool simple = true;
        try {
            ind.validate();
        } catch (const GeometryError&) {
            simple = false;
        }
        if (simple && point_in_polygon(discard_sample, loop) &&
            !ind.phi(discard_sample))
            return ind;
    }
    throw GeometryError("cannot close open interface chain around the host box");
}

void nudge_indicator(IndicatorFn& ind, const Mesh& host) {
    for (auto& loop : ind.discard_loops) {
        const int m = static_cast<int>(loop.size());
        for (int i = 0; i < m; ++i) {
            const Vec2 tang =
                (loop[(i + 1) % m] - loop[(i + m - 1) % m]).normalized();
            const double elen = (loop[(i + 1) % m] - loop[i]).norm();
            for (const auto& n : host.nodes) {
                if ((n.X - loop[i]).norm() < 1e-12 * std::max(elen, 1.0)) {
                    loop[i] += kNudgeRel * elen * tang;
                    break;
                }
            }
        }
    }
}

std::vector<ElementClass> classify_elements(const Mesh& host,
                                            const IndicatorFn& indicator) {
    indicator.validate();
    std::vector<ElementClass> classes(host.elements.size());

    // bbox prefilter against loop edges
    std::vector<std::pair<Vec2, Vec2>> edge_boxes;
    for (const auto& loop : indicator.discard_loops) {
        const int m = static_cast<int>(loop.size());
        for (int i = 0; i < m; ++i) {
            const Vec2& a = loop[i];
            const Vec2& b = loop[(i + 1) % m];
            edge_boxes.emplace_back(a.cwiseMin(b), a.cwiseMax(b));
        }
    }

    for (const auto& e : host.elements) {
        const auto poly = host.element_polygon(e);
        Vec2 bmin = poly[0], bmax = poly[0];
        for (const auto& p : poly) {
            bmin = bmin.cwiseMin(p);
            bmax = bmax.cwiseMax(p);
        }
        const double pad = 1e-9 * (bmax - bmin).norm();
        bool near = false;
        for (const auto& [lo, hi] : edge_boxes)
            if (bbox_overlap(bmin - Vec2(pad, pad), bmax + Vec2(pad, pad), lo, hi)) {
                near = true;
                break;
            }
        if (!near) {
            classes[e.id] = indicator.phi(host.element_centroid(e))
                                ? ElementClass::Standard
                                : ElementClass::Discarded;
            continue;
        }
        const auto polys = clip_element(e, host, indicator);
        double kept = 0.0;
        for (const auto& p : polys) kept += p.area();
        const double full = host.element_area(e);
        if (kept > (1.0 - 1e-9) * full)
            classes[e.id] = ElementClass::Standard;
        else if (kept < 1e-9 * full)
            classes[e.id] = ElementClass::Discarded;
        else
            classes[e.id] = ElementClass::Blending;
    }
    return classes;
}

Vec2 polygon_interior_point(const std::vector<Vec2>& poly) {
    if (poly.size() == 3) return (poly[0] + poly[1] + poly[2]) / 3.0;
    const auto tris = ear_clip(poly);
    for (const auto& t : tris) {
        const double a = polygon_area({t[0], t[1], t[2]});
        if (std::abs(a) > 1e-14) return (t[0] + t[1] + t[2]) / 3.0;
    }
    return polygon_centroid(poly);
}

std::vector<ClipPolygon> clip_element(const Element& e, const Mesh& mesh,
                                      const IndicatorFn& indicator) {
    const auto elem_poly = mesh.element_polygon(e);
    const double diam = mesh.element_diameter(e);
    const double snap_abs = kSnapRel * diam;
    const double area_min = kAreaRel * std::abs(mesh.element_area(e));

    std::vector<Chain> chains;
    for (const auto& loop : indicator.discard_loops) {
        auto c = chains_in_element(elem_poly, loop, snap_abs);
        chains.insert(chains.end(), c.begin(), c.end());
    }

    std::vector<TaggedPoly> polys;
    {
        TaggedPoly p;
        p.v = elem_poly;
        p.t.assign(elem_poly.size(), VertexTag::HostNode);
        polys.push_back(std::move(p));
    }
    for (const auto& chain : chains) {
        // the chain lies inside exactly one current sub-polygon
        const Vec2 probe = 0.5 * (chain.pts[0] + chain.pts[1]);
        int owner = -1;
        for (std::size_t i = 0; i < polys.size(); ++i)
            if (point_in_polygon(probe, polys[i].v)) {
                owner = static_cast<int>(i);
                break;
            }
        if (owner < 0) continue;  // chain collapsed onto a previous split
        auto [s1, s2] = split_by_chain(polys[owner], chain, snap_abs);
        polys.erase(polys.begin() + owner);
        if (s1.v.size() >= 3) polys.push_back(std::move(s1));
        if (s2.v.size() >= 3) polys.push_back(std::move(s2));
    }

    std::vector<ClipPolygon> out;
    for (auto& p : polys) {
        double a = polygon_area(p.v);
        if (std::abs(a) < area_min) continue;
        if (a < 0.0) {
            std::reverse(p.v.begin(), p.v.end());
            std::reverse(p.t.begin(), p.t.end());
        }
        if (!indicator.phi(polygon_interior_point(p.v))) continue;
        out.push_back({std::move(p.v), std::move(p.t)});
    }
    return out;
}

std::vector<std::array<Vec2, 3>> ear_clip(const std::vector<Vec2>& polygon) {
    const int n = static_cast<int>(polygon.size());
    if (n < 3) throw GeometryError("ear clipping needs >= 3 vertices");
    std::vector<Vec2> v = polygon;
    if (polygon_area(v) < 0.0) std::reverse(v.begin(), v.end());

    // reject self-intersecting input
    for (int i = 0; i < n; ++i)
        for (int j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) continue;  // adjacent via wrap
            if (segments_intersect(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n]))
                throw GeometryError("ear clipping of a non-simple polygon");
        }

    double scale = 0.0;
    for (int i = 0; i < n; ++i) scale = std::max(scale, (v[(i + 1) % n] - v[i]).norm());
    const double eps = 1e-12 * scale * scale;

    // a reflex (or collinear) vertex lying inside or on an ear triangle
    // boundary blocks the ear
    auto blocks_ear = [&](const Vec2& p, const Vec2& a, const Vec2& b, const Vec2& c) {
        const double d1 = cross2(b - a, p - a);
        const double d2 = cross2(c - b, p - b);
        const double d3 = cross2(a - c, p - c);
        return d1 > -eps && d2 > -eps && d3 > -eps;
    };

    std::vector<std::array<Vec2, 3>> tris;
    int guard = 0;
    while (v.size() > 3) {
        const int m = static_cast<int>(v.size());
        int ear = -1;
        // prefer a strictly convex ear containing no reflex vertex
        for (int i = 0; i < m; ++i) {
            const Vec2& a = v[(i + m - 1) % m];
            const Vec2& b = v[i];
            const Vec2& c = v[(i + 1) % m];
            const double cr = cross2(b - a, c - b);
            if (cr <= eps) continue;
            bool ok = true;
            for (int j = 0; j < m && ok; ++j) {
                if (j == i || j == (i + m - 1) % m || j == (i + 1) % m) continue;
                const double crj = cross2(v[j] - v[(j + m - 1) % m],
                                          v[(j + 1) % m] - v[j]);
                if (crj > eps) continue;  // convex vertices cannot block
                if (blocks_ear(v[j], a, b, c)) ok = false;
            }
            if (ok) {
                ear = i;
                break;
            }
        }
        if (ear < 0) {
            // clip a collinear (degenerate) corner
            for (int i = 0; i < m; ++i) {
                const Vec2& a = v[(i + m - 1) % m];
                const Vec2& b = v[i];
                const Vec2& c = v[(i + 1) % m];
                if (std::abs(cross2(b - a, c - b)) <= eps) {
                    ear = i;
                    break;
                }
            }
        }
        if (ear < 0) throw GeometryError("ear clipping failed (non-simple polygon?)");
        const int m2 = static_cast<int>(v.size());
        tris.push_back({v[(ear + m2 - 1) % m2], v[ear], v[(ear + 1) % m2]});
        v.erase(v.begin() + ear);
        if (++guard > 10 * n) throw GeometryError("ear clipping did not terminate");
    }
    tris.push_back({v[0], v[1], v[2]});
    return tris;
}

std::vector<IntegrationCell> build_integration_cells(
    const Element& e, const Mesh& mesh, const std::vector<ClipPolygon>& polygons) {
    std::vector<IntegrationCell> cells;
    const GaussRule& rule = triangle_rule();
    for (const auto& poly : polygons) {
        for (const auto& tri : ear_clip(poly.vertices)) {
            IntegrationCell cell;
            for (int k = 0; k < 3; ++k) {
                const auto r = inverse_map_try(e, mesh, tri[k], 1e-7);
                if (!r.converged)
                    throw GeometryError("inverse map failed for a clip vertex");
                cell.parent_tri[k] = r.parent;
            }
            // quadrature lives on the straight physical triangle so that
            // weight sums reproduce the clipped area exactly even for
            // distorted quads; points are pulled back for shape evaluation
            const double a_phys =
                0.5 * cross2(tri[1] - tri[0], tri[2] - tri[0]);
            for (int g = 0; g < rule.size(); ++g) {
                const Vec2& q = rule.points[g];
                const Vec2 X = (1.0 - q.x() - q.y()) * tri[0] + q.x() * tri[1] +
                               q.y() * tri[2];
                const auto r = inverse_map_try(e, mesh, X, 1e-7);
                if (!r.converged || !r.inside)
                    throw GeometryError("inverse map failed for an integration point");
                cell.gauss_parent.push_back(r.parent);
                cell.gauss_weight.push_back(rule.weights[g] * 2.0 * a_phys);
            }
            cells.push_back(std::move(cell));
        }
    }
    return cells;
}

Mesh triangulate_blending_elements(const Mesh& host,
                                   const std::vector<ElementClass>& classes) {
    Mesh out = host;
    out.elements.clear();
    int eid = 0;
    for (const auto& e : host.elements) {
        if (e.kind == ElemKind::Q4 && classes[e.id] == ElementClass::Blending) {
            // fixed 0-2 diagonal
            out.elements.push_back(
                {eid++, ElemKind::T3, {e.nodes[0], e.nodes[1], e.nodes[2], -1}});
            out.elements.push_back(
                {eid++, ElemKind::T3, {e.nodes[0], e.nodes[2], e.nodes[3], -1}});
        } else {
            Element ne = e;
            ne.id = eid++;
            out.elements.push_back(ne);
        }
    }
    return out;
}

std::vector<int> orphan_dofs(const Mesh& host,
                             const std::vector<ElementClass>& classes) {
    std::vector<int> incident(host.nodes.size(), 0);
    std::vector<int> live(host.nodes.size(), 0);
    for (const auto& e : host.elements)
        for (int a = 0; a < e.nnodes(); ++a) {
            ++incident[e.nodes[a]];
            if (classes[e.id] != ElementClass::Discarded) ++live[e.nodes[a]];
        }
    std::vector<int> orphans;
    for (const auto& n : host.nodes)
        if (live[n.id] == 0) orphans.push_back(n.id);
    return orphans;
}

CutState build_cut_state(const Mesh& host, const IndicatorFn& indicator) {
    CutState st;
    st.classes = classify_elements(host, indicator);
    st.polygons.resize(host.elements.size());
    st.cells.resize(host.elements.size());
    for (const auto& e : host.elements) {
        if (st.classes[e.id] != ElementClass::Blending) continue;
        st.polygons[e.id] = clip_element(e, host, indicator);
        if (st.polygons[e.id].empty()) {
            st.classes[e.id] = ElementClass::Discarded;  // below area threshold
            continue;
        }
        st.cells[e.id] = build_integration_cells(e, host, st.polygons[e.id]);
    }
    st.orphans = orphan_dofs(host, st.classes);
    return st;
}

}  // namespace mortex
