#include "mortex/mortar.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "mortex/quadrature.hpp"
#include "mortex/shape.hpp"

namespace mortex {

namespace {

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

/// Interval of segment a+t(b-a), t in [0,1], inside a convex CCW polygon.
std::pair<double, double> interval_in_polygon(const Vec2& a, const Vec2& b,
                                              const std::vector<Vec2>& poly,
                                              double snap_abs) {
    double t0 = 0.0, t1 = 1.0;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& p = poly[i];
        const Vec2& q = poly[(i + 1) % n];
        const Vec2 e = q - p;
        const double elen = e.norm();
        const double da = cross2(e, a - p) / elen;
        const double db = cross2(e, b - p) / elen;
        const double den = db - da;
        if (std::abs(den) < 1e-300) {
            if (da < -snap_abs) return {1.0, 0.0};
            continue;
        }
        const double t = -(da + snap_abs) / den;
        if (den > 0)
            t0 = std::max(t0, t);
        else
            t1 = std::min(t1, t);
    }
    return {t0, t1};
}

int edge_node(const std::vector<int>& chain, bool closed, int edge, int end) {
    const int n = static_cast<int>(chain.size());
    const int i = edge + end;
    return chain[closed ? i % n : i];
}

}  // namespace

std::vector<Segment> build_segments(const Mesh& patch,
                                    const std::vector<int>& chain, bool closed,
                                    const Mesh& host,
                                    const std::vector<ElementClass>& classes) {
    const int n_edges = static_cast<int>(chain.size()) - (closed ? 0 : 1);
    std::vector<Segment> segments;

    for (int k = 0; k < n_edges; ++k) {
        const Vec2 P0 = patch.coord(edge_node(chain, closed, k, 0));
        const Vec2 P1 = patch.coord(edge_node(chain, closed, k, 1));
        const Vec2 emin = P0.cwiseMin(P1), emax = P0.cwiseMax(P1);

        struct Interval {
            double t0, t1;
            int elem;
            ElementClass cls;
        };
        std::vector<Interval> ivals;
        for (const auto& e : host.elements) {
            if (classes[e.id] == ElementClass::Discarded) continue;
            const auto poly = host.element_polygon(e);
            Vec2 bmin = poly[0], bmax = poly[0];
            for (const auto& p : poly) {
                bmin = bmin.cwiseMin(p);
                bmax = bmax.cwiseMax(p);
            }
            const double pad = kSnapRel * host.element_diameter(e) + 1e-14;
            if (emin.x() > bmax.x() + pad || bmin.x() > emax.x() + pad ||
                emin.y() > bmax.y() + pad || bmin.y() > emax.y() + pad)
                continue;
            const double snap = kSnapRel * host.element_diameter(e);
            auto [t0, t1] = interval_in_polygon(P0, P1, poly, snap);
            if (t1 - t0 > 1e-9) ivals.push_back({t0, t1, e.id, classes[e.id]});
        }
        if (ivals.empty())
            throw GeometryError("mortar edge " + std::to_string(k) +
                                " not locatable in any host element");

        // breakpoints partition the edge; each sub-interval gets one owner
        std::vector<double> cuts{0.0, 1.0};
        for (const auto& iv : ivals) {
            cuts.push_back(std::clamp(iv.t0, 0.0, 1.0));
            cuts.push_back(std::clamp(iv.t1, 0.0, 1.0));
        }
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end(),
                               [](double a, double b) { return b - a < 1e-9; }),
                   cuts.end());
        if (cuts.back() < 1.0 - 1e-9) cuts.push_back(1.0);
        cuts.front() = 0.0;
        cuts.back() = 1.0;

        int prev_owner = -1;
        for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
            const double a = cuts[c], b = cuts[c + 1];
            const double tm = 0.5 * (a + b);
            int owner = -1;
            ElementClass owner_cls = ElementClass::Standard;
            for (const auto& iv : ivals) {
                if (tm < iv.t0 - 1e-9 || tm > iv.t1 + 1e-9) continue;
                const bool better =
                    owner < 0 ||
                    (iv.cls == ElementClass::Blending &&
                     owner_cls != ElementClass::Blending) ||
                    (iv.cls == owner_cls && iv.elem < owner);
                if (better) {
                    owner = iv.elem;
                    owner_cls = iv.cls;
                }
            }
            if (owner < 0)
                throw GeometryError("mortar edge " + std::to_string(k) +
                                    " leaves the host mesh");
            if (owner == prev_owner) {
                // merge with the previous sub-interval
                Segment& s = segments.back();
                s.xi_b = 2.0 * b - 1.0;
                s.p1 = P0 + b * (P1 - P0);
                s.tag1 = b > 1.0 - 1e-12 ? VertexTag::KinkPoint
                                         : VertexTag::ClipIntersection;
            } else {
                Segment s;
                s.edge_index = k;
                s.host_elem = owner;
                s.xi_a = 2.0 * a - 1.0;
                s.xi_b = 2.0 * b - 1.0;
                s.p0 = P0 + a * (P1 - P0);
                s.p1 = P0 + b * (P1 - P0);
                s.tag0 = a < 1e-12 ? VertexTag::KinkPoint : VertexTag::ClipIntersection;
                s.tag1 = b > 1.0 - 1e-12 ? VertexTag::KinkPoint
                                         : VertexTag::ClipIntersection;
                segments.push_back(s);
            }
            prev_owner = owner;
        }
    }
    return segments;
}

double segment_jacobian(const Segment& seg, double edge_length) {
    if (edge_length <= 0.0) throw GeometryError("zero-length mortar edge");
    return 0.5 * edge_length * 0.5 * (seg.xi_b - seg.xi_a);
}

std::vector<GaussPointMap> map_gauss_points(const Segment& seg, const Mesh& patch,
                                            const std::vector<int>& chain,
                                            bool closed, const Mesh& host) {
    const Vec2 E0 = patch.coord(edge_node(chain, closed, seg.edge_index, 0));
    const Vec2 E1 = patch.coord(edge_node(chain, closed, seg.edge_index, 1));
    const double elen = (E1 - E0).norm();
    const Element& he = host.elements[seg.host_elem];

    // the segment is straight in the host parent space: its end points are
    // pulled back once and interior quadrature points interpolate the parent
    // coordinates linearly. Inside a bilinear quad whose parent axes are both
    // inclined to the cut, the physical image of that parent line bows away
    // from the straight interface; triangulating blending elements removes
    // the effect (affine maps keep parent and physical lines identical).
    const auto ra = inverse_map_try(he, host, seg.p0, 1e-6);
    const auto rb = inverse_map_try(he, host, seg.p1, 1e-6);
    if (!ra.converged || !rb.converged)
        throw GeometryError("inverse map failed at a segment end point");
    if (!ra.inside || !rb.inside)
        throw GeometryError("segment end point outside its host element");

    const GaussRule1d& rule = segment_rule();
    std::vector<GaussPointMap> out;
    out.reserve(rule.size());
    for (int g = 0; g < rule.size(); ++g) {
        GaussPointMap m;
        m.gamma = rule.points[g];
        m.weight = rule.weights[g];
        m.xi1 = 0.5 * (1.0 - m.gamma) * seg.xi_a + 0.5 * (1.0 + m.gamma) * seg.xi_b;
        const Eigen::Vector2d N = edge_shape_values(m.xi1);
        m.X = N(0) * E0 + N(1) * E1;
        m.jseg = segment_jacobian(seg, elen);
        m.host_parent =
            0.5 * (1.0 - m.gamma) * ra.parent + 0.5 * (1.0 + m.gamma) * rb.parent;
        out.push_back(m);
    }
    return out;
}

VecX dual_basis(DualScheme scheme, double xi1) {
    if (scheme == DualScheme::SliP0) {
        VecX phi(1);
        phi << 1.0;
        return phi;
    }
    const Eigen::Vector2d N = edge_shape_values(xi1);
    VecX phi(2);
    phi << N(0), N(1);
    return phi;
}

void compute_D(MortarElement& el, DualScheme scheme) {
    const int L = scheme == DualScheme::SliP0 ? 1 : 2;
    el.D = MatX::Zero(L, 2);
    for (const auto& g : el.gauss) {
        const VecX phi = dual_basis(scheme, g.xi1);
        const Eigen::Vector2d N = edge_shape_values(g.xi1);
        el.D += g.weight * g.jseg * phi * N.transpose();
    }
}

void compute_M(MortarElement& el, DualScheme scheme, const Mesh& host) {
    const Element& he = host.elements[el.seg.host_elem];
    const int L = scheme == DualScheme::SliP0 ? 1 : 2;
    el.M = MatX::Zero(L, he.nnodes());
    for (const auto& g : el.gauss) {
        const VecX phi = dual_basis(scheme, g.xi1);
        const VecX N2 = shape_values(he.kind, g.host_parent);
        el.M += g.weight * g.jseg * phi * N2.transpose();
    }
}

MortarResidual mortar_residual(const MortarElement& el, const VecX& u_patch,
                               const VecX& u_host, const VecX& lambda) {
    const int L = static_cast<int>(el.D.rows());
    const int N = static_cast<int>(el.M.cols());
    MortarResidual r;
    r.r_patch = VecX::Zero(4);
    r.r_host = VecX::Zero(2 * N);
    r.r_constraint = VecX::Zero(2 * L);
    for (int l = 0; l < L; ++l)
        for (int d = 0; d < 2; ++d) {
            for (int m = 0; m < 2; ++m) {
                r.r_patch(2 * m + d) += el.D(l, m) * lambda(2 * l + d);
                r.r_constraint(2 * l + d) += el.D(l, m) * u_patch(2 * m + d);
            }
            for (int i = 0; i < N; ++i) {
                r.r_host(2 * i + d) -= el.M(l, i) * lambda(2 * l + d);
                r.r_constraint(2 * l + d) -= el.M(l, i) * u_host(2 * i + d);
            }
        }
    return r;
}

MatX mortar_tangent(const MortarElement& el) {
    const int L = static_cast<int>(el.D.rows());
    const int N = static_cast<int>(el.M.cols());
    const int n = 2 * (2 + N + L);
    MatX K = MatX::Zero(n, n);
    const int off_host = 4;
    const int off_lam = 4 + 2 * N;
    for (int l = 0; l < L; ++l)
        for (int d = 0; d < 2; ++d) {
            for (int m = 0; m < 2; ++m) {
                K(2 * m + d, off_lam + 2 * l + d) = el.D(l, m);
                K(off_lam + 2 * l + d, 2 * m + d) = el.D(l, m);
            }
            for (int i = 0; i < N; ++i) {
                K(off_host + 2 * i + d, off_lam + 2 * l + d) = -el.M(l, i);
                K(off_lam + 2 * l + d, off_host + 2 * i + d) = -el.M(l, i);
            }
        }
    return K;
}

MortarInterface build_interface(const Mesh& patch, const std::vector<int>& chain,
                                bool closed, DualScheme scheme, const Mesh& host,
                                const std::vector<ElementClass>& classes) {
    MortarInterface itf;
    itf.chain = chain;
    itf.closed = closed;
    itf.scheme = scheme;
    itf.segments = build_segments(patch, chain, closed, host, classes);
    itf.n_slots = scheme == DualScheme::SliP0 ? itf.n_edges() : itf.n_chain_nodes();

    for (const auto& seg : itf.segments) {
        MortarElement el;
        el.seg = seg;
        el.edge_nodes = {edge_node(chain, closed, seg.edge_index, 0),
                         edge_node(chain, closed, seg.edge_index, 1)};
        const Element& he = host.elements[seg.host_elem];
        el.host_nodes.assign(he.nodes.begin(), he.nodes.begin() + he.nnodes());
        if (scheme == DualScheme::SliP0) {
            el.dual_slots = {seg.edge_index};
        } else {
            const int n = itf.n_chain_nodes();
            el.dual_slots = {seg.edge_index,
                             closed ? (seg.edge_index + 1) % n : seg.edge_index + 1};
        }
        el.gauss = map_gauss_points(seg, patch, chain, closed, host);
        compute_D(el, scheme);
        compute_M(el, scheme, host);
        itf.elements.push_back(std::move(el));
    }
    return itf;
}

MeshContrast compute_mesh_contrast(const std::vector<Segment>& segments,
                                   const std::vector<ElementClass>& classes) {
    MeshContrast mc;
    // the contrast counts mortar edges, not their sub-segment splits: an edge
    // spanning two host elements contributes to both local counts but once to
    // the global tally. Only blending elements crossed by this interface
    // enter the denominator, so the measure stays per-interface even when
    // the host is cut by several chains.
    std::map<int, std::set<int>> edges_in;  // host elem -> edge indices
    std::set<int> edges;
    for (const auto& s : segments) {
        edges.insert(s.edge_index);
        if (classes[s.host_elem] == ElementClass::Blending)
            edges_in[s.host_elem].insert(s.edge_index);
    }
    if (edges_in.empty())
        throw GeometryError("mesh contrast undefined: no blending elements");
    for (const auto& [elem, set] : edges_in)
        mc.local[elem] = static_cast<int>(set.size());
    mc.global =
        static_cast<double>(edges.size()) / static_cast<double>(edges_in.size());
    return mc;
}

}  // namespace mortex
