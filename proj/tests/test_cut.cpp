#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "mortex/cut.hpp"
#include "mortex/meshgen.hpp"

using namespace mortex;

namespace {

Mesh unit_square_q4() {
    Mesh m;
    m.nodes = {{0, Vec2(0, 0)}, {1, Vec2(1, 0)}, {2, Vec2(1, 1)}, {3, Vec2(0, 1)}};
    m.elements.push_back({0, ElemKind::Q4, {0, 1, 2, 3}});
    return m;
}

/// Discard loop below a horizontal line y=c, wide enough to cover the mesh.
IndicatorFn discard_below(double c, double x0 = -10, double x1 = 10,
                          double y0 = -10) {
    IndicatorFn ind;
    ind.discard_loops = {{Vec2(x0, y0), Vec2(x1, y0), Vec2(x1, c), Vec2(x0, c)}};
    return ind;
}

IndicatorFn discard_circle(const Vec2& c, double R, int n = 256) {
    IndicatorFn ind;
    std::vector<Vec2> loop;
    for (int i = 0; i < n; ++i) {
        const double th = 2.0 * M_PI * i / n;
        loop.push_back(c + R * Vec2(std::cos(th), std::sin(th)));
    }
    ind.discard_loops = {loop};
    return ind;
}

double total_polygon_area(const std::vector<ClipPolygon>& polys) {
    double a = 0.0;
    for (const auto& p : polys) a += p.area();
    return a;
}

double cell_weight_sum(const std::vector<IntegrationCell>& cells) {
    double a = 0.0;
    for (const auto& c : cells)
        for (double w : c.gauss_weight) a += w;
    return a;
}

}  // namespace

TEST_CASE("classification: trivial and circle-cut grid cases") {
    RectSpec spec;
    spec.nx = 10;
    spec.ny = 10;
    const Mesh grid = generate_structured_mesh(spec);  // [0,1]^2

    // boundary far outside the mesh: everything standard
    {
        const auto cls = classify_elements(grid, discard_circle(Vec2(50, 50), 1.0));
        for (auto c : cls) CHECK(c == ElementClass::Standard);
    }
    // horizontal cut through a single element
    {
        const Mesh one = unit_square_q4();
        const auto cls = classify_elements(one, discard_below(0.5));
        REQUIRE(cls.size() == 1);
        CHECK(cls[0] == ElementClass::Blending);
    }
    // circle R=0.25 at the grid center, interior discarded
    {
        const double R = 0.25;
        const Vec2 C(0.5, 0.5);
        const IndicatorFn ind = discard_circle(C, R);
        const auto cls = classify_elements(grid, ind);
        REQUIRE(cls.size() == grid.elements.size());
        int n_std = 0, n_blend = 0, n_disc = 0;
        double a_disc = 0.0, a_blend = 0.0;
        for (const auto& e : grid.elements) {
            switch (cls[e.id]) {
                case ElementClass::Standard: ++n_std; break;
                case ElementClass::Blending:
                    ++n_blend;
                    a_blend += grid.element_area(e);
                    break;
                case ElementClass::Discarded:
                    ++n_disc;
                    a_disc += grid.element_area(e);
                    break;
            }
        }
        CHECK(n_std + n_blend + n_disc == 100);
        CHECK(n_disc > 0);
        CHECK(n_blend > 0);
        CHECK(a_disc < M_PI * R * R);
        CHECK(a_disc + a_blend > M_PI * R * R);

        // independent oracle: an element is discarded iff centroid and all
        // corners are inside the discard loop, standard iff all outside
        for (const auto& e : grid.elements) {
            const auto poly = grid.element_polygon(e);
            int inside = point_in_polygon(grid.element_centroid(e),
                                          ind.discard_loops[0]);
            for (const auto& v : poly)
                inside += point_in_polygon(v, ind.discard_loops[0]);
            if (inside == e.nnodes() + 1)
                CHECK(cls[e.id] == ElementClass::Discarded);
            else if (inside == 0)
                CHECK(cls[e.id] == ElementClass::Standard);
            else
                CHECK(cls[e.id] == ElementClass::Blending);
        }
    }
    // self-intersecting loop rejected
    {
        IndicatorFn bad;
        bad.discard_loops = {
            {Vec2(0, 0), Vec2(1, 1), Vec2(1, 0), Vec2(0, 1)}};
        CHECK_THROWS_AS(bad.validate(), GeometryError);
    }
}

TEST_CASE("clip_element: known areas, V-notch, disjoint strips") {
    const Mesh one = unit_square_q4();
    const Element& e = one.elements[0];

    // retain y > 0.25: single quad of area 0.75
    {
        const auto polys = clip_element(e, one, discard_below(0.25));
        REQUIRE(polys.size() == 1);
        CHECK(polys[0].vertices.size() == 4);
        CHECK(polys[0].area() == doctest::Approx(0.75).epsilon(1e-12));
    }
    // V-notch entering and exiting the top edge: non-convex polygon,
    // area = 1 - notch triangle area
    {
        IndicatorFn ind;
        ind.discard_loops = {{Vec2(0.3, 2.0), Vec2(0.5, 0.6), Vec2(0.7, 2.0)}};
        const auto polys = clip_element(e, one, ind);
        REQUIRE(polys.size() == 1);
        // notch triangle: apex (0.5,0.6), cut at y=1 between x=0.3+0.2*... ;
        // intersections of loop edges with y=1
        const double x_l = 0.3 + 0.2 * (2.0 - 1.0) / (2.0 - 0.6);
        const double x_r = 0.7 - 0.2 * (2.0 - 1.0) / (2.0 - 0.6);
        const double notch = 0.5 * (x_r - x_l) * (1.0 - 0.6);
        CHECK(polys[0].area() == doctest::Approx(1.0 - notch).epsilon(1e-12));
        CHECK(polys[0].vertices.size() >= 7);  // non-convex: 4 corners + 3 cut pts
    }
    // two parallel chords, middle band discarded: two disjoint strips
    {
        IndicatorFn ind;
        ind.discard_loops = {{Vec2(-5, 0.4), Vec2(5, 0.4), Vec2(5, 0.6), Vec2(-5, 0.6)}};
        const auto polys = clip_element(e, one, ind);
        REQUIRE(polys.size() == 2);
        CHECK(total_polygon_area(polys) == doctest::Approx(0.8).epsilon(1e-12));
        for (const auto& p : polys)
            CHECK(p.area() == doctest::Approx(0.4).epsilon(1e-12));
    }
    // all polygons carry CCW orientation and provenance tags
    {
        const auto polys = clip_element(e, one, discard_below(0.33));
        for (const auto& p : polys) {
            CHECK(p.area() > 0.0);
            REQUIRE(p.tags.size() == p.vertices.size());
            int n_cut = 0;
            for (auto t : p.tags) n_cut += (t == VertexTag::ClipIntersection);
            CHECK(n_cut == 2);
        }
    }
}

TEST_CASE("area conservation: retained + discarded = element area (randomized)") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::uniform_real_distribution<double> u11(-1.0, 1.0);

    int checked = 0;
    for (int trial = 0; trial < 400; ++trial) {
        // random distorted quad around the unit square
        Mesh m;
        m.nodes = {{0, Vec2(0 + 0.2 * u11(rng), 0 + 0.2 * u11(rng))},
                   {1, Vec2(1 + 0.2 * u11(rng), 0 + 0.2 * u11(rng))},
                   {2, Vec2(1 + 0.2 * u11(rng), 1 + 0.2 * u11(rng))},
                   {3, Vec2(0 + 0.2 * u11(rng), 1 + 0.2 * u11(rng))}};
        m.elements.push_back({0, ElemKind::Q4, {0, 1, 2, 3}});
        if (m.element_area(m.elements[0]) < 0.2) continue;

        // random cut line through the element interior
        const double th = M_PI * u01(rng);
        const Vec2 n(std::cos(th), std::sin(th));
        const Vec2 p0(0.2 + 0.6 * u01(rng), 0.2 + 0.6 * u01(rng));
        const double c = n.dot(p0);
        // discard half-plane n.X < c as a big rectangle loop
        const Vec2 t(-n.y(), n.x());
        IndicatorFn ind;
        ind.discard_loops = {{p0 - 20.0 * t, p0 + 20.0 * t,
                              p0 + 20.0 * t - 40.0 * n, p0 - 20.0 * t - 40.0 * n}};
        (void)c;
        IndicatorFn flip;  // complementary side
        flip.discard_loops = {{p0 + 20.0 * t, p0 - 20.0 * t,
                               p0 - 20.0 * t + 40.0 * n, p0 + 20.0 * t + 40.0 * n}};

        const Element& e = m.elements[0];
        const double area = m.element_area(e);
        const double kept = total_polygon_area(clip_element(e, m, ind));
        const double cut = total_polygon_area(clip_element(e, m, flip));
        CHECK(kept + cut == doctest::Approx(area).epsilon(1e-12));
        ++checked;
    }
    CHECK(checked > 300);
}

TEST_CASE("ear_clip: n-2 triangles, area sum, containment") {
    // triangle maps to itself
    {
        const std::vector<Vec2> tri = {Vec2(0, 0), Vec2(2, 0), Vec2(0.5, 1.5)};
        const auto out = ear_clip(tri);
        REQUIRE(out.size() == 1);
        double a = 0.0;
        for (const auto& t : out)
            a += polygon_area({t[0], t[1], t[2]});
        CHECK(a == doctest::Approx(polygon_area(tri)).epsilon(1e-12));
    }
    // convex quad: 2 triangles
    {
        const std::vector<Vec2> q = {Vec2(0, 0), Vec2(1.4, 0.1), Vec2(1.2, 1.1),
                                     Vec2(-0.1, 0.9)};
        const auto out = ear_clip(q);
        REQUIRE(out.size() == 2);
        double a = 0.0;
        for (const auto& t : out) {
            const double ta = polygon_area({t[0], t[1], t[2]});
            CHECK(ta > 0.0);  // CCW
            a += ta;
        }
        CHECK(a == doctest::Approx(polygon_area(q)).epsilon(1e-12));
    }
    // non-convex L-shape: 4 triangles tiling the L; every sample point inside
    // the L is covered by exactly one triangle
    {
        const std::vector<Vec2> L = {Vec2(0, 0), Vec2(2, 0), Vec2(2, 1),
                                     Vec2(1, 1), Vec2(1, 2), Vec2(0, 2)};
        const auto out = ear_clip(L);
        REQUIRE(out.size() == 4);
        double a = 0.0;
        for (const auto& t : out) {
            const double ta = polygon_area({t[0], t[1], t[2]});
            CHECK(ta > 0.0);
            a += ta;
        }
        CHECK(a == doctest::Approx(3.0).epsilon(1e-12));

        std::mt19937 rng(5);
        std::uniform_real_distribution<double> u(0.02, 1.98);
        int tested = 0;
        for (int k = 0; k < 10000; ++k) {
            const Vec2 p(u(rng), u(rng));
            // skip points near any triangulation edge to avoid boundary ties
            bool near_edge = false;
            for (const auto& t : out)
                for (int i = 0; i < 3; ++i) {
                    const Vec2 a0 = t[i], a1 = t[(i + 1) % 3];
                    const Vec2 d = a1 - a0;
                    const double len = d.norm();
                    const double s =
                        std::clamp(d.dot(p - a0) / (len * len), 0.0, 1.0);
                    if ((p - (a0 + s * d)).norm() < 1e-3) near_edge = true;
                }
            if (near_edge) continue;
            int cover = 0;
            for (const auto& t : out)
                cover += point_in_polygon(p, {t[0], t[1], t[2]});
            const bool in_L = point_in_polygon(p, L);
            CHECK(cover == (in_L ? 1 : 0));
            ++tested;
        }
        CHECK(tested > 8000);
    }
    // non-simple polygon rejected
    {
        const std::vector<Vec2> bowtie = {Vec2(0, 0), Vec2(1, 1), Vec2(1, 0),
                                          Vec2(0, 1)};
        CHECK_THROWS_AS(ear_clip(bowtie), GeometryError);
    }
}

TEST_CASE("integration cells: weight sums and affine moments") {
    const Mesh one = unit_square_q4();
    const Element& e = one.elements[0];

    // whole element (no real cut, clip far away): cells integrate 1 to area
    {
        const auto polys = clip_element(e, one, discard_below(-3.0));
        const auto cells = build_integration_cells(e, one, polys);
        CHECK(cell_weight_sum(cells) == doctest::Approx(1.0).epsilon(1e-12));
    }
    // retained area 0.75
    {
        const auto polys = clip_element(e, one, discard_below(0.25));
        const auto cells = build_integration_cells(e, one, polys);
        CHECK(cell_weight_sum(cells) == doctest::Approx(0.75).epsilon(1e-12));
    }
    // affine function over a distorted quad: cell quadrature matches the exact
    // polygon moment computed from the clip polygon by shoelace moments
    {
        Mesh m;
        m.nodes = {{0, Vec2(0.0, -0.1)}, {1, Vec2(1.2, 0.1)},
                   {2, Vec2(1.1, 1.3)}, {3, Vec2(-0.2, 0.9)}};
        m.elements.push_back({0, ElemKind::Q4, {0, 1, 2, 3}});
        const Element& q = m.elements[0];
        const auto polys = clip_element(q, m, discard_below(0.37));
        REQUIRE(!polys.empty());

        // analytic integrals of 1, x, y over the retained polygon
        double A = 0, Ix = 0, Iy = 0;
        for (const auto& p : polys) {
            const auto& v = p.vertices;
            for (std::size_t i = 0; i < v.size(); ++i) {
                const Vec2 a = v[i], b = v[(i + 1) % v.size()];
                const double cr = a.x() * b.y() - b.x() * a.y();
                A += 0.5 * cr;
                Ix += cr * (a.x() + b.x()) / 6.0;
                Iy += cr * (a.y() + b.y()) / 6.0;
            }
        }
        const auto cells = build_integration_cells(q, m, polys);
        double qA = 0, qIx = 0, qIy = 0;
        for (const auto& c : cells)
            for (std::size_t g = 0; g < c.gauss_weight.size(); ++g) {
                const Vec2 X = forward_map(q, m, c.gauss_parent[g]);
                qA += c.gauss_weight[g];
                qIx += c.gauss_weight[g] * X.x();
                qIy += c.gauss_weight[g] * X.y();
            }
        CHECK(qA == doctest::Approx(A).epsilon(1e-11));
        CHECK(qIx == doctest::Approx(Ix).epsilon(1e-10));
        CHECK(qIy == doctest::Approx(Iy).epsilon(1e-10));
    }
}

TEST_CASE("triangulate_blending_elements: overlay rules") {
    RectSpec spec;
    spec.nx = 4;
    spec.ny = 4;
    const Mesh grid = generate_structured_mesh(spec);

    // no blending elements: overlay identical
    {
        std::vector<ElementClass> cls(grid.elements.size(), ElementClass::Standard);
        const Mesh over = triangulate_blending_elements(grid, cls);
        CHECK(over.elements.size() == grid.elements.size());
        for (std::size_t i = 0; i < over.elements.size(); ++i)
            CHECK(over.elements[i].kind == grid.elements[i].kind);
    }
    // a cut grid: blending Q4s become 2 T3 on the 0-2 diagonal; node set
    // unchanged; non-blending untouched
    {
        const IndicatorFn ind = discard_below(0.37);
        const auto cls = classify_elements(grid, ind);
        const Mesh over = triangulate_blending_elements(grid, cls);
        CHECK(over.nodes.size() == grid.nodes.size());
        int n_blend = 0;
        for (auto c : cls) n_blend += (c == ElementClass::Blending);
        CHECK(n_blend == 4);
        CHECK(over.elements.size() == grid.elements.size() + n_blend);

        std::multiset<std::set<int>> tri_sets;
        for (const auto& e : over.elements)
            if (e.kind == ElemKind::T3)
                tri_sets.insert({e.nodes[0], e.nodes[1], e.nodes[2]});
        for (const auto& e : grid.elements) {
            if (cls[e.id] != ElementClass::Blending) continue;
            // the two halves across the 0-2 diagonal
            const std::set<int> t1{e.nodes[0], e.nodes[1], e.nodes[2]};
            const std::set<int> t2{e.nodes[0], e.nodes[2], e.nodes[3]};
            CHECK(tri_sets.count(t1) == 1);
            CHECK(tri_sets.count(t2) == 1);
        }
    }
}

TEST_CASE("orphan_dofs matches a brute-force incidence scan") {
    RectSpec spec;
    spec.nx = 12;
    spec.ny = 12;
    const Mesh grid = generate_structured_mesh(spec);

    // nothing discarded: no orphans
    {
        std::vector<ElementClass> cls(grid.elements.size(), ElementClass::Standard);
        CHECK(orphan_dofs(grid, cls).empty());
    }
    // circle cut: compare against the brute-force definition
    {
        const IndicatorFn ind = discard_circle(Vec2(0.5, 0.5), 0.3);
        const auto cls = classify_elements(grid, ind);
        const auto orphans = orphan_dofs(grid, cls);
        CHECK(!orphans.empty());

        std::set<int> expected;
        for (const auto& n : grid.nodes) {
            bool any = false, all_disc = true;
            for (const auto& e : grid.elements)
                for (int a = 0; a < e.nnodes(); ++a)
                    if (e.nodes[a] == n.id) {
                        any = true;
                        if (cls[e.id] != ElementClass::Discarded) all_disc = false;
                    }
            if (any && all_disc) expected.insert(n.id);
        }
        CHECK(std::set<int>(orphans.begin(), orphans.end()) == expected);
    }
}

TEST_CASE("build_cut_state ties the pieces together consistently") {
    RectSpec spec;
    spec.nx = 8;
    spec.ny = 8;
    const Mesh grid = generate_structured_mesh(spec);
    IndicatorFn ind = discard_circle(Vec2(0.5, 0.5), 0.27);
    nudge_indicator(ind, grid);
    const CutState cut = build_cut_state(grid, ind);

    double active_area = 0.0;
    for (const auto& e : grid.elements) {
        switch (cut.classes[e.id]) {
            case ElementClass::Standard:
                active_area += grid.element_area(e);
                CHECK(cut.polygons[e.id].empty());
                break;
            case ElementClass::Blending: {
                const double kept = total_polygon_area(cut.polygons[e.id]);
                CHECK(kept > 0.0);
                CHECK(kept < grid.element_area(e));
                CHECK(cell_weight_sum(cut.cells[e.id]) ==
                      doctest::Approx(kept).epsilon(1e-11));
                active_area += kept;
                break;
            }
            case ElementClass::Discarded:
                CHECK(cut.polygons[e.id].empty());
                break;
        }
    }
    // retained area = mesh area - polygonal circle area
    const double circle_area = polygon_area(ind.discard_loops[0]);
    CHECK(active_area == doctest::Approx(1.0 - circle_area).epsilon(1e-10));
}
