// Acceptance gate for the tying toolkit: each numbered criterion prints one
// [PASS]/[FAIL] line with the measured values and its pinned thresholds.
// The process exit code is the number of failed criteria.

#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "mortex/assembly.hpp"
#include "mortex/bench.hpp"
#include "mortex/cgi.hpp"
#include "mortex/cut.hpp"
#include "mortex/meshgen.hpp"
#include "mortex/mortar.hpp"
#include "mortex/shape.hpp"

using namespace mortex;

namespace {

int n_failed = 0;

void report(int id, const char* name, bool ok, const std::string& detail) {
    std::printf("[%s] %d. %s: %s\n", ok ? "PASS" : "FAIL", id, name,
                detail.c_str());
    std::fflush(stdout);
    if (!ok) ++n_failed;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

// --- 1. uniform-compression tying demo -----------------------------------

void criterion_1() {
    const UniformTyingResult tri = run_uniform_tying(true);
    const UniformTyingResult quad = run_uniform_tying(false);
    const bool ok = tri.max_rel_dev < 1e-9 && quad.max_rel_dev > 1e-3;
    report(1, "uniform tying", ok,
           "triangulated max dev " + fmt(tri.max_rel_dev) +
               " (need <1e-9), bilinear-quad max dev " + fmt(quad.max_rel_dev) +
               " (need >1e-3)");
}

// --- 2. compression patch test, Case 1 -----------------------------------

void criterion_2() {
    PatchTestConfig cfg;  // Case 1 compression, distorted quads, contrast 1000
    const BenchReport sli = run_patch_test(cfg);
    const double sli_max = sli.metrics.at("max_rel_dev");

    std::vector<double> er;
    bool monotone = true;
    for (int k : {1, 6, 12, 24, 48, 96, 192}) {
        PatchTestConfig c = cfg;
        c.scheme = DualScheme::Cgi;
        c.kappa = k;  // clamped to the 191-edge interface where needed
        er.push_back(run_patch_test(c).metrics.at("Er"));
        if (er.size() > 1 && er.back() > 1.1 * er[er.size() - 2])
            monotone = false;
    }
    const bool saturated = er.back() <= 5e-3 && er.back() < er.front();

    PatchTestConfig ct = cfg;
    ct.triangulate = true;
    const double er_tri = run_patch_test(ct).metrics.at("Er");

    const bool ok = sli_max >= 1.0 && monotone && saturated && er_tri <= 1e-4;
    std::string sweep;
    for (double e : er) sweep += (sweep.empty() ? "" : ",") + fmt(e);
    report(2, "compression patch test Case 1", ok,
           "standard-dual max dev " + fmt(sli_max) +
               " (need >=1), coarse sweep Er {" + sweep + "} " +
               (monotone ? "monotone" : "NOT monotone") + " (tail need <=5e-3), " +
               "triangulated Er " + fmt(er_tri) + " (need <=1e-4)");
}

// --- 3. bending patch test, Case 1 ---------------------------------------

void criterion_3() {
    PatchTestConfig cfg;
    cfg.load = LoadCase::Bending;
    cfg.scheme = DualScheme::Cgi;

    PatchTestConfig c12 = cfg;
    c12.kappa = 12;
    const double er12 = run_patch_test(c12).metrics.at("Er");
    PatchTestConfig c6 = cfg;
    c6.kappa = 6;
    const double er6 = run_patch_test(c6).metrics.at("Er");

    PatchTestConfig ca = cfg;
    ca.host_type = HostMeshType::AlignedQuads;
    ca.kappa = 191;
    const double er_full = run_patch_test(ca).metrics.at("Er");

    const bool ok = er12 <= 1e-2 && er6 >= 10.0 * er12 && er_full <= 1e-3;
    report(3, "bending patch test Case 1", ok,
           "kappa=12 Er " + fmt(er12) + " (need <=1e-2), kappa=6/kappa=12 " +
               fmt(er6 / er12) + " (need >=10), aligned full-width Er " +
               fmt(er_full) + " (need <=1e-3)");
}

// --- 4. scheme-comparison matrix ------------------------------------------

void criterion_4() {
    struct HostVariant {
        HostMeshType type;
        bool triangulate;
    };
    const std::vector<HostVariant> hosts = {
        {HostMeshType::Triangles, false},
        {HostMeshType::AlignedQuads, false},
        {HostMeshType::DistortedQuads, false},
        {HostMeshType::DistortedQuads, true},
    };
    int rows = 0, cgi_wins = 0;
    std::string worst;
    double worst_margin = -1.0;
    for (PatchCase pc : {PatchCase::FinerPatch, PatchCase::CoarserPatch})
        for (double contrast : {1000.0, 1e-3})
            for (LoadCase load : {LoadCase::Compression, LoadCase::Bending})
                for (const auto& hv : hosts) {
                    PatchTestConfig cfg;
                    cfg.pcase = pc;
                    cfg.load = load;
                    cfg.contrast = contrast;
                    cfg.host_type = hv.type;
                    cfg.triangulate = hv.triangulate;
                    double sli = 1e300;
                    for (DualScheme s : {DualScheme::SliP0, DualScheme::SliP1}) {
                        cfg.scheme = s;
                        sli = std::min(sli, run_patch_test(cfg).metrics.at("Er"));
                    }
                    cfg.scheme = DualScheme::Cgi;
                    cfg.kappa = 1 << 20;  // clamped to the full interface
                    const double cgi = run_patch_test(cfg).metrics.at("Er");
                    ++rows;
                    // compression rows with exact transfer tie at roundoff
                    const bool win =
                        cgi < sli || (load == LoadCase::Compression &&
                                      cgi <= 1e-6 && sli <= 1e-6);
                    if (win) ++cgi_wins;
                    const double margin = cgi / sli;
                    if (margin > worst_margin) {
                        worst_margin = margin;
                        worst = "cgi " + fmt(cgi) + " vs sli " + fmt(sli);
                    }
                }
    const bool ok = cgi_wins == rows;
    report(4, "scheme matrix", ok,
           std::to_string(cgi_wins) + "/" + std::to_string(rows) +
               " rows with coarse-grained Er below standard Er (worst row: " +
               worst + ")");
}

// --- 5. circular-inclusion convergence ------------------------------------

void criterion_5() {
    const double mc = 6.0;
    const double er128 =
        run_eshelby(128, mc, DualScheme::Cgi, 16, false).metrics.at("Er");

    std::vector<int> ks = {2, 4, 8, 16, 32, 64, 128};
    std::vector<double> ker;
    for (int k : ks)
        ker.push_back(run_eshelby(1024, mc, DualScheme::Cgi, k, false)
                          .metrics.at("Er"));
    int imin = 0;
    for (std::size_t i = 1; i < ker.size(); ++i)
        if (ker[i] < ker[imin]) imin = static_cast<int>(i);
    const bool min_ok =
        (ks[imin] == 16 || ks[imin] == 32) && ker.back() > ker[imin];

    std::vector<double> lx, ly;
    for (int n : {128, 256, 512, 1024}) {
        const double e =
            run_eshelby(n, mc, DualScheme::SliP1, 1, false).metrics.at("Er");
        lx.push_back(std::log(1.0 / n));
        ly.push_back(std::log(e));
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(lx.size());
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const bool slope_ok = slope >= 0.75 && slope <= 1.25;

    const bool ok = er128 < 1e-3 && min_ok && slope_ok;
    std::string sweep;
    for (double e : ker) sweep += (sweep.empty() ? "" : ",") + fmt(e);
    report(5, "inclusion benchmark", ok,
           "kappa=16 Er(128) " + fmt(er128) +
               " (need <1e-3), kappa sweep at 1024 {" + sweep + "} min at " +
               std::to_string(ks[imin]) + " (need 16 or 32, rising tail), " +
               "standard-dual slope " + fmt(slope) + " (need 1.0 +/- 0.25)");
}

// --- 6. analytic oracle ----------------------------------------------------

void criterion_6() {
    std::mt19937 rng(29);
    std::uniform_real_distribution<double> uE(0.05, 20.0);
    std::uniform_real_distribution<double> unu(0.0, 0.45);
    std::uniform_real_distribution<double> uth(-M_PI, M_PI);
    double max_jump = 0.0;
    for (int k = 0; k < 1000; ++k) {
        EshelbyParams p;
        p.a = 0.6;
        p.incl = {uE(rng), unu(rng)};
        p.matrix = {uE(rng), unu(rng)};
        const double th = uth(rng);
        const PolarStress in = eshelby_stress(p, p.a, th);
        const PolarStress out = eshelby_stress(p, p.a * (1.0 + 1e-14), th);
        max_jump = std::max({max_jump, std::abs(in.srr - out.srr),
                             std::abs(in.srt - out.srt)});
    }

    EshelbyParams hom;
    hom.a = 0.3;
    hom.sigma0 = 1.7;
    hom.incl = hom.matrix = {4.0, 0.31};
    double max_dev = 0.0;
    std::uniform_real_distribution<double> ur(0.0, 4.0);
    for (int k = 0; k < 1000; ++k) {
        const double th = uth(rng), r = ur(rng);
        const PolarStress s = eshelby_stress(hom, r, th);
        max_dev = std::max(
            {max_dev,
             std::abs(s.srr - 0.5 * hom.sigma0 * (1 + std::cos(2 * th))),
             std::abs(s.stt - 0.5 * hom.sigma0 * (1 - std::cos(2 * th))),
             std::abs(s.srt + 0.5 * hom.sigma0 * std::sin(2 * th))});
    }

    const bool ok = max_jump < 1e-12 && max_dev < 1e-12;
    report(6, "analytic inclusion oracle", ok,
           "interface traction jump " + fmt(max_jump) +
               " (need <1e-12), homogeneous-limit deviation " + fmt(max_dev) +
               " (need <1e-12)");
}

// --- 7. property suite -----------------------------------------------------

Problem build_embedded(DualScheme scheme, int kappa) {
    Problem pb;
    RectSpec ps;
    ps.nx = 10;
    ps.ny = 5;
    ps.x1 = 2.0;
    ps.y0 = 0.6;
    ps.y1 = 1.6;
    Domain patch{generate_structured_mesh(ps), Material{1000.0, 0.3},
                 std::nullopt};
    RectSpec hs;
    hs.nx = 6;
    hs.ny = 3;
    hs.x1 = 2.0;
    hs.distortion_amplitude = 0.03;
    hs.distortion_seed = 3;
    Domain host{generate_structured_mesh(hs), Material{1000.0, 0.3},
                std::nullopt};
    const std::vector<int> chain = patch.mesh.polylines.at("bottom");
    std::vector<Vec2> pts;
    for (int nd : chain) pts.push_back(patch.mesh.coord(nd));
    const IndicatorFn ind = make_indicator_open_chain(
        pts, Vec2(0, 0), Vec2(2.0, 1.0), Vec2(1.0, 0.95));
    host.cut = build_cut_state(host.mesh, ind);
    InterfaceSpec spec;
    spec.patch_domain = 0;
    spec.host_domain = 1;
    spec.itf = build_interface(patch.mesh, chain, false, scheme, host.mesh,
                               host.cut->classes);
    spec.kappa = kappa;
    if (scheme == DualScheme::Cgi)
        spec.cgi = partition_supersegments(patch.mesh, chain, false, kappa);
    pb.dirichlet.push_back({1, host.mesh.node_sets.at("bottom"), 0, 0.0});
    pb.dirichlet.push_back({1, host.mesh.node_sets.at("bottom"), 1, 0.0});
    pb.tractions.push_back({0, patch.mesh.polylines.at("top"),
                            [](const Vec2&) -> Vec2 { return {0.0, -1.0}; }});
    pb.domains.push_back(std::move(patch));
    pb.domains.push_back(std::move(host));
    pb.interfaces.push_back(std::move(spec));
    return pb;
}

void criterion_7() {
    std::vector<std::string> bad;
    std::mt19937 rng(41);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::uniform_real_distribution<double> u11(-1.0, 1.0);

    // partition of unity and Kronecker property of the shape functions
    double pou = 0.0, kron = 0.0;
    for (int k = 0; k < 200; ++k)
        for (ElemKind kind : {ElemKind::T3, ElemKind::Q4}) {
            Vec2 xi(u11(rng), u11(rng));
            if (kind == ElemKind::T3) {
                xi = Vec2(u01(rng), u01(rng));
                if (xi.x() + xi.y() > 1.0) xi = Vec2(1 - xi.x(), 1 - xi.y());
            }
            pou = std::max(pou, std::abs(shape_values(kind, xi).sum() - 1.0));
            const int nn = kind == ElemKind::T3 ? 3 : 4;
            for (int a = 0; a < nn; ++a) {
                const VecX N = shape_values(kind, parent_node(kind, a));
                for (int b = 0; b < nn; ++b)
                    kron = std::max(kron,
                                    std::abs(N(b) - (a == b ? 1.0 : 0.0)));
            }
        }
    if (pou > 1e-14 || kron > 1e-14)
        bad.push_back("shape functions (" + fmt(std::max(pou, kron)) + ")");

    // randomized clip: retained + discarded sides conserve the element area
    double area_err = 0.0;
    int checked = 0;
    for (int trial = 0; trial < 1200 && checked < 1000; ++trial) {
        Mesh m;
        m.nodes = {{0, Vec2(0.2 * u11(rng), 0.2 * u11(rng))},
                   {1, Vec2(1 + 0.2 * u11(rng), 0.2 * u11(rng))},
                   {2, Vec2(1 + 0.2 * u11(rng), 1 + 0.2 * u11(rng))},
                   {3, Vec2(0.2 * u11(rng), 1 + 0.2 * u11(rng))}};
        m.elements.push_back({0, ElemKind::Q4, {0, 1, 2, 3}});
        if (m.element_area(m.elements[0]) < 0.2) continue;
        const double th = M_PI * u01(rng);
        const Vec2 nrm(std::cos(th), std::sin(th));
        const Vec2 t(-nrm.y(), nrm.x());
        const Vec2 p0(0.2 + 0.6 * u01(rng), 0.2 + 0.6 * u01(rng));
        IndicatorFn ind, flip;
        ind.discard_loops = {{p0 - 20.0 * t, p0 + 20.0 * t,
                              p0 + 20.0 * t - 40.0 * nrm,
                              p0 - 20.0 * t - 40.0 * nrm}};
        flip.discard_loops = {{p0 + 20.0 * t, p0 - 20.0 * t,
                               p0 - 20.0 * t + 40.0 * nrm,
                               p0 + 20.0 * t + 40.0 * nrm}};
        const Element& e = m.elements[0];
        double kept = 0.0, cut = 0.0;
        for (const auto& p : clip_element(e, m, ind)) kept += p.area();
        for (const auto& p : clip_element(e, m, flip)) cut += p.area();
        area_err = std::max(area_err, std::abs(kept + cut - m.element_area(e)) /
                                          m.element_area(e));
        ++checked;
    }
    if (checked < 1000 || area_err > 1e-12)
        bad.push_back("clip area conservation (" + fmt(area_err) + ")");

    // mortar blocks: matching row sums, symmetric tangent with zero
    // primal-primal and dual-dual blocks
    {
        Problem pb = build_embedded(DualScheme::SliP1, 1);
        double row_err = 0.0, sym_err = 0.0, blk_err = 0.0;
        for (const auto& el : pb.interfaces[0].itf.elements) {
            for (int l = 0; l < el.D.rows(); ++l)
                row_err = std::max(row_err, std::abs(el.D.row(l).sum() -
                                                     el.M.row(l).sum()));
            const MatX K = mortar_tangent(el);
            sym_err = std::max(sym_err,
                               (K - K.transpose()).cwiseAbs().maxCoeff());
            const int np = 2 * (2 + static_cast<int>(el.host_nodes.size()));
            blk_err = std::max(
                {blk_err, K.topLeftCorner(np, np).cwiseAbs().maxCoeff(),
                 K.bottomRightCorner(K.rows() - np, K.cols() - np)
                     .cwiseAbs()
                     .maxCoeff()});
        }
        if (row_err > 1e-12) bad.push_back("row sums (" + fmt(row_err) + ")");
        if (sym_err != 0.0 || blk_err != 0.0)
            bad.push_back("tangent structure");
    }

    // kappa = 1 coarse graining is bitwise the plain nodal dual scheme
    {
        Problem a = build_embedded(DualScheme::SliP1, 1);
        Problem b = build_embedded(DualScheme::Cgi, 1);
        const Solution ua = solve(a);
        const Solution ub = solve(b);
        double d = (ua.lambda[0] - ub.lambda[0]).cwiseAbs().maxCoeff();
        for (int dom = 0; dom < 2; ++dom)
            d = std::max(d, (ua.u[dom] - ub.u[dom]).cwiseAbs().maxCoeff());
        if (d != 0.0) bad.push_back("kappa=1 not bitwise equal");
    }

    // conforming tie reproduces the monolithic solve
    {
        RectSpec lower;
        lower.nx = 4;
        lower.ny = 4;
        RectSpec upper = lower;
        upper.y0 = 1.0;
        upper.y1 = 2.0;
        Problem pb;
        Domain host{generate_structured_mesh(lower), Material{1000.0, 0.3},
                    std::nullopt};
        Domain patch{generate_structured_mesh(upper), Material{1000.0, 0.3},
                     std::nullopt};
        const std::vector<int> chain = patch.mesh.polylines.at("bottom");
        const std::vector<ElementClass> classes(host.mesh.elements.size(),
                                                ElementClass::Standard);
        InterfaceSpec spec;
        spec.patch_domain = 0;
        spec.host_domain = 1;
        spec.itf = build_interface(patch.mesh, chain, false, DualScheme::SliP1,
                                   host.mesh, classes);
        pb.dirichlet.push_back({1, host.mesh.node_sets.at("bottom"), 0, 0.0});
        pb.dirichlet.push_back({1, host.mesh.node_sets.at("bottom"), 1, 0.0});
        pb.tractions.push_back(
            {0, patch.mesh.polylines.at("top"),
             [](const Vec2&) -> Vec2 { return {0.0, -1.0}; }});
        pb.domains.push_back(patch);
        pb.domains.push_back(host);
        pb.interfaces.push_back(std::move(spec));
        const Solution tied = solve(pb);

        RectSpec mono = lower;
        mono.ny = 8;
        mono.y1 = 2.0;
        Problem ref;
        ref.domains.push_back({generate_structured_mesh(mono),
                               Material{1000.0, 0.3}, std::nullopt});
        const Mesh& mm = ref.domains[0].mesh;
        ref.dirichlet.push_back({0, mm.node_sets.at("bottom"), 0, 0.0});
        ref.dirichlet.push_back({0, mm.node_sets.at("bottom"), 1, 0.0});
        ref.tractions.push_back(
            {0, mm.polylines.at("top"),
             [](const Vec2&) -> Vec2 { return {0.0, -1.0}; }});
        const Solution rsol = solve(ref);

        double umax = 0.0, derr = 0.0;
        for (const auto& nd : mm.nodes)
            umax = std::max(umax, std::abs(rsol.u[0](2 * nd.id + 1)));
        for (std::size_t d = 0; d < 2; ++d)
            for (const auto& nd : pb.domains[d].mesh.nodes) {
                int match = -1;
                for (const auto& mn : mm.nodes)
                    if ((mn.X - nd.X).norm() < 1e-9) {
                        match = mn.id;
                        break;
                    }
                for (int c = 0; c < 2; ++c)
                    derr = std::max(derr,
                                    std::abs(tied.u[d](2 * nd.id + c) -
                                             rsol.u[0](2 * match + c)));
            }
        if (derr > 1e-10 * umax)
            bad.push_back("conforming vs monolithic (" + fmt(derr / umax) + ")");
    }

    // global equilibrium: support reactions balance the applied load
    {
        Problem pb = build_embedded(DualScheme::SliP1, 1);
        const AssembledSystem sys = assemble(pb);
        const Solution sol = solve(pb, sys);
        VecX U = VecX::Zero(sys.n_full);
        for (std::size_t d = 0; d < sol.u.size(); ++d)
            U.segment(sys.dom_off[d], sol.u[d].size()) = sol.u[d];
        for (std::size_t i = 0; i < sol.lambda.size(); ++i)
            U.segment(sys.lam_off[i], sol.lambda[i].size()) = sol.lambda[i];
        const VecX r = sys.K * U - sys.f;
        double Ry = 0.0;
        for (const auto& [dof, v] : sys.fixed)
            if (dof % 2 == 1) Ry += r(dof);
        if (std::abs(Ry - 2.0) > 1e-9 * 2.0)
            bad.push_back("global equilibrium (" + fmt(Ry) + ")");
    }

    std::string detail = "shape functions, clip areas, row sums, tangent "
                         "structure, kappa=1 equivalence, conforming limit, "
                         "equilibrium all verified";
    if (!bad.empty()) {
        detail = "failed:";
        for (const auto& b : bad) detail += " " + b + ";";
    }
    report(7, "property suite", bad.empty(), detail);
}

// --- 8. application examples ----------------------------------------------

void criterion_8() {
    const BenchReport ps = run_example_plate_with_hole(DualScheme::SliP1, 0);
    const BenchReport pc = run_example_plate_with_hole(DualScheme::Cgi, 3);
    const double sli_dev = ps.metrics.at("max_dev");
    const double cgi_dev = pc.metrics.at("max_dev");

    const BenchReport ms = run_example_multi_level(DualScheme::SliP1, 0);
    const BenchReport mc = run_example_multi_level(DualScheme::Cgi, 4);
    const double r3 = ms.metrics.at("jump3") / mc.metrics.at("jump3");
    const double r4 = ms.metrics.at("jump4") / mc.metrics.at("jump4");

    const bool ok = cgi_dev < sli_dev && r3 >= 5.0 && r4 >= 5.0;
    report(8, "application examples", ok,
           "plate profile max dev cgi " + fmt(cgi_dev) + " vs sli " +
               fmt(sli_dev) + " (need cgi < sli), nested-inclusion jump "
               "reduction " + fmt(r3) + "x and " + fmt(r4) +
               "x (need >=5x both)");
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    std::printf("%d of 8 criteria failed\n", n_failed);
    return n_failed;
}
