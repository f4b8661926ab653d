#include "mortex/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "mortex/meshgen.hpp"

namespace mortex {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

const std::vector<int>& polyline(const Mesh& m, const std::string& name) {
    auto it = m.polylines.find(name);
    if (it == m.polylines.end())
        throw ConfigError("mesh has no polyline '" + name + "'");
    return it->second;
}

const std::vector<int>& nodeset(const Mesh& m, const std::string& name) {
    auto it = m.node_sets.find(name);
    if (it == m.node_sets.end())
        throw ConfigError("mesh has no node set '" + name + "'");
    return it->second;
}

std::vector<Vec2> chain_coords(const Mesh& m, const std::vector<int>& chain) {
    std::vector<Vec2> out;
    out.reserve(chain.size());
    for (int n : chain) out.push_back(m.nodes[n].X);
    return out;
}

int nearest_node(const Mesh& m, const Vec2& X) {
    int best = 0;
    double d = (m.nodes[0].X - X).squaredNorm();
    for (std::size_t i = 1; i < m.nodes.size(); ++i) {
        const double di = (m.nodes[i].X - X).squaredNorm();
        if (di < d) {
            d = di;
            best = static_cast<int>(i);
        }
    }
    return best;
}

int clamp_kappa(int kappa, const MortarInterface& itf) {
    const int kmax = itf.closed ? itf.n_edges() - 1 : itf.n_edges();
    return std::clamp(kappa, 1, kmax);
}

/// Builds the interface spec (with CGI layout when requested) for a patch
/// chain embedded in a cut host.
InterfaceSpec make_tie(int patch_dom, int host_dom, const Mesh& patch,
                       const std::vector<int>& chain, bool closed,
                       DualScheme scheme, int kappa, const Mesh& host,
                       const CutState& cut) {
    InterfaceSpec spec;
    spec.patch_domain = patch_dom;
    spec.host_domain = host_dom;
    spec.itf = build_interface(patch, chain, closed, scheme, host, cut.classes);
    if (scheme == DualScheme::Cgi) {
        if (kappa <= 0) {
            const MeshContrast mc =
                compute_mesh_contrast(spec.itf.segments, cut.classes);
            kappa = resolve_kappa_auto(mc.global, spec.itf.n_edges(), closed);
        }
        spec.kappa = clamp_kappa(kappa, spec.itf);
        spec.cgi = partition_supersegments(patch, chain, closed, spec.kappa);
    }
    return spec;
}

std::string scheme_name(DualScheme s) {
    switch (s) {
        case DualScheme::SliP0: return "sli-p0";
        case DualScheme::SliP1: return "sli-p1";
        default: return "cgi";
    }
}

}  // namespace

double error_norm_interface(const std::vector<double>& field,
                            const std::vector<double>& reference) {
    if (field.empty() || field.size() != reference.size())
        throw std::invalid_argument("error norm needs matching nonempty fields");
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < field.size(); ++i) {
        num += (field[i] - reference[i]) * (field[i] - reference[i]);
        den += reference[i] * reference[i];
    }
    if (den <= 0.0) throw std::invalid_argument("zero reference norm");
    return std::sqrt(num) / std::sqrt(den);
}

UniformTyingResult run_uniform_tying(bool triangulate) {
    // three host columns over [0,1.5]x[0,~1.25]: two triangles, an aligned
    // quad, and a skewed quad whose cut makes both parent coordinates vary
    Mesh host;
    host.nodes = {{0, {0.0, 0.0}},  {1, {0.5, 0.0}},  {2, {1.0, 0.0}},
                  {3, {1.5, 0.0}},  {4, {0.0, 1.25}}, {5, {0.5, 1.25}},
                  {6, {1.0, 1.25}}, {7, {1.5, 1.05}}};
    host.elements = {{0, ElemKind::T3, {0, 1, 5, -1}},
                     {1, ElemKind::T3, {0, 5, 4, -1}},
                     {2, ElemKind::Q4, {1, 2, 6, 5}},
                     {3, ElemKind::Q4, {2, 3, 7, 6}}};
    host.node_sets["bottom"] = {0, 1, 2, 3};

    RectSpec ps;
    ps.x0 = 0.0;
    ps.y0 = 1.0;
    ps.x1 = 1.5;
    ps.y1 = 2.0;
    ps.nx = 6;
    ps.ny = 4;
    Mesh patch = generate_structured_mesh(ps);
    const std::vector<int> chain = polyline(patch, "bottom");

    IndicatorFn ind = make_indicator_open_chain(
        chain_coords(patch, chain), Vec2(0.0, 0.0), Vec2(1.5, 1.25),
        Vec2(0.75, 1.15));
    nudge_indicator(ind, host);
    CutState cut = build_cut_state(host, ind);
    Mesh host_eff = host;
    if (triangulate) {
        host_eff = triangulate_blending_elements(host, cut.classes);
        cut = build_cut_state(host_eff, ind);
    }

    Problem pb;
    const Material mat{1000.0, 0.0, Formulation::PlaneStrain};  // E = 1 GPa
    pb.domains.push_back({patch, mat, std::nullopt});
    pb.domains.push_back({host_eff, mat, cut});
    pb.interfaces.push_back(make_tie(0, 1, patch, chain, false,
                                     DualScheme::SliP1, 1, host_eff, cut));
    pb.dirichlet.push_back({1, nodeset(host_eff, "bottom"), 0, 0.0});
    pb.dirichlet.push_back({1, nodeset(host_eff, "bottom"), 1, 0.0});
    pb.tractions.push_back(
        {0, polyline(patch, "top"), [](const Vec2&) { return Vec2(0.0, -1.0); }});

    const Solution sol = solve(pb);
    UniformTyingResult res;
    for (int n : chain) {
        res.x.push_back(patch.nodes[n].X.x());
        res.uy.push_back(sol.u[0](2 * n + 1));
        res.max_rel_dev = std::max(
            res.max_rel_dev, std::abs(sol.u[0](2 * n + 1) + 1e-3) / 1e-3);
    }
    return res;
}

Problem build_patch_test(const PatchTestConfig& cfg) {
    const double y_itf = cfg.h2 - cfg.hstar;           // 1.0
    const double y_top = y_itf + cfg.h1;               // 2.0
    const bool finer = cfg.pcase == PatchCase::FinerPatch;

    RectSpec ps;
    ps.x0 = 0.0;
    ps.y0 = y_itf;
    ps.x1 = cfg.l;
    ps.y1 = y_top;
    ps.nx = finer ? 191 : 35;
    ps.ny = finer ? 38 : 7;
    Mesh patch = generate_structured_mesh(ps);

    RectSpec hs;
    hs.x0 = 0.0;
    hs.y0 = 0.0;
    hs.x1 = cfg.l;
    hs.y1 = cfg.h2;
    hs.nx = finer ? 17 : 350;
    hs.ny = finer ? 4 : 44;
    hs.kind = cfg.host_type == HostMeshType::Triangles ? ElemKind::T3
                                                       : ElemKind::Q4;
    if (cfg.host_type == HostMeshType::DistortedQuads) {
        hs.distortion_amplitude = finer ? 0.09 : 0.003;
        hs.distortion_seed = 3;
    }
    Mesh host = generate_structured_mesh(hs);

    const std::vector<int> chain = polyline(patch, "bottom");
    IndicatorFn ind = make_indicator_open_chain(
        chain_coords(patch, chain), Vec2(0.0, 0.0), Vec2(cfg.l, cfg.h2),
        Vec2(cfg.l / 2.0, (y_itf + cfg.h2) / 2.0));
    nudge_indicator(ind, host);
    CutState cut = build_cut_state(host, ind);
    if (cfg.triangulate) {
        host = triangulate_blending_elements(host, cut.classes);
        cut = build_cut_state(host, ind);
    }

    Problem pb;
    const Material m1{cfg.E1, cfg.nu, Formulation::PlaneStrain};
    const Material m2{cfg.E1 / cfg.contrast, cfg.nu, Formulation::PlaneStrain};
    pb.domains.push_back({patch, m1, std::nullopt});
    pb.domains.push_back({host, m2, cut});
    pb.interfaces.push_back(
        make_tie(0, 1, patch, chain, false, cfg.scheme, cfg.kappa, host, cut));

    const double s0 = cfg.sigma0, l = cfg.l;
    if (cfg.load == LoadCase::Compression) {
        pb.dirichlet.push_back({1, nodeset(host, "bottom"), 0, 0.0});
        pb.dirichlet.push_back({1, nodeset(host, "bottom"), 1, 0.0});
        for (const auto* side : {"left", "right"}) {
            pb.dirichlet.push_back({1, nodeset(host, side), 0, 0.0});
            pb.dirichlet.push_back(
                {0, nodeset(pb.domains[0].mesh, side), 0, 0.0});
        }
        pb.tractions.push_back({0, polyline(pb.domains[0].mesh, "top"),
                                [s0](const Vec2&) { return Vec2(0.0, -s0); }});
    } else {
        pb.dirichlet.push_back({0, nodeset(pb.domains[0].mesh, "top"), 1, 0.0});
        pb.dirichlet.push_back(
            {0, {nearest_node(pb.domains[0].mesh, Vec2(0.0, y_top))}, 0, 0.0});
        pb.tractions.push_back(
            {1, polyline(host, "bottom"), [s0, l](const Vec2& X) {
                 return Vec2(0.0, -2.0 * s0 * (X.x() / l - 0.5));
             }});
    }
    return pb;
}

BenchReport run_patch_test(const PatchTestConfig& cfg) {
    const auto t0 = Clock::now();
    Problem pb = build_patch_test(cfg);
    const Solution sol = solve(pb);

    const Mesh& patch = pb.domains[0].mesh;
    const MortarInterface& itf = pb.interfaces[0].itf;
    const StressField stress =
        recover_nodal_stress(patch, sol.u[0], pb.domains[0].material);

    BenchReport rep;
    rep.profile = interface_traction_profile(pb, sol, 0);
    std::vector<double> field, ref;
    for (int n : itf.chain) {
        field.push_back(stress.nodal[n](1));
        ref.push_back(cfg.load == LoadCase::Compression
                          ? -cfg.sigma0
                          : 2.0 * cfg.sigma0 *
                                (patch.nodes[n].X.x() / cfg.l - 0.5));
    }
    rep.profile_field = field;
    rep.profile_ref = ref;

    const MeshContrast mc = compute_mesh_contrast(
        itf.segments, pb.domains[1].cut->classes);
    double max_dev = 0.0;
    for (std::size_t i = 0; i < field.size(); ++i)
        max_dev = std::max(max_dev, std::abs(field[i] - ref[i]) / cfg.sigma0);

    rep.metrics["Er"] = error_norm_interface(field, ref);
    rep.metrics["max_rel_dev"] = max_dev;
    rep.metrics["mc"] = mc.global;
    rep.metrics["n_m"] = itf.n_edges();
    rep.metrics["kappa"] = pb.interfaces[0].kappa;
    rep.config = {
        {"bench", "patch-test"},
        {"case", cfg.pcase == PatchCase::FinerPatch ? "1" : "2"},
        {"load",
         cfg.load == LoadCase::Compression ? "compression" : "bending"},
        {"scheme", scheme_name(cfg.scheme)},
        {"host",
         cfg.host_type == HostMeshType::Triangles
             ? "triangles"
             : (cfg.host_type == HostMeshType::AlignedQuads ? "aligned-quads"
                                                            : "distorted-quads")},
        {"triangulate", cfg.triangulate ? "yes" : "no"},
        {"contrast", std::to_string(cfg.contrast)},
    };
    rep.runtime_s = seconds_since(t0);
    return rep;
}

BenchReport run_eshelby(int n_m, double mc_target, DualScheme scheme, int kappa,
                        bool triangulate) {
    const auto t0 = Clock::now();
    const double R = 0.1, L = 10.0, sigma0 = 0.1;
    EshelbyParams ep;
    ep.a = R;
    ep.sigma0 = sigma0;
    ep.incl = {1000.0, 0.3, Formulation::PlaneStrain};
    ep.matrix = {1.0, 0.3, Formulation::PlaneStrain};

    Mesh patch = generate_disk_mesh(R, n_m);
    const std::vector<int> chain = polyline(patch, "boundary");
    IndicatorFn ind;
    ind.discard_loops = {chain_coords(patch, chain)};

    // size the host grid so the measured contrast (mortar edges per blending
    // element) lands on the target
    double h = 2.0 * M_PI * R * mc_target / n_m;
    Mesh host;
    double mc_measured = 0.0;
    for (int iter = 0; iter < 16; ++iter) {
        const double band = R + 0.03;
        const auto xs = graded_coords(-L / 2, L / 2, -band, band, h);
        host = generate_tensor_mesh(xs, xs, ElemKind::Q4);
        IndicatorFn trial = ind;
        nudge_indicator(trial, host);
        const auto classes = classify_elements(host, trial);
        int n_blend = 0;
        for (auto c : classes)
            if (c == ElementClass::Blending) ++n_blend;
        if (n_blend == 0) throw GeometryError("inclusion missed the host grid");
        mc_measured = static_cast<double>(n_m) / n_blend;
        if (std::abs(mc_measured - mc_target) <= 0.03 * mc_target) break;
        h *= mc_target / mc_measured;
    }
    nudge_indicator(ind, host);
    CutState cut = build_cut_state(host, ind);
    if (triangulate) {
        host = triangulate_blending_elements(host, cut.classes);
        cut = build_cut_state(host, ind);
    }

    Problem pb;
    pb.domains.push_back({patch, ep.incl, std::nullopt});
    pb.domains.push_back({host, ep.matrix, cut});
    pb.interfaces.push_back(
        make_tie(0, 1, patch, chain, true, scheme, kappa, host, cut));
    pb.dirichlet.push_back({1, nodeset(host, "left"), 0, 0.0});
    pb.dirichlet.push_back(
        {1, {nearest_node(host, Vec2(-L / 2, -L / 2))}, 1, 0.0});
    pb.tractions.push_back({1, polyline(host, "right"), [sigma0](const Vec2&) {
                                return Vec2(sigma0, 0.0);
                            }});

    const Solution sol = solve(pb);
    const auto profile = interface_traction_profile(pb, sol, 0);

    BenchReport rep;
    std::vector<double> field, ref;
    for (const auto& s : profile) {
        if (s.X.x() < -1e-12) continue;  // Gamma*: theta in [-pi/2, pi/2]
        const double theta = std::atan2(s.X.y(), s.X.x());
        const double r = s.X.norm();
        const Vec2 er = s.X / r;
        field.push_back(s.t.dot(er));
        ref.push_back(eshelby_stress(ep, 0.5 * R, theta).srr);
        rep.profile.push_back(s);
    }
    rep.profile_field = field;
    rep.profile_ref = ref;

    const MeshContrast mc = compute_mesh_contrast(
        pb.interfaces[0].itf.segments, pb.domains[1].cut->classes);
    rep.metrics["Er"] = error_norm_interface(field, ref);
    rep.metrics["mc"] = mc.global;
    rep.metrics["n_m"] = n_m;
    rep.metrics["kappa"] = pb.interfaces[0].kappa;
    rep.config = {{"bench", "eshelby"},
                  {"scheme", scheme_name(scheme)},
                  {"n_m", std::to_string(n_m)},
                  {"triangulate", triangulate ? "yes" : "no"}};
    rep.runtime_s = seconds_since(t0);
    return rep;
}

BenchReport run_example_plate_with_hole(DualScheme scheme, int kappa) {
    const auto t0 = Clock::now();
    const double R = 0.75, half_patch = 2.25, half_plate = 6.0, sigma0 = 1.0;
    const int n_theta = 56;
    const Material mat{1000.0, 0.3, Formulation::PlaneStrain};

    Mesh patch = generate_ring_mesh(circle_curve(R), square_curve(half_patch),
                                    n_theta, 10);
    const std::vector<int> chain = polyline(patch, "outer");

    RectSpec hs;
    hs.x0 = hs.y0 = -half_plate;
    hs.x1 = hs.y1 = half_plate;
    hs.nx = hs.ny = 12;
    Mesh host = generate_structured_mesh(hs);
    IndicatorFn ind;
    ind.discard_loops = {chain_coords(patch, chain)};
    nudge_indicator(ind, host);
    const CutState cut = build_cut_state(host, ind);

    Problem pb;
    pb.domains.push_back({patch, mat, std::nullopt});
    pb.domains.push_back({host, mat, cut});
    pb.interfaces.push_back(
        make_tie(0, 1, patch, chain, true, scheme, kappa, host, cut));
    pb.dirichlet.push_back({1, nodeset(host, "left"), 0, 0.0});
    pb.dirichlet.push_back(
        {1, {nearest_node(host, Vec2(-half_plate, -half_plate))}, 1, 0.0});
    pb.tractions.push_back({1, polyline(host, "right"), [sigma0](const Vec2&) {
                                return Vec2(sigma0, 0.0);
                            }});
    const Solution sol = solve(pb);
    const StressField stress = recover_nodal_stress(patch, sol.u[0], mat);

    // monolithic reference: same interface sampling, conforming mesh
    Mesh mono = merge_meshes(
        generate_ring_mesh(circle_curve(R), square_curve(half_patch), n_theta,
                           10),
        generate_ring_mesh(square_curve(half_patch), square_curve(half_plate),
                           n_theta, 6),
        1e-9);
    Problem mono_pb;
    mono_pb.domains.push_back({mono, mat, std::nullopt});
    std::vector<int> mono_left, mono_right;
    for (const auto& n : mono.nodes) {
        if (std::abs(n.X.x() + half_plate) < 1e-8) mono_left.push_back(n.id);
        if (std::abs(n.X.x() - half_plate) < 1e-8) mono_right.push_back(n.id);
    }
    std::sort(mono_right.begin(), mono_right.end(), [&](int a, int b) {
        return mono.nodes[a].X.y() < mono.nodes[b].X.y();
    });
    mono_pb.dirichlet.push_back({0, mono_left, 0, 0.0});
    mono_pb.dirichlet.push_back(
        {0, {nearest_node(mono, Vec2(-half_plate, -half_plate))}, 1, 0.0});
    mono_pb.tractions.push_back({0, mono_right, [sigma0](const Vec2&) {
                                     return Vec2(sigma0, 0.0);
                                 }});
    const Solution mono_sol = solve(mono_pb);
    const StressField mono_stress =
        recover_nodal_stress(mono, mono_sol.u[0], mat);

    BenchReport rep;
    rep.profile = interface_traction_profile(pb, sol, 0);
    // Gamma*: the x = +2.25 face of the square interface
    double max_dev = 0.0;
    for (int n : chain) {
        const Vec2 X = patch.nodes[n].X;
        if (std::abs(X.x() - half_patch) > 1e-9) continue;
        const int mn = nearest_node(mono, X);
        if ((mono.nodes[mn].X - X).norm() > 1e-8)
            throw GeometryError("monolithic mesh misses an interface node");
        rep.profile_field.push_back(stress.nodal[n](0));
        rep.profile_ref.push_back(mono_stress.nodal[mn](0));
        max_dev = std::max(max_dev, std::abs(rep.profile_field.back() -
                                             rep.profile_ref.back()));
    }
    rep.metrics["Er"] =
        error_norm_interface(rep.profile_field, rep.profile_ref);
    rep.metrics["max_dev"] = max_dev;
    rep.metrics["kappa"] = pb.interfaces[0].kappa;
    const MeshContrast mc = compute_mesh_contrast(
        pb.interfaces[0].itf.segments, pb.domains[1].cut->classes);
    rep.metrics["mc"] = mc.global;
    rep.config = {{"bench", "plate-with-hole"}, {"scheme", scheme_name(scheme)}};
    rep.runtime_s = seconds_since(t0);
    return rep;
}

BenchReport run_example_multi_level(DualScheme scheme, int kappa) {
    const auto t0 = Clock::now();
    const Material soft{1.0, 0.3, Formulation::PlaneStrain};
    const Material incl3{100.0, 0.3, Formulation::PlaneStrain};
    const Material incl4{1000.0, 0.3, Formulation::PlaneStrain};
    const Vec2 c3(2.03, 1.96), c4(3.04, 2.97);
    const double R3 = 0.2, R4 = 0.4;

    RectSpec s1;
    s1.x0 = s1.y0 = 0.0;
    s1.x1 = s1.y1 = 5.0;
    s1.nx = s1.ny = 9;
    Mesh om1 = generate_structured_mesh(s1);

    RectSpec s2;
    s2.x0 = s2.y0 = 1.0;
    s2.x1 = s2.y1 = 4.0;
    s2.nx = s2.ny = 30;
    Mesh om2 = generate_structured_mesh(s2);

    Mesh d3 = generate_disk_mesh(R3, 48, c3);
    Mesh d4 = generate_disk_mesh(R4, 96, c4);

    const std::vector<int> c2chain = closed_boundary_chain(om2);
    const std::vector<int> c3chain = polyline(d3, "boundary");
    const std::vector<int> c4chain = polyline(d4, "boundary");

    IndicatorFn ind1;
    ind1.discard_loops = {chain_coords(om2, c2chain)};
    nudge_indicator(ind1, om1);
    const CutState cut1 = build_cut_state(om1, ind1);

    IndicatorFn ind2;
    ind2.discard_loops = {chain_coords(d3, c3chain), chain_coords(d4, c4chain)};
    nudge_indicator(ind2, om2);
    const CutState cut2 = build_cut_state(om2, ind2);

    Problem pb;
    pb.domains.push_back({om1, soft, cut1});
    pb.domains.push_back({om2, soft, cut2});
    pb.domains.push_back({d3, incl3, std::nullopt});
    pb.domains.push_back({d4, incl4, std::nullopt});
    pb.interfaces.push_back(
        make_tie(1, 0, om2, c2chain, true, scheme, kappa, om1, cut1));
    pb.interfaces.push_back(
        make_tie(2, 1, d3, c3chain, true, scheme, kappa, om2, cut2));
    pb.interfaces.push_back(
        make_tie(3, 1, d4, c4chain, true, scheme, kappa, om2, cut2));
    pb.dirichlet.push_back({0, nodeset(om1, "top"), 1, 0.1});
    pb.dirichlet.push_back({0, nodeset(om1, "left"), 0, 0.0});
    pb.dirichlet.push_back({0, nodeset(om1, "bottom"), 0, 0.0});
    pb.dirichlet.push_back({0, nodeset(om1, "bottom"), 1, 0.0});
    const Solution sol = solve(pb);

    BenchReport rep;
    const std::array<const Mesh*, 2> disks{&d3, &d4};
    const std::array<const std::vector<int>*, 2> chains{&c3chain, &c4chain};
    const std::array<Vec2, 2> centers{c3, c4};
    const std::array<Material, 2> mats{incl3, incl4};
    for (int k = 0; k < 2; ++k) {
        const StressField st =
            recover_nodal_stress(*disks[k], sol.u[2 + k], mats[k]);
        double jump = 0.0;
        std::vector<double> prof;
        for (int n : *chains[k]) {
            const Vec2 d = disks[k]->nodes[n].X - centers[k];
            const double theta = std::atan2(d.y(), d.x());
            if (theta < 0.0 || theta > M_PI / 2.0) {
                if (!prof.empty()) break;  // quarter arc collected
                continue;
            }
            prof.push_back(st.nodal[n](1));
            if (prof.size() > 1)
                jump = std::max(jump,
                                std::abs(prof.back() - prof[prof.size() - 2]));
        }
        rep.metrics[k == 0 ? "jump3" : "jump4"] = jump;
        if (k == 0) rep.profile_field = prof;
        else rep.profile_ref = prof;
    }
    rep.profile = interface_traction_profile(pb, sol, 1);
    rep.metrics["kappa"] = pb.interfaces[1].kappa;
    rep.config = {{"bench", "multi-level"}, {"scheme", scheme_name(scheme)}};
    rep.runtime_s = seconds_since(t0);
    return rep;
}

std::vector<int> closed_boundary_chain(const Mesh& mesh) {
    std::vector<int> chain;
    for (const auto* name : {"bottom", "right", "top", "left"}) {
        const auto& pl = polyline(mesh, name);
        for (std::size_t i = 0; i + 1 < pl.size(); ++i) chain.push_back(pl[i]);
    }
    return chain;
}

}  // namespace mortex
