#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "mortex/bench.hpp"
#include "mortex/config.hpp"
#include "mortex/mesh_io.hpp"
#include "mortex/meshgen.hpp"
#include "mortex/output.hpp"

namespace fs = std::filesystem;
using namespace mortex;

namespace {

DualScheme parse_scheme(const std::string& s) {
    if (s == "sli-p0") return DualScheme::SliP0;
    if (s == "sli-p1") return DualScheme::SliP1;
    if (s == "cgi") return DualScheme::Cgi;
    throw ConfigError("unknown dual scheme '" + s + "'");
}

int parse_kappa(const std::string& s) {
    if (s == "auto") return 0;  // resolved from the mesh contrast later
    try {
        std::size_t pos = 0;
        const int k = std::stoi(s, &pos);
        if (pos != s.size() || k < 1) throw std::invalid_argument(s);
        return k;
    } catch (const std::exception&) {
        throw ConfigError("kappa must be a positive integer or 'auto'");
    }
}

fs::path output_dir(const std::string& flag_value) {
    const char* env = std::getenv("MORTEX_OUT");
    fs::path dir = env && *env ? fs::path(env) : fs::path(flag_value);
    fs::create_directories(dir);
    return dir;
}

void write_report(const BenchReport& rep, const fs::path& dir,
                  const std::string& stem) {
    std::ofstream os(dir / (stem + ".csv"));
    os << std::setprecision(12);
    for (const auto& [k, v] : rep.config) os << "# " << k << " = " << v << "\n";
    os << "metric,value\n";
    for (const auto& [k, v] : rep.metrics) os << k << "," << v << "\n";
    os << "runtime_s," << rep.runtime_s << "\n";

    std::ofstream ps(dir / (stem + "_profile.csv"));
    ps << std::setprecision(12);
    ps << "s,x,y,field,reference\n";
    const std::size_t n =
        std::min(rep.profile.size(), rep.profile_field.size());
    for (std::size_t i = 0; i < n; ++i)
        ps << rep.profile[i].s << "," << rep.profile[i].X.x() << ","
           << rep.profile[i].X.y() << "," << rep.profile_field[i] << ","
           << rep.profile_ref[i] << "\n";
    std::cout << stem << ": ";
    for (const auto& [k, v] : rep.metrics) std::cout << k << "=" << v << " ";
    std::cout << "(" << rep.runtime_s << " s)\n";
}

struct LoadedRun {
    RunConfig cfg;
    Problem pb;
    std::vector<std::string> names;
    std::vector<std::vector<int>> tie_chains;  ///< per tie, patch node ids
};

LoadedRun load_run(const std::string& cfg_path) {
    LoadedRun run;
    run.cfg = parse_config_file(cfg_path);
    const fs::path base = fs::path(cfg_path).parent_path();
    const Formulation form = run.cfg.formulation == "plane_stress"
                                 ? Formulation::PlaneStress
                                 : Formulation::PlaneStrain;

    std::map<std::string, int> index;
    for (const auto& dc : run.cfg.domains) {
        fs::path mp = dc.mesh_file;
        if (mp.is_relative()) mp = base / mp;
        if (!fs::exists(mp))
            throw ConfigError("mesh file not found: " + mp.string());
        Domain dom;
        dom.mesh = read_mesh_file(mp.string());
        dom.material = {dc.E, dc.nu, form};
        index[dc.name] = static_cast<int>(run.pb.domains.size());
        run.names.push_back(dc.name);
        run.pb.domains.push_back(std::move(dom));
    }

    // resolve chains and build one indicator per host domain
    std::map<int, std::vector<std::vector<Vec2>>> loops_of;
    for (const auto& t : run.cfg.ties) {
        if (!t.closed)
            throw ConfigError("the run subcommand supports closed tying "
                              "chains only");
        const Mesh& pm = run.pb.domains[index[t.patch]].mesh;
        std::vector<int> chain = t.chain_nodes;
        if (chain.empty()) {
            auto it = pm.polylines.find(t.chain_name);
            if (it == pm.polylines.end())
                throw ConfigError("patch '" + t.patch + "' has no polyline '" +
                                  t.chain_name + "'");
            chain = it->second;
            if (chain.size() > 1 && chain.front() == chain.back())
                chain.pop_back();
        }
        run.tie_chains.push_back(chain);
        std::vector<Vec2> loop;
        for (int n : chain) loop.push_back(pm.nodes[n].X);
        loops_of[index[t.host]].push_back(std::move(loop));
    }
    for (auto& [host, loops] : loops_of) {
        IndicatorFn ind;
        ind.discard_loops = loops;
        nudge_indicator(ind, run.pb.domains[host].mesh);
        CutState cut = build_cut_state(run.pb.domains[host].mesh, ind);
        if (run.cfg.triangulate) {
            run.pb.domains[host].mesh = triangulate_blending_elements(
                run.pb.domains[host].mesh, cut.classes);
            cut = build_cut_state(run.pb.domains[host].mesh, ind);
        }
        run.pb.domains[host].cut = std::move(cut);
    }

    for (std::size_t i = 0; i < run.cfg.ties.size(); ++i) {
        const TieConfig& t = run.cfg.ties[i];
        const int pd = index[t.patch], hd = index[t.host];
        const Mesh& pm = run.pb.domains[pd].mesh;
        const Mesh& hm = run.pb.domains[hd].mesh;
        const CutState& cut = *run.pb.domains[hd].cut;
        InterfaceSpec spec;
        spec.patch_domain = pd;
        spec.host_domain = hd;
        const DualScheme scheme = parse_scheme(t.dual);
        spec.itf = build_interface(pm, run.tie_chains[i], true, scheme, hm,
                                   cut.classes);
        if (scheme == DualScheme::Cgi) {
            int kappa = parse_kappa(t.kappa);
            if (kappa == 0) {
                const MeshContrast mc =
                    compute_mesh_contrast(spec.itf.segments, cut.classes);
                kappa = resolve_kappa_auto(mc.global, spec.itf.n_edges(), true);
            }
            kappa = std::min(kappa, spec.itf.n_edges() - 1);
            spec.kappa = kappa;
            spec.cgi =
                partition_supersegments(pm, run.tie_chains[i], true, kappa);
        }
        run.pb.interfaces.push_back(std::move(spec));
    }

    for (const auto& b : run.cfg.bcs) {
        const Mesh& m = run.pb.domains[index[b.domain]].mesh;
        auto it = m.node_sets.find(b.nodeset);
        if (it == m.node_sets.end())
            throw ConfigError("domain '" + b.domain + "' has no node set '" +
                              b.nodeset + "'");
        if (b.comp == "x" || b.comp == "xy")
            run.pb.dirichlet.push_back({index[b.domain], it->second, 0, b.value});
        if (b.comp == "y" || b.comp == "xy")
            run.pb.dirichlet.push_back({index[b.domain], it->second, 1, b.value});
    }
    for (const auto& l : run.cfg.loads) {
        const Mesh& m = run.pb.domains[index[l.domain]].mesh;
        auto it = m.polylines.find(l.polyline);
        if (it == m.polylines.end())
            throw ConfigError("domain '" + l.domain + "' has no polyline '" +
                              l.polyline + "'");
        const Vec2 t(l.tx, l.ty);
        run.pb.tractions.push_back(
            {index[l.domain], it->second, [t](const Vec2&) { return t; }});
    }
    return run;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mortex: mesh tying across embedded interfaces"};
    app.require_subcommand(1);

    std::string out_flag = "out";
    app.add_option("--out", out_flag, "output directory (env MORTEX_OUT wins)");

    // run
    auto* cmd_run = app.add_subcommand("run", "solve a problem from a config file");
    std::string run_cfg;
    cmd_run->add_option("config", run_cfg, "config file")->required();

    // dump-cuts
    auto* cmd_dump =
        app.add_subcommand("dump-cuts", "write clipped host polygons as VTK");
    std::string dump_cfg;
    cmd_dump->add_option("config", dump_cfg, "config file")->required();

    // patch-test
    auto* cmd_pt = app.add_subcommand("patch-test", "overlapping-strip patch test");
    int pt_case = 1;
    std::string pt_load = "compression", pt_dual = "sli-p1",
                pt_kappa = "auto", pt_host = "distorted-quads";
    bool pt_tri = false;
    double pt_contrast = 1000.0;
    cmd_pt->add_option("--case", pt_case, "1: finer patch, 2: coarser patch")
        ->check(CLI::Range(1, 2));
    cmd_pt->add_option("--load", pt_load, "compression | bending")
        ->check(CLI::IsMember({"compression", "bending"}));
    cmd_pt->add_option("--dual", pt_dual, "sli-p0 | sli-p1 | cgi")
        ->check(CLI::IsMember({"sli-p0", "sli-p1", "cgi"}));
    cmd_pt->add_option("--kappa", pt_kappa, "CGI super-segment size or 'auto'");
    cmd_pt->add_option("--host", pt_host, "host mesh type")
        ->check(CLI::IsMember({"triangles", "aligned-quads", "distorted-quads"}));
    cmd_pt->add_flag("--triangulate", pt_tri, "triangulate blending elements");
    cmd_pt->add_option("--contrast", pt_contrast, "E1/E2");

    // eshelby
    auto* cmd_esh = app.add_subcommand("eshelby", "circular inclusion benchmark");
    int esh_nm = 128;
    double esh_mc = 6.0;
    std::string esh_dual = "cgi", esh_kappa = "auto";
    bool esh_tri = false;
    cmd_esh->add_option("--nm", esh_nm, "mortar segments on the circle");
    cmd_esh->add_option("--mc", esh_mc, "target mesh contrast");
    cmd_esh->add_option("--dual", esh_dual, "sli-p0 | sli-p1 | cgi")
        ->check(CLI::IsMember({"sli-p0", "sli-p1", "cgi"}));
    cmd_esh->add_option("--kappa", esh_kappa, "CGI super-segment size or 'auto'");
    cmd_esh->add_flag("--triangulate", esh_tri, "triangulate blending elements");

    // convergence
    auto* cmd_conv =
        app.add_subcommand("convergence", "Eshelby mesh-convergence sweep");
    std::vector<int> conv_nm{128, 256, 512, 1024};
    double conv_mc = 6.0;
    std::string conv_dual = "sli-p1", conv_kappa = "auto";
    bool conv_tri = false;
    cmd_conv->add_option("--nm", conv_nm, "list of mortar segment counts");
    cmd_conv->add_option("--mc", conv_mc, "target mesh contrast");
    cmd_conv->add_option("--dual", conv_dual, "sli-p0 | sli-p1 | cgi")
        ->check(CLI::IsMember({"sli-p0", "sli-p1", "cgi"}));
    cmd_conv->add_option("--kappa", conv_kappa, "CGI size or 'auto'");
    cmd_conv->add_flag("--triangulate", conv_tri, "triangulate blending elements");

    // example
    auto* cmd_ex = app.add_subcommand("example", "worked examples");
    std::string ex_name = "plate_with_hole", ex_dual = "cgi", ex_kappa = "auto";
    cmd_ex->add_option("--name", ex_name, "plate_with_hole | multi_level")
        ->check(CLI::IsMember({"plate_with_hole", "multi_level"}));
    cmd_ex->add_option("--dual", ex_dual, "sli-p0 | sli-p1 | cgi")
        ->check(CLI::IsMember({"sli-p0", "sli-p1", "cgi"}));
    cmd_ex->add_option("--kappa", ex_kappa, "CGI size or 'auto'");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        const fs::path dir = output_dir(out_flag);
        if (*cmd_run) {
            LoadedRun run = load_run(run_cfg);
            const Solution sol = solve(run.pb);
            for (std::size_t d = 0; d < run.pb.domains.size(); ++d) {
                const Domain& dom = run.pb.domains[d];
                const CutState* cut = dom.cut ? &*dom.cut : nullptr;
                const StressField st =
                    recover_nodal_stress(dom.mesh, sol.u[d], dom.material, cut);
                write_vtk_file((dir / (run.names[d] + ".vtk")).string(),
                               dom.mesh, sol.u[d], st, cut);
            }
            for (std::size_t i = 0; i < run.pb.interfaces.size(); ++i) {
                const auto prof = interface_traction_profile(run.pb, sol, i);
                const Mesh& pm =
                    run.pb.domains[run.pb.interfaces[i].patch_domain].mesh;
                Vec2 center = Vec2::Zero();
                for (int n : run.tie_chains[i]) center += pm.nodes[n].X;
                center /= static_cast<double>(run.tie_chains[i].size());
                const StressField st = recover_nodal_stress(
                    pm, sol.u[run.pb.interfaces[i].patch_domain],
                    run.pb.domains[run.pb.interfaces[i].patch_domain].material);
                write_traction_csv_file(
                    (dir / ("tie_" + std::to_string(i) + ".csv")).string(),
                    prof, center, pm, st);
            }
            std::cout << "run: residual=" << sol.residual << ", artifacts in "
                      << dir << "\n";
        } else if (*cmd_dump) {
            LoadedRun run = load_run(dump_cfg);
            for (std::size_t d = 0; d < run.pb.domains.size(); ++d)
                if (run.pb.domains[d].cut)
                    write_cut_vtk_file(
                        (dir / (run.names[d] + "_cuts.vtk")).string(),
                        *run.pb.domains[d].cut);
            std::cout << "dump-cuts: artifacts in " << dir << "\n";
        } else if (*cmd_pt) {
            PatchTestConfig cfg;
            cfg.pcase =
                pt_case == 1 ? PatchCase::FinerPatch : PatchCase::CoarserPatch;
            cfg.load = pt_load == "bending" ? LoadCase::Bending
                                            : LoadCase::Compression;
            cfg.scheme = parse_scheme(pt_dual);
            cfg.kappa = parse_kappa(pt_kappa);
            cfg.triangulate = pt_tri;
            cfg.contrast = pt_contrast;
            cfg.host_type = pt_host == "triangles" ? HostMeshType::Triangles
                            : pt_host == "aligned-quads"
                                ? HostMeshType::AlignedQuads
                                : HostMeshType::DistortedQuads;
            write_report(run_patch_test(cfg), dir, "patch_test");
        } else if (*cmd_esh) {
            write_report(run_eshelby(esh_nm, esh_mc, parse_scheme(esh_dual),
                                     parse_kappa(esh_kappa), esh_tri),
                         dir, "eshelby");
        } else if (*cmd_conv) {
            std::ofstream os(dir / "convergence.csv");
            os << std::setprecision(12);
            os << "N_m,h_norm,E_r,scheme,kappa,triangulated\n";
            for (int nm : conv_nm) {
                const BenchReport rep =
                    run_eshelby(nm, conv_mc, parse_scheme(conv_dual),
                                parse_kappa(conv_kappa), conv_tri);
                os << nm << "," << 1.0 / nm << "," << rep.metrics.at("Er")
                   << "," << conv_dual << "," << rep.metrics.at("kappa") << ","
                   << (conv_tri ? "yes" : "no") << "\n";
                std::cout << "N_m=" << nm << " Er=" << rep.metrics.at("Er")
                          << "\n";
            }
        } else if (*cmd_ex) {
            const DualScheme scheme = parse_scheme(ex_dual);
            const int kappa = parse_kappa(ex_kappa);
            const BenchReport rep =
                ex_name == "plate_with_hole"
                    ? run_example_plate_with_hole(scheme, kappa)
                    : run_example_multi_level(scheme, kappa);
            write_report(rep, dir, ex_name);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const GeometryError& e) {
        std::cerr << "geometry error: " << e.what() << "\n";
        return 3;
    } catch (const SolverError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
