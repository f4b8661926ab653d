#pragma once

#include <map>
#include <string>

#include "mortex/assembly.hpp"
#include "mortex/eshelby.hpp"

namespace mortex {

enum class PatchCase { FinerPatch, CoarserPatch };  // Case 1 / Case 2
enum class LoadCase { Compression, Bending };
enum class HostMeshType { Triangles, AlignedQuads, DistortedQuads };

/// Overlapping-strip patch test: host strip [0,l]x[0,h2], patch strip
/// [0,l]x[h2-h*, h2-h*+h1], tied along the patch bottom edge.
struct PatchTestConfig {
    PatchCase pcase = PatchCase::FinerPatch;
    LoadCase load = LoadCase::Compression;
    DualScheme scheme = DualScheme::SliP1;
    int kappa = 1;  ///< clamped to the admissible range for CGI
    bool triangulate = false;
    HostMeshType host_type = HostMeshType::DistortedQuads;
    double contrast = 1000.0;  ///< E1/E2
    double h1 = 1.0, h2 = 1.25, hstar = 0.25, l = 5.0;
    double E1 = 1000.0;  ///< MPa
    double nu = 0.3;
    double sigma0 = 1.0;  ///< MPa
};

struct BenchReport {
    std::vector<std::pair<std::string, std::string>> config;  ///< echo, ordered
    std::map<std::string, double> metrics;
    std::vector<TractionSample> profile;  ///< primary interface, by arc length
    std::vector<double> profile_field;    ///< per profile row (sigma or lam_rr)
    std::vector<double> profile_ref;
    double runtime_s = 0.0;
};

/// Discrete nodal L2 norm ratio: sqrt(sum (f-ref)^2) / sqrt(sum ref^2).
double error_norm_interface(const std::vector<double>& field,
                            const std::vector<double>& reference);

/// Three-element interpolation-order demo: one triangulated column, one
/// aligned quad and one skewed quad under uniform compression. Returns the
/// interface u_y at mortar nodes; exact value is -1e-3 mm everywhere.
struct UniformTyingResult {
    std::vector<double> x;
    std::vector<double> uy;
    double max_rel_dev = 0.0;  ///< vs u_y = -1e-3
};
UniformTyingResult run_uniform_tying(bool triangulate);

Problem build_patch_test(const PatchTestConfig& cfg);
BenchReport run_patch_test(const PatchTestConfig& cfg);

/// Circular stiff inclusion in a large square matrix; the host grid is
/// auto-calibrated so the measured global mesh contrast hits `mc_target`
/// within 10%. kappa is ignored unless scheme is Cgi.
BenchReport run_eshelby(int n_m, double mc_target, DualScheme scheme, int kappa,
                        bool triangulate);

BenchReport run_example_plate_with_hole(DualScheme scheme, int kappa);
BenchReport run_example_multi_level(DualScheme scheme, int kappa);

/// Closed CCW node chain around a structured rectangle mesh (joins the
/// bottom/right/top/left polylines).
std::vector<int> closed_boundary_chain(const Mesh& mesh);

}  // namespace mortex
