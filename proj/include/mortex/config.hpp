#pragma once

#include <string>
#include <vector>

#include "mortex/types.hpp"

namespace mortex {

/// Run configuration parsed from a line-oriented `section.key = value` file.
/// Sections: domain.<name>, tie.<n>, bc.<n>, load.<n>, solve, output.
struct DomainConfig {
    std::string name;
    std::string mesh_file;
    double E = 1.0;
    double nu = 0.0;
};

struct TieConfig {
    std::string patch;
    std::string host;
    std::string chain_name;        ///< polyline in the patch mesh, or
    std::vector<int> chain_nodes;  ///< explicit node list `[a, b, ...]`
    bool closed = true;
    std::string dual = "sli-p1";  ///< sli-p0 | sli-p1 | cgi
    std::string kappa = "auto";
};

struct BcConfig {
    std::string domain;
    std::string nodeset;
    std::string comp = "xy";  ///< x | y | xy
    double value = 0.0;
};

struct LoadConfig {
    std::string domain;
    std::string polyline;
    double tx = 0.0, ty = 0.0;
};

struct RunConfig {
    std::vector<DomainConfig> domains;  ///< dependency order, hosts first
    std::vector<TieConfig> ties;
    std::vector<BcConfig> bcs;
    std::vector<LoadConfig> loads;
    bool triangulate = false;
    std::string formulation = "plane_strain";  ///< plane_strain | plane_stress
    std::string output_dir = ".";
};

/// Strict parser: unknown keys, malformed values and cyclic tying graphs are
/// ConfigErrors carrying the offending line number.
RunConfig parse_config(const std::string& text);
RunConfig parse_config_file(const std::string& path);

}  // namespace mortex
