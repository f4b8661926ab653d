#pragma once

#include <Eigen/Sparse>
#include <functional>
#include <optional>

#include "mortex/cgi.hpp"
#include "mortex/elasticity.hpp"
#include "mortex/mortar.hpp"

namespace mortex {

using SpMat = Eigen::SparseMatrix<double>;

struct Domain {
    Mesh mesh;
    Material material;
    std::optional<CutState> cut;  ///< present for host domains with embedded cuts
};

struct Dirichlet {
    int domain = 0;
    std::vector<int> nodes;
    int comp = 0;  ///< 0 = x, 1 = y
    double value = 0.0;
};

struct Traction {
    int domain = 0;
    std::vector<int> chain;  ///< boundary polyline, consecutive node ids
    std::function<Vec2(const Vec2&)> traction;
};

struct InterfaceSpec {
    int patch_domain = 0;
    int host_domain = 0;
    MortarInterface itf;
    int kappa = 1;
    CgiLayout cgi;  ///< populated when itf.scheme == DualScheme::Cgi
};

struct Problem {
    std::vector<Domain> domains;
    std::vector<InterfaceSpec> interfaces;
    std::vector<Dirichlet> dirichlet;
    std::vector<Traction> tractions;
};

/// Monolithic saddle-point system before constraint elimination. DoF layout:
/// per-domain displacements (x,y per node) stacked, then 2 multiplier dofs
/// per slot for each interface.
struct AssembledSystem {
    SpMat K;
    VecX f;
    std::vector<int> dom_off;
    std::vector<int> lam_off;
    int n_full = 0;
    std::map<int, double> fixed;  ///< Dirichlet + orphan dofs -> value
    std::map<int, std::vector<std::pair<int, double>>> slaves;  ///< CGI MPCs
};

AssembledSystem assemble(const Problem& pb);

struct Solution {
    std::vector<VecX> u;       ///< per domain, 2 per node
    std::vector<VecX> lambda;  ///< per interface, 2 per slot
    double residual = 0.0;
};

Solution solve(const Problem& pb);
Solution solve(const Problem& pb, const AssembledSystem& sys);

/// One sample of the interface traction recovered from the multipliers.
struct TractionSample {
    int node = -1;  ///< patch node id (-1 for the p0 per-edge samples)
    Vec2 X;
    double s = 0.0;  ///< arc length along the chain
    Vec2 t;          ///< traction acting on the patch side
};

std::vector<TractionSample> interface_traction_profile(const Problem& pb,
                                                       const Solution& sol,
                                                       int i_itf);

}  // namespace mortex
