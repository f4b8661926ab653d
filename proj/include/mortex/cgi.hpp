#pragma once

#include <Eigen/Sparse>

#include "mortex/mortar.hpp"

namespace mortex {

/// Chain of kappa mortar segments; masters at the ends carry dual DoFs,
/// interior slaves are interpolated.
struct SuperSegment {
    std::vector<int> chain_pos;  ///< node positions within the chain, kappa+1 long
    std::vector<double> xi_cg;   ///< arc-length parametrization, -1..1
    int kappa = 1;
};

struct MpcConstraint {
    int slave;  ///< multiplier slot id
    std::array<std::pair<int, double>, 2> masters;  ///< (slot, weight), weights sum to 1
};

struct CgiLayout {
    std::vector<SuperSegment> supers;
    std::vector<MpcConstraint> constraints;
    std::vector<int> master_slots;
};

/// Tiles the mortar chain into super-segments of kappa edges (remainder
/// last). Closed chains start at the chain position holding the lowest
/// node id and wrap. Requires the p1 dual scheme.
CgiLayout partition_supersegments(const Mesh& patch, const std::vector<int>& chain,
                                  bool closed, int kappa);

/// Hat-function weights of one slave inside its super-segment.
MpcConstraint slave_weights(const SuperSegment& ss, int local_index,
                            const std::vector<int>& chain, const Mesh& patch);

/// kappa resolved from "auto": round(global mesh contrast), clamped to the
/// admissible range.
int resolve_kappa_auto(double mesh_contrast_global, int n_edges, bool closed);

/// Prolongation from reduced (masters kept, slaves eliminated) to full DoFs.
/// `slave_map` maps a full dof index to its master (dof, weight) pairs.
Eigen::SparseMatrix<double> mpc_prolongation(
    int n_full,
    const std::map<int, std::vector<std::pair<int, double>>>& slave_map,
    std::vector<int>& full_to_reduced);

}  // namespace mortex
