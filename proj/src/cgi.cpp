#include "mortex/cgi.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mortex {

namespace {

double chain_edge_length(const Mesh& patch, const std::vector<int>& chain,
                         bool closed, int edge) {
    const int n = static_cast<int>(chain.size());
    const int a = chain[edge % n];
    const int b = chain[(edge + 1) % n];
    return (patch.nodes[b].X - patch.nodes[a].X).norm();
}

// The multiplier approximates the interface traction, whose direction jumps
// wherever the chain normal turns sharply (e.g. the corners of a square
// patch). Super-segments must not interpolate across such kinks, so tiling
// restarts there. The threshold is far above the per-edge turn of any
// resolved smooth curve but below a genuine geometric corner.
constexpr double kKinkCos = 0.5;  // turn angle > 60 degrees

bool is_kink(const Mesh& patch, const std::vector<int>& chain, int pos) {
    const int n = static_cast<int>(chain.size());
    const Vec2 a = patch.nodes[chain[(pos + n - 1) % n]].X;
    const Vec2 b = patch.nodes[chain[pos]].X;
    const Vec2 c = patch.nodes[chain[(pos + 1) % n]].X;
    const Vec2 t0 = (b - a).normalized();
    const Vec2 t1 = (c - b).normalized();
    return t0.dot(t1) < kKinkCos;
}

}  // namespace

CgiLayout partition_supersegments(const Mesh& patch, const std::vector<int>& chain,
                                  bool closed, int kappa) {
    const int n_nodes = static_cast<int>(chain.size());
    const int n_edges = closed ? n_nodes : n_nodes - 1;
    if (n_edges < 1) throw GeometryError("mortar chain has no edges");
    // a closed chain with kappa == n_edges would collapse both masters of the
    // single super-segment onto one node
    const int kmax = closed ? n_edges - 1 : n_edges;
    if (kappa < 1 || kappa > kmax)
        throw ConfigError("kappa out of range [1, " + std::to_string(kmax) +
                          "]");

    // sections are maximal kink-free runs of edges; super-segments never
    // span a kink, where the traction direction genuinely jumps
    std::vector<int> section_start;  // chain positions
    std::vector<int> section_len;    // in edges
    if (closed) {
        std::vector<int> kinks;
        for (int p = 0; p < n_nodes; ++p)
            if (is_kink(patch, chain, p)) kinks.push_back(p);
        if (kinks.empty()) {
            // smooth loop: start at the position holding the lowest node id
            // so the tiling does not depend on how the loop was rotated
            int start = 0;
            for (int p = 1; p < n_nodes; ++p)
                if (chain[p] < chain[start]) start = p;
            section_start = {start};
            section_len = {n_edges};
        } else {
            // rotation-independent order: begin at the kink with lowest id
            int first = 0;
            for (std::size_t i = 1; i < kinks.size(); ++i)
                if (chain[kinks[i]] < chain[kinks[first]])
                    first = static_cast<int>(i);
            for (std::size_t i = 0; i < kinks.size(); ++i) {
                const int a = kinks[(first + i) % kinks.size()];
                const int b = kinks[(first + i + 1) % kinks.size()];
                section_start.push_back(a);
                section_len.push_back((b - a + n_nodes) % n_nodes);
            }
        }
    } else {
        int start = 0;
        for (int p = 1; p < n_nodes - 1; ++p)
            if (is_kink(patch, chain, p)) {
                section_start.push_back(start);
                section_len.push_back(p - start);
                start = p;
            }
        section_start.push_back(start);
        section_len.push_back(n_edges - start);
    }

    CgiLayout layout;
    for (std::size_t sec = 0; sec < section_start.size(); ++sec) {
        const int start = section_start[sec];
        const int len = section_len[sec];
        // a one-edge tile next to each kink keeps the multiplier nodal there:
        // the traction jump at the kink is resolved only at segment scale, and
        // a wide hat would spread its interpolation error into the section
        const bool kinked = section_start.size() > 1 ||
                            (closed && is_kink(patch, chain, start));
        const int head = (kinked && len > 2) ? 1 : 0;
        const int tail = (kinked && len > 2 + head) ? 1 : 0;
        int consumed = 0;
        while (consumed < len) {
            int k = std::min(kappa, len - tail - consumed);
            if (consumed < head || k < 1) k = 1;
            SuperSegment ss;
            ss.kappa = k;
            ss.chain_pos.reserve(k + 1);
            for (int j = 0; j <= k; ++j)
                ss.chain_pos.push_back((start + consumed + j) % n_nodes);
            // arc-length parametrization of the interior nodes
            std::vector<double> s(k + 1, 0.0);
            for (int j = 0; j < k; ++j) {
                const int edge = (start + consumed + j) % n_nodes;
                s[j + 1] = s[j] + chain_edge_length(patch, chain, closed, edge);
            }
            ss.xi_cg.resize(k + 1);
            for (int j = 0; j <= k; ++j) ss.xi_cg[j] = -1.0 + 2.0 * s[j] / s[k];
            for (int j = 1; j < k; ++j)
                layout.constraints.push_back(slave_weights(ss, j, chain, patch));
            layout.supers.push_back(std::move(ss));
            consumed += k;
        }
    }

    std::vector<char> is_slave(n_nodes, 0);
    for (const auto& c : layout.constraints) is_slave[c.slave] = 1;
    for (int p = 0; p < n_nodes; ++p)
        if (!is_slave[p]) layout.master_slots.push_back(p);
    return layout;
}

MpcConstraint slave_weights(const SuperSegment& ss, int local_index,
                            const std::vector<int>& /*chain*/,
                            const Mesh& /*patch*/) {
    if (local_index <= 0 || local_index >= static_cast<int>(ss.chain_pos.size()) - 1)
        throw std::invalid_argument("slave index must be interior");
    const double xi = ss.xi_cg[local_index];
    MpcConstraint c;
    c.slave = ss.chain_pos[local_index];
    c.masters[0] = {ss.chain_pos.front(), 0.5 * (1.0 - xi)};
    c.masters[1] = {ss.chain_pos.back(), 0.5 * (1.0 + xi)};
    return c;
}

int resolve_kappa_auto(double mesh_contrast_global, int n_edges, bool closed) {
    const int k = static_cast<int>(std::lround(mesh_contrast_global));
    return std::clamp(k, 1, closed ? n_edges - 1 : n_edges);
}

Eigen::SparseMatrix<double> mpc_prolongation(
    int n_full,
    const std::map<int, std::vector<std::pair<int, double>>>& slave_map,
    std::vector<int>& full_to_reduced) {
    full_to_reduced.assign(n_full, -1);
    int n_red = 0;
    for (int i = 0; i < n_full; ++i)
        if (!slave_map.count(i)) full_to_reduced[i] = n_red++;

    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(n_full + 2 * slave_map.size());
    for (int i = 0; i < n_full; ++i) {
        auto it = slave_map.find(i);
        if (it == slave_map.end()) {
            trips.emplace_back(i, full_to_reduced[i], 1.0);
        } else {
            for (const auto& [m, w] : it->second) {
                const int rm = full_to_reduced[m];
                if (rm < 0)
                    throw std::logic_error("slave dof chained to another slave");
                if (w != 0.0) trips.emplace_back(i, rm, w);
            }
        }
    }
    Eigen::SparseMatrix<double> T(n_full, n_red);
    T.setFromTriplets(trips.begin(), trips.end());
    return T;
}

}  // namespace mortex
