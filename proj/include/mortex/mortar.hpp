#pragma once

#include <map>

#include "mortex/cut.hpp"
#include "mortex/mesh.hpp"

namespace mortex {

/// Dual (Lagrange multiplier) interpolation on the mortar side.
/// Cgi uses the p1 basis plus multi-point constraints (see cgi.hpp).
enum class DualScheme { SliP0, SliP1, Cgi };

/// Straight interface piece between consecutive clip intersections and/or
/// kink points, inside a single host element.
struct Segment {
    int edge_index = -1;   ///< mortar edge within the chain
    int host_elem = -1;
    double xi_a = -1.0, xi_b = 1.0;  ///< mortar-edge parent limits, xi_a < xi_b
    Vec2 p0, p1;                     ///< physical end points
    VertexTag tag0 = VertexTag::KinkPoint, tag1 = VertexTag::KinkPoint;

    double length() const { return (p1 - p0).norm(); }
};

struct GaussPointMap {
    double gamma;       ///< segment parent coordinate
    double xi1;         ///< mortar-edge parent coordinate
    Vec2 host_parent;   ///< (mu, eta) in the host element
    Vec2 X;             ///< physical position
    double weight;      ///< Gauss weight on the segment parent domain
    double jseg;        ///< Jacobian of xi1(gamma) composed with the edge map
};

/// One mortar segment paired with its host element; carries the D and M
/// coupling blocks (scalar blocks, expanded by the identity per dimension).
struct MortarElement {
    Segment seg;
    std::array<int, 2> edge_nodes{-1, -1};  ///< patch-mesh node ids
    std::vector<int> host_nodes;            ///< host-mesh node ids
    std::vector<int> dual_slots;            ///< multiplier slot ids (interface-local)
    std::vector<GaussPointMap> gauss;
    MatX D;  ///< L x 2
    MatX M;  ///< L x N
};

std::vector<Segment> build_segments(const Mesh& patch,
                                    const std::vector<int>& chain, bool closed,
                                    const Mesh& host,
                                    const std::vector<ElementClass>& classes);

std::vector<GaussPointMap> map_gauss_points(const Segment& seg, const Mesh& patch,
                                            const std::vector<int>& chain,
                                            bool closed, const Mesh& host);

double segment_jacobian(const Segment& seg, double edge_length);

/// Dual basis values at a mortar-edge parent coordinate.
VecX dual_basis(DualScheme scheme, double xi1);

void compute_D(MortarElement& el, DualScheme scheme);
void compute_M(MortarElement& el, DualScheme scheme, const Mesh& host);

/// Residual blocks (U1 rows, U2 rows, constraint rows), each flattened x/y.
struct MortarResidual {
    VecX r_patch;       // 2M
    VecX r_host;        // 2N
    VecX r_constraint;  // 2L
};
MortarResidual mortar_residual(const MortarElement& el, const VecX& u_patch,
                               const VecX& u_host, const VecX& lambda);

/// Symmetric saddle tangent [[0,0,D^T],[0,0,-M^T],[D,-M,0]], dofs
/// (u_patch, u_host, lambda), each node contributing (x,y).
MatX mortar_tangent(const MortarElement& el);

/// A tying interface: patch boundary chain glued into a host mesh.
struct MortarInterface {
    std::vector<int> chain;  ///< patch node ids, closed chains unrepeated
    bool closed = false;
    DualScheme scheme = DualScheme::SliP1;
    std::vector<Segment> segments;
    std::vector<MortarElement> elements;
    int n_slots = 0;  ///< p1: chain nodes; p0: chain edges

    int n_edges() const {
        return static_cast<int>(chain.size()) - (closed ? 0 : 1);
    }
    int n_chain_nodes() const { return static_cast<int>(chain.size()); }
};

/// Builds segments, Gauss mappings and D/M blocks for a whole interface.
MortarInterface build_interface(const Mesh& patch, const std::vector<int>& chain,
                                bool closed, DualScheme scheme, const Mesh& host,
                                const std::vector<ElementClass>& classes);

struct MeshContrast {
    double global = 0.0;
    std::map<int, int> local;  ///< blending element id -> segment count
};

MeshContrast compute_mesh_contrast(const std::vector<Segment>& segments,
                                   const std::vector<ElementClass>& classes);

}  // namespace mortex
