#include "mortex/assembly.hpp"

#include <Eigen/SparseLU>
#include <cmath>

namespace mortex {

namespace {

// Equilibrium on the patch side reads K1 u1 + D^T lam = f1, so the traction
// applied to the patch is -D^T lam weighted by the dual mass.
constexpr double kTractionSign = -1.0;

void add_block(std::vector<Eigen::Triplet<double>>& trips, const MatX& Ke,
               const std::vector<int>& dofs) {
    for (int i = 0; i < Ke.rows(); ++i)
        for (int j = 0; j < Ke.cols(); ++j)
            if (Ke(i, j) != 0.0) trips.emplace_back(dofs[i], dofs[j], Ke(i, j));
}

}  // namespace

AssembledSystem assemble(const Problem& pb) {
    AssembledSystem sys;
    const int nd = static_cast<int>(pb.domains.size());
    sys.dom_off.resize(nd);
    int off = 0;
    for (int d = 0; d < nd; ++d) {
        sys.dom_off[d] = off;
        off += 2 * static_cast<int>(pb.domains[d].mesh.nodes.size());
    }
    sys.lam_off.resize(pb.interfaces.size());
    for (std::size_t i = 0; i < pb.interfaces.size(); ++i) {
        sys.lam_off[i] = off;
        off += 2 * pb.interfaces[i].itf.n_slots;
    }
    sys.n_full = off;
    sys.f = VecX::Zero(off);

    std::vector<Eigen::Triplet<double>> trips;

    // volume stiffness
    for (int d = 0; d < nd; ++d) {
        const Domain& dom = pb.domains[d];
        for (const auto& e : dom.mesh.elements) {
            const std::vector<IntegrationCell>* cells = nullptr;
            if (dom.cut) {
                if (!dom.cut->is_active(e.id)) continue;
                if (dom.cut->classes[e.id] == ElementClass::Blending)
                    cells = &dom.cut->cells[e.id];
            }
            const MatX Ke = element_stiffness(e, dom.mesh, dom.material, cells);
            std::vector<int> dofs(2 * e.nnodes());
            for (int a = 0; a < e.nnodes(); ++a) {
                dofs[2 * a] = sys.dom_off[d] + 2 * e.nodes[a];
                dofs[2 * a + 1] = sys.dom_off[d] + 2 * e.nodes[a] + 1;
            }
            add_block(trips, Ke, dofs);
        }
    }

    // mortar coupling blocks, expanded per component
    for (std::size_t i = 0; i < pb.interfaces.size(); ++i) {
        const InterfaceSpec& spec = pb.interfaces[i];
        for (const auto& el : spec.itf.elements) {
            const int L = static_cast<int>(el.dual_slots.size());
            const int N = static_cast<int>(el.host_nodes.size());
            for (int c = 0; c < 2; ++c) {
                for (int l = 0; l < L; ++l) {
                    const int row = sys.lam_off[i] + 2 * el.dual_slots[l] + c;
                    for (int m = 0; m < 2; ++m) {
                        const int col = sys.dom_off[spec.patch_domain] +
                                        2 * el.edge_nodes[m] + c;
                        const double v = el.D(l, m);
                        if (v != 0.0) {
                            trips.emplace_back(row, col, v);
                            trips.emplace_back(col, row, v);
                        }
                    }
                    for (int a = 0; a < N; ++a) {
                        const int col = sys.dom_off[spec.host_domain] +
                                        2 * el.host_nodes[a] + c;
                        const double v = -el.M(l, a);
                        if (v != 0.0) {
                            trips.emplace_back(row, col, v);
                            trips.emplace_back(col, row, v);
                        }
                    }
                }
            }
        }
        if (spec.itf.scheme == DualScheme::Cgi) {
            for (const auto& con : spec.cgi.constraints)
                for (int c = 0; c < 2; ++c) {
                    std::vector<std::pair<int, double>> masters;
                    for (const auto& [slot, w] : con.masters) {
                        const int dof = sys.lam_off[i] + 2 * slot + c;
                        // merge coincident masters (whole-loop super-segment)
                        bool merged = false;
                        for (auto& mw : masters)
                            if (mw.first == dof) {
                                mw.second += w;
                                merged = true;
                            }
                        if (!merged) masters.emplace_back(dof, w);
                    }
                    sys.slaves[sys.lam_off[i] + 2 * con.slave + c] =
                        std::move(masters);
                }
        }
    }

    sys.K.resize(off, off);
    sys.K.setFromTriplets(trips.begin(), trips.end());

    // boundary tractions, 3-point rule per edge
    const GaussRule1d& rule = segment_rule();
    for (const auto& tr : pb.tractions) {
        const Mesh& mesh = pb.domains[tr.domain].mesh;
        for (std::size_t e = 0; e + 1 < tr.chain.size(); ++e) {
            const Vec2 Xa = mesh.nodes[tr.chain[e]].X;
            const Vec2 Xb = mesh.nodes[tr.chain[e + 1]].X;
            const double half_len = 0.5 * (Xb - Xa).norm();
            for (int g = 0; g < rule.size(); ++g) {
                const double gamma = rule.points[g];
                const Vec2 N{0.5 * (1.0 - gamma), 0.5 * (1.0 + gamma)};
                const Vec2 X = N[0] * Xa + N[1] * Xb;
                const Vec2 t = tr.traction(X);
                for (int a = 0; a < 2; ++a) {
                    const int node = tr.chain[e + a];
                    const double w = rule.weights[g] * half_len * N[a];
                    sys.f(sys.dom_off[tr.domain] + 2 * node) += w * t.x();
                    sys.f(sys.dom_off[tr.domain] + 2 * node + 1) += w * t.y();
                }
            }
        }
    }

    // orphan dofs of cut domains are pinned to zero
    for (int d = 0; d < nd; ++d)
        if (pb.domains[d].cut)
            for (int n : pb.domains[d].cut->orphans)
                for (int c = 0; c < 2; ++c)
                    sys.fixed[sys.dom_off[d] + 2 * n + c] = 0.0;

    for (const auto& bc : pb.dirichlet)
        for (int n : bc.nodes) {
            const int dof = sys.dom_off[bc.domain] + 2 * n + bc.comp;
            auto it = sys.fixed.find(dof);
            if (it != sys.fixed.end() && it->second != bc.value &&
                it->second != 0.0)
                throw ConfigError("conflicting Dirichlet values at node " +
                                  std::to_string(n));
            sys.fixed[dof] = bc.value;
        }

    return sys;
}

Solution solve(const Problem& pb) { return solve(pb, assemble(pb)); }

Solution solve(const Problem& pb, const AssembledSystem& sys) {
    // unified reduction: fixed dofs become empty-master slaves with an
    // inhomogeneous part, CGI slaves interpolate their masters
    std::map<int, std::vector<std::pair<int, double>>> eliminate = sys.slaves;
    VecX u_p = VecX::Zero(sys.n_full);
    for (const auto& [dof, val] : sys.fixed) {
        if (eliminate.count(dof))
            throw std::logic_error("dof is both fixed and an MPC slave");
        eliminate[dof] = {};
        u_p(dof) = val;
    }

    std::vector<int> full_to_reduced;
    const SpMat T = mpc_prolongation(sys.n_full, eliminate, full_to_reduced);
    const SpMat Kred = SpMat(T.transpose()) * sys.K * T;
    const VecX fred = T.transpose() * (sys.f - sys.K * u_p);

    Eigen::SparseLU<SpMat> lu;
    lu.analyzePattern(Kred);
    lu.factorize(Kred);
    if (lu.info() != Eigen::Success)
        throw SolverError("saddle-point factorization failed (singular system)");
    VecX x = lu.solve(fred);
    if (lu.info() != Eigen::Success) throw SolverError("sparse solve failed");
    // iterative refinement: the saddle system mixes stiffness rows O(E) with
    // constraint rows O(h), so a single backsolve can lose several digits
    for (int it = 0; it < 2; ++it) {
        const VecX r = fred - Kred * x;
        x += lu.solve(r);
    }

    const double res = (Kred * x - fred).norm() /
                       std::max(1.0, fred.norm());
    if (!(res < 1e-7))
        throw SolverError("solution residual too large: " + std::to_string(res));

    const VecX full = T * x + u_p;
    Solution sol;
    sol.residual = res;
    sol.u.resize(pb.domains.size());
    for (std::size_t d = 0; d < pb.domains.size(); ++d)
        sol.u[d] = full.segment(sys.dom_off[d],
                                2 * pb.domains[d].mesh.nodes.size());
    sol.lambda.resize(pb.interfaces.size());
    for (std::size_t i = 0; i < pb.interfaces.size(); ++i)
        sol.lambda[i] =
            full.segment(sys.lam_off[i], 2 * pb.interfaces[i].itf.n_slots);
    return sol;
}

std::vector<TractionSample> interface_traction_profile(const Problem& pb,
                                                       const Solution& sol,
                                                       int i_itf) {
    const InterfaceSpec& spec = pb.interfaces[i_itf];
    const MortarInterface& itf = spec.itf;
    const Mesh& patch = pb.domains[spec.patch_domain].mesh;
    const VecX& lam = sol.lambda[i_itf];
    const int n_nodes = itf.n_chain_nodes();
    const int n_edges = itf.n_edges();

    // cumulative arc length at each chain position
    std::vector<double> arclen(n_nodes, 0.0);
    for (int p = 0; p + 1 < n_nodes; ++p) {
        const Vec2 a = patch.nodes[itf.chain[p]].X;
        const Vec2 b = patch.nodes[itf.chain[p + 1]].X;
        arclen[p + 1] = arclen[p] + (b - a).norm();
    }

    std::vector<TractionSample> out;
    if (itf.scheme == DualScheme::SliP0) {
        for (int e = 0; e < n_edges; ++e) {
            const Vec2 a = patch.nodes[itf.chain[e]].X;
            const Vec2 b = patch.nodes[itf.chain[(e + 1) % n_nodes]].X;
            TractionSample ts;
            ts.node = -1;
            ts.X = 0.5 * (a + b);
            ts.s = arclen[e] + 0.5 * (b - a).norm();
            ts.t = kTractionSign * Vec2(lam(2 * e), lam(2 * e + 1));
            out.push_back(ts);
        }
        return out;
    }

    // p1/CGI: consistent D^T lam divided by the lumped dual mass per node
    std::vector<Vec2> num(n_nodes, Vec2::Zero());
    std::vector<double> mass(n_nodes, 0.0);
    for (const auto& el : itf.elements) {
        const int e = el.seg.edge_index;
        const std::array<int, 2> pos{e, (e + 1) % n_nodes};
        for (int m = 0; m < 2; ++m)
            for (std::size_t l = 0; l < el.dual_slots.size(); ++l) {
                const int slot = el.dual_slots[l];
                num[pos[m]] += el.D(static_cast<int>(l), m) *
                               Vec2(lam(2 * slot), lam(2 * slot + 1));
                mass[pos[m]] += el.D(static_cast<int>(l), m);
            }
    }
    for (int p = 0; p < n_nodes; ++p) {
        if (mass[p] <= 0.0) continue;
        TractionSample ts;
        ts.node = itf.chain[p];
        ts.X = patch.nodes[ts.node].X;
        ts.s = arclen[p];
        ts.t = kTractionSign * num[p] / mass[p];
        out.push_back(ts);
    }
    return out;
}

}  // namespace mortex
