#include "mortex/elasticity.hpp"

#include <cmath>

namespace mortex {

Eigen::Matrix3d constitutive_matrix(const Material& mat) {
    if (mat.E <= 0.0 || mat.nu <= -1.0 || mat.nu >= 0.5)
        throw std::invalid_argument("invalid material constants");
    Eigen::Matrix3d C = Eigen::Matrix3d::Zero();
    const double E = mat.E, nu = mat.nu;
    if (mat.formulation == Formulation::PlaneStrain) {
        const double f = E / ((1.0 + nu) * (1.0 - 2.0 * nu));
        C(0, 0) = C(1, 1) = f * (1.0 - nu);
        C(0, 1) = C(1, 0) = f * nu;
        C(2, 2) = f * (1.0 - 2.0 * nu) / 2.0;
    } else {
        const double f = E / (1.0 - nu * nu);
        C(0, 0) = C(1, 1) = f;
        C(0, 1) = C(1, 0) = f * nu;
        C(2, 2) = f * (1.0 - nu) / 2.0;
    }
    return C;
}

MatX strain_displacement(const Element& e, const Mesh& mesh, const Vec2& parent) {
    const MatX dN = physical_gradients(e, mesh, parent);
    const int n = e.nnodes();
    MatX B = MatX::Zero(3, 2 * n);
    for (int a = 0; a < n; ++a) {
        B(0, 2 * a) = dN(a, 0);
        B(1, 2 * a + 1) = dN(a, 1);
        B(2, 2 * a) = dN(a, 1);
        B(2, 2 * a + 1) = dN(a, 0);
    }
    return B;
}

MatX element_stiffness(const Element& e, const Mesh& mesh, const Material& mat,
                       const std::vector<IntegrationCell>* cells) {
    const Eigen::Matrix3d C = constitutive_matrix(mat);
    const int dof = 2 * e.nnodes();
    MatX K = MatX::Zero(dof, dof);
    if (cells == nullptr) {
        const GaussRule& rule = volume_rule(e.kind);
        for (int g = 0; g < rule.size(); ++g) {
            const double detJ = jacobian(e, mesh, rule.points[g]).determinant();
            if (detJ <= 0.0)
                throw GeometryError("non-positive Jacobian in element " +
                                    std::to_string(e.id));
            const MatX B = strain_displacement(e, mesh, rule.points[g]);
            K += B.transpose() * C * B * (rule.weights[g] * detJ);
        }
    } else {
        for (const auto& cell : *cells)
            for (std::size_t g = 0; g < cell.gauss_parent.size(); ++g) {
                const MatX B = strain_displacement(e, mesh, cell.gauss_parent[g]);
                K += B.transpose() * C * B * cell.gauss_weight[g];
            }
    }
    return K;
}

StressField recover_nodal_stress(const Mesh& mesh, const VecX& displacement,
                                 const Material& mat, const CutState* cut) {
    const Eigen::Matrix3d C = constitutive_matrix(mat);
    StressField field;
    field.gauss.resize(mesh.elements.size());
    field.nodal.assign(mesh.nodes.size(), Voigt::Zero());
    std::vector<int> counts(mesh.nodes.size(), 0);

    for (const auto& e : mesh.elements) {
        if (cut && !cut->is_active(e.id)) continue;
        // gather element gauss points (volume rule, or pooled cell points)
        std::vector<Vec2> pts;
        if (cut && cut->classes[e.id] == ElementClass::Blending) {
            for (const auto& cell : cut->cells[e.id])
                pts.insert(pts.end(), cell.gauss_parent.begin(),
                           cell.gauss_parent.end());
        } else {
            pts = volume_rule(e.kind).points;
        }
        VecX ue(2 * e.nnodes());
        for (int a = 0; a < e.nnodes(); ++a) {
            ue(2 * a) = displacement(2 * e.nodes[a]);
            ue(2 * a + 1) = displacement(2 * e.nodes[a] + 1);
        }
        const int ng = static_cast<int>(pts.size());
        MatX sig(ng, 3);
        MatX A(ng, e.nnodes());
        for (int g = 0; g < ng; ++g) {
            const Voigt s = C * (strain_displacement(e, mesh, pts[g]) * ue);
            sig.row(g) = s.transpose();
            A.row(g) = shape_values(e.kind, pts[g]).transpose();
            field.gauss[e.id].push_back(s);
        }
        // least-squares fit of the shape basis to Gauss values, then averaging
        const MatX nodal =
            A.completeOrthogonalDecomposition().solve(sig);  // nnodes x 3
        for (int a = 0; a < e.nnodes(); ++a) {
            field.nodal[e.nodes[a]] += nodal.row(a).transpose();
            ++counts[e.nodes[a]];
        }
    }
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i)
        if (counts[i] > 0) field.nodal[i] /= counts[i];
    return field;
}

}  // namespace mortex
