#pragma once

#include "mortex/cut.hpp"
#include "mortex/mesh.hpp"
#include "mortex/quadrature.hpp"

namespace mortex {

enum class Formulation { PlaneStrain, PlaneStress };

struct Material {
    double E = 1.0;    ///< Young's modulus (MPa)
    double nu = 0.0;   ///< Poisson's ratio
    Formulation formulation = Formulation::PlaneStrain;
};

// Voigt convention throughout: (sxx, syy, sxy) with engineering shear strain.
using Voigt = Eigen::Vector3d;

Eigen::Matrix3d constitutive_matrix(const Material& mat);

/// Strain-displacement matrix at a parent point; columns ordered
/// (ux0, uy0, ux1, uy1, ...).
MatX strain_displacement(const Element& e, const Mesh& mesh, const Vec2& parent);

/// Element stiffness. With `cells` the integration is restricted to the
/// effective (clipped) volume; otherwise the full volume rule is used.
MatX element_stiffness(const Element& e, const Mesh& mesh, const Material& mat,
                       const std::vector<IntegrationCell>* cells = nullptr);

struct StressField {
    /// per element: Gauss-point stresses (empty for discarded elements)
    std::vector<std::vector<Voigt>> gauss;
    /// nodal averages over adjacent non-discarded elements
    std::vector<Voigt> nodal;
};

/// Gauss-point evaluation + least-squares extrapolation to nodes + averaging.
/// `cut` restricts blending elements to their effective cells and skips
/// discarded elements.
StressField recover_nodal_stress(const Mesh& mesh, const VecX& displacement,
                                 const Material& mat,
                                 const CutState* cut = nullptr);

}  // namespace mortex
