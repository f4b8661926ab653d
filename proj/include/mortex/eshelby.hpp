#pragma once

#include "mortex/elasticity.hpp"

namespace mortex {

/// Circular inclusion (radius a, material 1) embedded in an infinite matrix
/// (material 2) under remote uniaxial tension sigma0 along x, plane strain.
struct EshelbyParams {
    double a = 1.0;
    double sigma0 = 1.0;
    Material incl;    ///< material 1 (inclusion)
    Material matrix;  ///< material 2 (matrix)
};

struct PolarStress {
    double srr = 0.0, stt = 0.0, srt = 0.0;
};

/// Analytic stresses at polar point (r, theta) measured from the inclusion
/// center, theta from the loading axis.
PolarStress eshelby_stress(const EshelbyParams& p, double r, double theta);

/// Cartesian Voigt stress at a physical point relative to the center.
Voigt eshelby_stress_cartesian(const EshelbyParams& p, const Vec2& x);

}  // namespace mortex
