#pragma once

#include <iosfwd>
#include <string>

#include "mortex/assembly.hpp"

namespace mortex {

/// Legacy-VTK ASCII unstructured grid with nodal displacement and stress
/// point data. Discarded elements are omitted when `cut` is given.
void write_vtk(std::ostream& os, const Mesh& mesh, const VecX& displacement,
               const StressField& stress, const CutState* cut = nullptr);
void write_vtk_file(const std::string& path, const Mesh& mesh,
                    const VecX& displacement, const StressField& stress,
                    const CutState* cut = nullptr);

/// Clipped blending-element polygons as VTK polygon data (debug dump).
void write_cut_vtk(std::ostream& os, const CutState& cut);
void write_cut_vtk_file(const std::string& path, const CutState& cut);

/// Traction profile CSV: node, x, y, s, lam_x, lam_y, lam_rr, sxx, syy, sxy.
/// lam_rr is the polar projection about `center`; stresses are the patch
/// nodal recovery sampled at the profile nodes (zeros for p0 mid-edge rows).
void write_traction_csv(std::ostream& os,
                        const std::vector<TractionSample>& profile,
                        const Vec2& center, const Mesh& patch,
                        const StressField& patch_stress);
void write_traction_csv_file(const std::string& path,
                             const std::vector<TractionSample>& profile,
                             const Vec2& center, const Mesh& patch,
                             const StressField& patch_stress);

}  // namespace mortex
