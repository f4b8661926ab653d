#include "mortex/output.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>

namespace mortex {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open output file '" + path + "'");
    return os;
}

void vtk_header(std::ostream& os, const std::string& title) {
    os << "# vtk DataFile Version 3.0\n" << title << "\nASCII\n";
}

}  // namespace

void write_vtk(std::ostream& os, const Mesh& mesh, const VecX& displacement,
               const StressField& stress, const CutState* cut) {
    os << std::setprecision(12);
    vtk_header(os, "mortex fields");
    os << "DATASET UNSTRUCTURED_GRID\n";
    os << "POINTS " << mesh.nodes.size() << " double\n";
    for (const auto& n : mesh.nodes)
        os << n.X.x() << " " << n.X.y() << " 0\n";

    std::vector<const Element*> elems;
    for (const auto& e : mesh.elements)
        if (!cut || cut->is_active(e.id)) elems.push_back(&e);
    std::size_t list_len = 0;
    for (const auto* e : elems) list_len += 1 + e->nnodes();
    os << "CELLS " << elems.size() << " " << list_len << "\n";
    for (const auto* e : elems) {
        os << e->nnodes();
        for (int a = 0; a < e->nnodes(); ++a) os << " " << e->nodes[a];
        os << "\n";
    }
    os << "CELL_TYPES " << elems.size() << "\n";
    for (const auto* e : elems) os << (e->kind == ElemKind::T3 ? 5 : 9) << "\n";

    os << "POINT_DATA " << mesh.nodes.size() << "\n";
    os << "VECTORS displacement double\n";
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i)
        os << displacement(2 * i) << " " << displacement(2 * i + 1) << " 0\n";
    os << "TENSORS stress double\n";
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
        const Voigt& s = stress.nodal[i];
        os << s(0) << " " << s(2) << " 0\n"
           << s(2) << " " << s(1) << " 0\n"
           << "0 0 0\n";
    }
}

void write_vtk_file(const std::string& path, const Mesh& mesh,
                    const VecX& displacement, const StressField& stress,
                    const CutState* cut) {
    auto os = open_out(path);
    write_vtk(os, mesh, displacement, stress, cut);
}

void write_cut_vtk(std::ostream& os, const CutState& cut) {
    os << std::setprecision(12);
    vtk_header(os, "mortex cut polygons");
    os << "DATASET POLYDATA\n";
    std::size_t n_pts = 0, n_polys = 0, list_len = 0;
    for (const auto& polys : cut.polygons)
        for (const auto& p : polys) {
            n_pts += p.vertices.size();
            ++n_polys;
            list_len += 1 + p.vertices.size();
        }
    os << "POINTS " << n_pts << " double\n";
    for (const auto& polys : cut.polygons)
        for (const auto& p : polys)
            for (const auto& v : p.vertices) os << v.x() << " " << v.y() << " 0\n";
    os << "POLYGONS " << n_polys << " " << list_len << "\n";
    std::size_t base = 0;
    for (const auto& polys : cut.polygons)
        for (const auto& p : polys) {
            os << p.vertices.size();
            for (std::size_t k = 0; k < p.vertices.size(); ++k)
                os << " " << base + k;
            os << "\n";
            base += p.vertices.size();
        }
}

void write_cut_vtk_file(const std::string& path, const CutState& cut) {
    auto os = open_out(path);
    write_cut_vtk(os, cut);
}

void write_traction_csv(std::ostream& os,
                        const std::vector<TractionSample>& profile,
                        const Vec2& center, const Mesh& patch,
                        const StressField& patch_stress) {
    os << std::setprecision(12);
    os << "node,x,y,s,lam_x,lam_y,lam_rr,sxx,syy,sxy\n";
    for (const auto& p : profile) {
        const Vec2 d = p.X - center;
        const double r = d.norm();
        const Vec2 er = r > 0.0 ? Vec2(d / r) : Vec2(1.0, 0.0);
        Voigt s = Voigt::Zero();
        if (p.node >= 0) s = patch_stress.nodal[p.node];
        os << p.node << "," << p.X.x() << "," << p.X.y() << "," << p.s << ","
           << p.t.x() << "," << p.t.y() << "," << p.t.dot(er) << "," << s(0)
           << "," << s(1) << "," << s(2) << "\n";
    }
}

void write_traction_csv_file(const std::string& path,
                             const std::vector<TractionSample>& profile,
                             const Vec2& center, const Mesh& patch,
                             const StressField& patch_stress) {
    auto os = open_out(path);
    write_traction_csv(os, profile, center, patch, patch_stress);
}

}  // namespace mortex
