#include "mortex/mesh_io.hpp"

#include <fstream>
#include <sstream>

namespace mortex {

namespace {

// strips comments, returns next non-empty token stream
bool next_line(std::istream& in, std::istringstream& line) {
    std::string raw;
    while (std::getline(in, raw)) {
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        std::istringstream test(raw);
        std::string tok;
        if (test >> tok) {
            line = std::istringstream(raw);
            return true;
        }
    }
    return false;
}

}  // namespace

Mesh read_mesh(std::istream& in) {
    Mesh mesh;
    std::istringstream line;
    while (next_line(in, line)) {
        std::string kw;
        line >> kw;
        if (kw == "NODES") {
            int n;
            line >> n;
            mesh.nodes.resize(n);
            for (int i = 0; i < n; ++i) {
                if (!next_line(in, line)) throw ConfigError("truncated NODES block");
                int id;
                double x, y;
                line >> id >> x >> y;
                if (id < 0 || id >= n) throw ConfigError("node id out of range");
                mesh.nodes[id] = {id, Vec2(x, y)};
            }
        } else if (kw == "ELEMENTS") {
            int m;
            line >> m;
            mesh.elements.resize(m);
            for (int i = 0; i < m; ++i) {
                if (!next_line(in, line)) throw ConfigError("truncated ELEMENTS block");
                int id;
                std::string kind;
                line >> id >> kind;
                Element e;
                e.id = id;
                if (kind == "T3")
                    e.kind = ElemKind::T3;
                else if (kind == "Q4")
                    e.kind = ElemKind::Q4;
                else
                    throw ConfigError("unknown element kind '" + kind + "'");
                for (int a = 0; a < e.nnodes(); ++a) line >> e.nodes[a];
                if (id < 0 || id >= m) throw ConfigError("element id out of range");
                mesh.elements[id] = e;
            }
        } else if (kw == "NSET" || kw == "POLYLINE") {
            std::string name;
            int k;
            line >> name >> k;
            std::vector<int> ids(k);
            for (int i = 0; i < k; ++i) {
                if (!(line >> ids[i])) {
                    if (!next_line(in, line)) throw ConfigError("truncated " + kw);
                    line >> ids[i];
                }
            }
            (kw == "NSET" ? mesh.node_sets : mesh.polylines)[name] = ids;
        } else {
            throw ConfigError("unknown mesh keyword '" + kw + "'");
        }
    }
    mesh.validate();
    return mesh;
}

Mesh read_mesh_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open mesh file '" + path + "'");
    return read_mesh(in);
}

void write_mesh(std::ostream& out, const Mesh& mesh) {
    out.precision(17);
    out << "NODES " << mesh.nodes.size() << "\n";
    for (const auto& n : mesh.nodes)
        out << n.id << " " << n.X.x() << " " << n.X.y() << "\n";
    out << "ELEMENTS " << mesh.elements.size() << "\n";
    for (const auto& e : mesh.elements) {
        out << e.id << " " << (e.kind == ElemKind::T3 ? "T3" : "Q4");
        for (int a = 0; a < e.nnodes(); ++a) out << " " << e.nodes[a];
        out << "\n";
    }
    for (const auto& [name, ids] : mesh.node_sets) {
        out << "NSET " << name << " " << ids.size();
        for (int id : ids) out << " " << id;
        out << "\n";
    }
    for (const auto& [name, ids] : mesh.polylines) {
        out << "POLYLINE " << name << " " << ids.size();
        for (int id : ids) out << " " << id;
        out << "\n";
    }
}

void write_mesh_file(const std::string& path, const Mesh& mesh) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write mesh file '" + path + "'");
    write_mesh(out, mesh);
}

}  // namespace mortex
