#pragma once

#include <iosfwd>
#include <string>

#include "mortex/mesh.hpp"

namespace mortex {

// ASCII mesh format:
//   NODES n          followed by n lines "id x y"
//   ELEMENTS m       followed by m lines "id kind n0 n1 n2 [n3]"  (kind: T3|Q4)
//   NSET name k id...        (optional, repeated)
//   POLYLINE name k id...    (optional, repeated)
// Whitespace separated, '#' starts a comment.

Mesh read_mesh(std::istream& in);
Mesh read_mesh_file(const std::string& path);

void write_mesh(std::ostream& out, const Mesh& mesh);
void write_mesh_file(const std::string& path, const Mesh& mesh);

}  // namespace mortex
