#pragma once

// Reader and writer for the .node / .ele / .face triple. Both 0- and
// 1-based files are accepted (detected from the first point index) and the
// indexing base, attributes, and boundary markers survive a round trip.

#include <string>
#include <vector>

#include "tetimp/tet_mesh.hpp"

namespace tetimp {

struct TetGenMesh {
  std::vector<Vec3> points;
  std::vector<std::array<int, 4>> cells;  // 0-based
  std::vector<std::array<int, 3>> faces;  // 0-based; empty if no .face file
  std::vector<double> point_attrs;        // row-major, attr_count per point
  std::vector<int> point_markers;         // empty or one per point
  std::vector<int> face_markers;          // empty or one per face
  int attr_count = 0;
  int first_index = 1;  // indexing base of the files
};

// base may be "mesh", "mesh.node", "mesh.ele" or "mesh.face"; the .node and
// .ele files must exist, the .face file is read when present.
TetGenMesh read_tetgen(const std::string& base);

// Writes base.node, base.ele and, when faces are present, base.face.
void write_tetgen(const std::string& base, const TetGenMesh& mesh);

TetMesh to_tet_mesh(const TetGenMesh& in);

// Live tets only; faces are filled with the boundary faces.
TetGenMesh from_tet_mesh(const TetMesh& mesh, int first_index = 1);

} // namespace tetimp
