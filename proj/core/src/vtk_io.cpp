#include "tetimp/vtk_io.hpp"

#include <cstdio>
#include <fstream>

#include "tetimp/errors.hpp"

namespace tetimp {

void write_vtk(const std::string& path, const TetMesh& mesh,
               const std::string& title) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);

  out << "# vtk DataFile Version 3.0\n";
  out << (title.empty() ? "mesh" : title) << '\n';
  out << "ASCII\nDATASET UNSTRUCTURED_GRID\n";

  char buf[96];
  out << "POINTS " << mesh.vertex_count() << " double\n";
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    const Vec3& p = mesh.vertex(v);
    std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", p[0], p[1], p[2]);
    out << buf;
  }

  auto tets = mesh.live_tets();
  out << "CELLS " << tets.size() << ' ' << 5 * tets.size() << '\n';
  for (int t : tets) {
    const auto& c = mesh.tet(t);
    out << "4 " << c[0] << ' ' << c[1] << ' ' << c[2] << ' ' << c[3] << '\n';
  }
  out << "CELL_TYPES " << tets.size() << '\n';
  for (size_t i = 0; i < tets.size(); ++i) out << "10\n";
}

} // namespace tetimp
