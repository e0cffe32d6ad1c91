#include "tetimp/element_frame.hpp"

#include <cmath>

namespace tetimp {

Mat3 reference_edges(int n_tets) {
  // Regular tet with edge length (6*sqrt(2))^(1/3) has unit volume; scale so
  // the volume becomes 1/n_tets.
  double ell = std::cbrt(6.0 * std::sqrt(2.0) / n_tets);
  Mat3 e;
  e.col(0) = Vec3(ell, 0, 0);
  e.col(1) = Vec3(ell / 2, ell * std::sqrt(3.0) / 2, 0);
  e.col(2) = Vec3(ell / 2, ell * std::sqrt(3.0) / 6, ell * std::sqrt(6.0) / 3);
  return e;
}

ElementFrame element_frame(const std::array<Vec3, 4>& pts,
                           const Mat3& ref_edges, double volume_floor) {
  ElementFrame f;
  f.edges.col(0) = pts[1] - pts[0];
  f.edges.col(1) = pts[2] - pts[0];
  f.edges.col(2) = pts[3] - pts[0];
  f.ref_edges = ref_edges;
  double det = f.edges.determinant();
  f.volume = det / 6.0;
  if (f.volume <= volume_floor)
    throw DegenerateCell("element volume at or below degeneracy floor");
  Mat3 inv = f.edges.inverse();
  f.jac = ref_edges * inv;
  f.det_jac = ref_edges.determinant() / det;
  return f;
}

ElementFrame element_frame(const TetMesh& mesh, int t) {
  return element_frame(mesh.tet_points(t), reference_edges(mesh.tet_count()),
                       mesh.volume_floor());
}

} // namespace tetimp
