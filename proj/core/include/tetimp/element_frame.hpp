#pragma once

#include "tetimp/tet_mesh.hpp"
#include "tetimp/types.hpp"

namespace tetimp {

// Affine frame of one element relative to the reference cell. `edges` holds
// the edge vectors x_j - x_0 as columns; `ref_edges` the same for the
// reference cell (a regular tet scaled to volume 1/N); `jac` is the inverse
// Jacobian ref_edges * edges^-1 of the reference-to-element map.
struct ElementFrame {
  Mat3 edges;
  Mat3 ref_edges;
  Mat3 jac;
  double det_jac = 0;
  double volume = 0;
};

// Edge matrix of a regular tetrahedron with volume 1/n_tets.
Mat3 reference_edges(int n_tets);

ElementFrame element_frame(const std::array<Vec3, 4>& pts,
                           const Mat3& ref_edges, double volume_floor);
ElementFrame element_frame(const TetMesh& mesh, int t);

} // namespace tetimp
