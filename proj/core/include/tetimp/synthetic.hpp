#pragma once

// Generators for test and demo meshes.

#include <cstdint>

#include "tetimp/tet_mesh.hpp"

namespace tetimp {

// Unit cube with n points per side, each grid cell cut into six tets around
// its main diagonal. n >= 2.
TetMesh cube_grid(int n);

// cube_grid(n) with the x >= 1/2, y >= 1/2 column of cells removed. n must
// be odd so the reentrant edge lies on the grid.
TetMesh l_shape(int n);

// Ellipsoid with semi-axes (rx, ry, rz): an icosahedral triangulation of
// the surface (subdivided the given number of times) fanned to the center.
TetMesh ellipsoid(int subdivisions, double rx, double ry, double rz);

// Randomly displaces vertices while respecting the boundary: interior
// vertices move freely, facet vertices stay in their plane, segment
// vertices slide along their line, corners stay put. amplitude is relative
// to the mean edge length; displacements that would invert an element are
// retried at half scale and eventually dropped.
void jiggle(TetMesh& mesh, double amplitude, std::uint64_t seed);

} // namespace tetimp
