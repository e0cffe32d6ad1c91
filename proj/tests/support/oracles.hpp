#pragma once

// Independent reference computations the tests compare the library against.
// Everything here is written from the defining formulas on raw coordinates,
// on purpose not sharing code paths with the library internals.

#include <random>
#include <vector>

#include "tetimp/flips.hpp"
#include "tetimp/tet_mesh.hpp"
#include "tetimp/types.hpp"

namespace tetimp::testing {

// Mesh energy recomputed from scratch: per tet, the edge matrix, the
// Jacobian against a regular reference tet of volume 1/n_tets, and the
// two-term density. Uses only vertex/cell accessors of the mesh.
double oracle_energy(const TetMesh& mesh, double theta, double p);

// Central finite differences of oracle_energy with respect to every vertex
// coordinate. The mesh is restored before returning. Unreferenced vertices
// get zero rows.
std::vector<Vec3> fd_energy_gradient(TetMesh& mesh, double theta, double p,
                                     double step);

// A free-standing edge ring: edge endpoints a,b and the cyclic apex polygon.
// Tet i of the ring is (a, b, apex[i], apex[i+1 mod n]).
struct RingGeom {
  Vec3 a, b;
  std::vector<Vec3> apex;
  double vol_floor = 0;
};

// Exhaustive removal oracle: tries every ear-cut order of the apex polygon
// (which visits all C_{n-2} triangulations), accepting an ear only when the
// two-tet bipyramid around the cut face is convex within the volume floor
// and the two lasting tets improve on the original ring under `mode`
// (smallest dihedral up, ties by largest dihedral down; or largest aspect
// ratio down). A path wins if the closing two-tet configuration is
// admissible, passes the same check, and the full set of replacement tets
// beats the full original ring. Returns whether any path wins.
bool ring_removable(const RingGeom& g, FlipMode mode);

// Same recursion with the quality checks disabled: counts the distinct
// triangulations of the apex polygon reachable through geometrically
// admissible ear sequences. On a convex ring with no degenerate chord this
// equals the Catalan number C_{n-2}.
int count_ring_triangulations(const RingGeom& g);

// (2n)! / ((n+1)! n!) for small n.
long catalan(int n);

} // namespace tetimp::testing
