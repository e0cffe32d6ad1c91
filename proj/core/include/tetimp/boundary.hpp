#pragma once

#include <memory>
#include <vector>

#include "tetimp/tet_mesh.hpp"
#include "tetimp/types.hpp"

namespace tetimp {

class RbfSurface;

enum class VertexClass : unsigned char {
  Free,          // interior vertex
  Facet,         // boundary vertex inside a planar facet
  Segment,       // boundary vertex on the line where two facets meet
  Corner,        // boundary vertex where three or more facets meet; fixed
  CurvedSurface, // boundary vertex constrained to a fitted smooth surface
};

enum class BoundaryMode {
  Plc,    // planar facets / segments / corners from normal clustering
  Curved, // every boundary vertex rides the reconstructed surface
  Fixed,  // every boundary vertex pinned in place
};

// Angle (degrees) under which two boundary face normals count as coplanar.
inline constexpr double kFacetAngleDeg = 15.0;

struct GeometryModel {
  std::vector<VertexClass> cls;
  std::vector<Vec3> direction;  // facet normal or segment direction
  std::shared_ptr<RbfSurface> surface;  // set for Curved mode

  VertexClass vclass(int v) const {
    return v < static_cast<int>(cls.size()) ? cls[v] : VertexClass::Free;
  }
};

// Classifies a single boundary vertex from its incident boundary face
// normals. Ambiguous clusterings fall back to Corner.
VertexClass classify_vertex(const TetMesh& mesh, int v, Vec3* dir_out);

// Classifies every vertex of the mesh. Curved mode marks boundary vertices
// CurvedSurface but does not fit the surface (see RbfSurface::fit_boundary).
GeometryModel classify_boundary(const TetMesh& mesh,
                                BoundaryMode mode = BoundaryMode::Plc);

// Re-derives the class of one vertex in an existing model (used after local
// operations introduce new vertices).
void classify_new_vertex(const TetMesh& mesh, GeometryModel& model, int v,
                         BoundaryMode mode);

} // namespace tetimp
