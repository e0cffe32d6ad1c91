#include "tetimp/boundary.hpp"

#include <cmath>

namespace tetimp {

namespace {

// Outward normals of the boundary faces incident to v.
std::vector<Vec3> incident_boundary_normals(const TetMesh& mesh, int v) {
  std::vector<Vec3> normals;
  for (int t : mesh.tets_of_vertex(v)) {
    const auto& c = mesh.tet(t);
    for (int lf = 0; lf < 4; ++lf) {
      if (mesh.neighbors(t)[lf] != -1) continue;
      bool has_v = false;
      for (int j : kFaceCorners[lf])
        if (c[j] == v) has_v = true;
      if (!has_v) continue;
      const Vec3& p0 = mesh.vertex(c[kFaceCorners[lf][0]]);
      const Vec3& p1 = mesh.vertex(c[kFaceCorners[lf][1]]);
      const Vec3& p2 = mesh.vertex(c[kFaceCorners[lf][2]]);
      Vec3 n = (p1 - p0).cross(p2 - p0);
      double len = n.norm();
      if (len > 0) normals.push_back(n / len);
    }
  }
  return normals;
}

} // namespace

VertexClass classify_vertex(const TetMesh& mesh, int v, Vec3* dir_out) {
  auto normals = incident_boundary_normals(mesh, v);
  if (normals.empty()) return VertexClass::Free;

  const double cos_tol = std::cos(kFacetAngleDeg * M_PI / 180.0);
  // Greedy clustering: a normal joins a cluster only if it is within the
  // angular tolerance of every member.
  std::vector<std::vector<Vec3>> clusters;
  for (const Vec3& n : normals) {
    bool placed = false;
    for (auto& cl : clusters) {
      bool fits = true;
      for (const Vec3& m : cl)
        if (n.dot(m) < cos_tol) fits = false;
      if (fits) {
        cl.push_back(n);
        placed = true;
        break;
      }
    }
    if (!placed) clusters.push_back({n});
  }

  if (clusters.size() == 1) {
    Vec3 avg = Vec3::Zero();
    for (const Vec3& n : clusters[0]) avg += n;
    double len = avg.norm();
    if (len == 0) return VertexClass::Corner;
    if (dir_out) *dir_out = avg / len;
    return VertexClass::Facet;
  }
  if (clusters.size() == 2) {
    Vec3 n1 = Vec3::Zero(), n2 = Vec3::Zero();
    for (const Vec3& n : clusters[0]) n1 += n;
    for (const Vec3& n : clusters[1]) n2 += n;
    Vec3 d = n1.normalized().cross(n2.normalized());
    double len = d.norm();
    if (len < 1e-8) return VertexClass::Corner;  // ambiguous
    if (dir_out) *dir_out = d / len;
    return VertexClass::Segment;
  }
  return VertexClass::Corner;
}

GeometryModel classify_boundary(const TetMesh& mesh, BoundaryMode mode) {
  GeometryModel model;
  int nv = mesh.vertex_count();
  model.cls.assign(nv, VertexClass::Free);
  model.direction.assign(nv, Vec3::Zero());
  for (int v = 0; v < nv; ++v) {
    if (!mesh.vertex_referenced(v)) continue;
    switch (mode) {
      case BoundaryMode::Plc:
        model.cls[v] = classify_vertex(mesh, v, &model.direction[v]);
        break;
      case BoundaryMode::Curved:
        model.cls[v] = mesh.is_boundary_vertex(v) ? VertexClass::CurvedSurface
                                                  : VertexClass::Free;
        break;
      case BoundaryMode::Fixed:
        model.cls[v] =
            mesh.is_boundary_vertex(v) ? VertexClass::Corner : VertexClass::Free;
        break;
    }
  }
  return model;
}

void classify_new_vertex(const TetMesh& mesh, GeometryModel& model, int v,
                         BoundaryMode mode) {
  if (static_cast<int>(model.cls.size()) <= v) {
    model.cls.resize(v + 1, VertexClass::Free);
    model.direction.resize(v + 1, Vec3::Zero());
  }
  switch (mode) {
    case BoundaryMode::Plc:
      model.cls[v] = classify_vertex(mesh, v, &model.direction[v]);
      break;
    case BoundaryMode::Curved:
      model.cls[v] = mesh.is_boundary_vertex(v) ? VertexClass::CurvedSurface
                                                : VertexClass::Free;
      break;
    case BoundaryMode::Fixed:
      model.cls[v] =
          mesh.is_boundary_vertex(v) ? VertexClass::Corner : VertexClass::Free;
      break;
  }
}

} // namespace tetimp
