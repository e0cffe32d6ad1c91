#include "tetimp/local_ops.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <vector>

#include "tetimp/errors.hpp"
#include "tetimp/quality.hpp"
#include "tetimp/rbf_surface.hpp"

namespace tetimp {

namespace {

struct EdgeRec {
  double len;
  int a, b;
};

std::vector<EdgeRec> unique_edges(const TetMesh& mesh) {
  std::vector<EdgeRec> edges;
  std::set<std::pair<int, int>> seen;
  for (int t : mesh.live_tets()) {
    const auto& c = mesh.tet(t);
    for (int p = 0; p < 4; ++p) {
      for (int q = p + 1; q < 4; ++q) {
        int a = std::min(c[p], c[q]), b = std::max(c[p], c[q]);
        if (!seen.insert({a, b}).second) continue;
        edges.push_back({(mesh.vertex(a) - mesh.vertex(b)).norm(), a, b});
      }
    }
  }
  return edges;
}

double tet_volume_of(const TetMesh& mesh, const std::array<int, 4>& c) {
  const Vec3 a = mesh.vertex(c[0]);
  return (mesh.vertex(c[1]) - a)
             .cross(mesh.vertex(c[2]) - a)
             .dot(mesh.vertex(c[3]) - a) /
         6.0;
}

bool cell_has(const std::array<int, 4>& c, int v) {
  return c[0] == v || c[1] == v || c[2] == v || c[3] == v;
}

// Vertices adjacent to v.
std::set<int> vertex_link(const TetMesh& mesh, int v) {
  std::set<int> link;
  for (int t : mesh.tets_of_vertex(v))
    for (int u : mesh.tet(t))
      if (u != v) link.insert(u);
  return link;
}

// Contracting (a, b) must not glue the mesh to itself: the links of a and b
// may share exactly the link of the edge itself -- its apex vertices, the
// apex-to-apex edges, and no triangle.
bool link_condition(const TetMesh& mesh, int a, int b, const EdgeStar& star) {
  std::set<int> la = vertex_link(mesh, a);
  std::set<int> lb = vertex_link(mesh, b);
  std::vector<int> common;
  std::set_intersection(la.begin(), la.end(), lb.begin(), lb.end(),
                        std::back_inserter(common));
  std::vector<int> apexes = star.apex;
  std::sort(apexes.begin(), apexes.end());
  if (common != apexes) return false;

  // Shared link edges must be apex-to-apex edges of the star.
  std::set<std::pair<int, int>> star_edges;
  int n = static_cast<int>(star.apex.size());
  int spans = star.boundary ? n - 1 : n;
  for (int i = 0; i < spans; ++i) {
    int u = star.apex[i], v = star.apex[(i + 1) % n];
    star_edges.insert({std::min(u, v), std::max(u, v)});
  }
  auto link_edges = [&](int center) {
    std::set<std::pair<int, int>> out;
    for (int t : mesh.tets_of_vertex(center)) {
      const auto& c = mesh.tet(t);
      for (int p = 0; p < 4; ++p)
        for (int q = p + 1; q < 4; ++q)
          if (c[p] != center && c[q] != center)
            out.insert({std::min(c[p], c[q]), std::max(c[p], c[q])});
    }
    return out;
  };
  std::set<std::pair<int, int>> ea = link_edges(a), eb = link_edges(b);
  std::vector<std::pair<int, int>> shared;
  std::set_intersection(ea.begin(), ea.end(), eb.begin(), eb.end(),
                        std::back_inserter(shared));
  for (const auto& e : shared)
    if (!star_edges.count(e)) return false;

  // No shared link triangle: a tet (a,u,v,w) mirrored by a tet (b,u,v,w).
  for (int t : mesh.tets_of_vertex(a)) {
    const auto& c = mesh.tet(t);
    if (cell_has(c, b)) continue;
    std::array<int, 3> f;
    int k = 0;
    for (int u : c)
      if (u != a) f[k++] = u;
    for (int t2 : mesh.tets_with_face(f[0], f[1], f[2]))
      if (cell_has(mesh.tet(t2), b)) return false;
  }
  return true;
}

// Whether vertex a may be removed by sliding it onto b.
bool can_remove_onto(const TetMesh& mesh, const GeometryModel& model, int a,
                     int b, bool boundary_edge) {
  switch (model.vclass(a)) {
    case VertexClass::Free:
      return true;
    case VertexClass::Corner:
      return false;
    case VertexClass::Facet:
      // A boundary edge at a facet vertex lies inside the facet plane, so b
      // is on that plane as well.
      return boundary_edge && mesh.is_boundary_vertex(b);
    case VertexClass::Segment: {
      if (!boundary_edge || !mesh.is_boundary_vertex(b)) return false;
      Vec3 e = mesh.vertex(b) - mesh.vertex(a);
      double len = e.norm();
      if (len <= 0) return false;
      return std::abs(e.dot(model.direction[a])) / len >= 1.0 - 1e-6;
    }
    case VertexClass::CurvedSurface:
      return boundary_edge && model.vclass(b) == VertexClass::CurvedSurface;
  }
  return false;
}

// Smallest dihedral over the tets that survive contracting a onto b, or
// -infinity if any of them would be degenerate or inverted.
double contraction_quality(const TetMesh& mesh, int a, int b) {
  double worst = std::numeric_limits<double>::infinity();
  int survivors = 0;
  for (int t : mesh.tets_of_vertex(a)) {
    std::array<int, 4> c = mesh.tet(t);
    if (cell_has(c, b)) continue;
    ++survivors;
    std::replace(c.begin(), c.end(), a, b);
    if (tet_volume_of(mesh, c) <= mesh.volume_floor())
      return -std::numeric_limits<double>::infinity();
    std::array<Vec3, 4> pts = {mesh.vertex(c[0]), mesh.vertex(c[1]),
                               mesh.vertex(c[2]), mesh.vertex(c[3])};
    worst = std::min(worst, min_dihedral(pts));
  }
  if (survivors == 0) return -std::numeric_limits<double>::infinity();
  return worst;
}

void contract(TetMesh& mesh, int a, int b) {
  std::vector<int> old(mesh.tets_of_vertex(a).begin(),
                       mesh.tets_of_vertex(a).end());
  std::vector<std::array<int, 4>> cells;
  for (int t : old) {
    std::array<int, 4> c = mesh.tet(t);
    if (cell_has(c, b)) continue;
    std::replace(c.begin(), c.end(), a, b);
    cells.push_back(c);
  }
  // Removing a boundary vertex renames the boundary faces around it.
  mesh.replace_tets(old, cells, mesh.is_boundary_vertex(a));
}

} // namespace

double mean_edge_length(const TetMesh& mesh) {
  auto edges = unique_edges(mesh);
  if (edges.empty()) throw EmptyMesh("mean_edge_length: no live tets");
  double sum = 0;
  for (const auto& e : edges) sum += e.len;
  return sum / static_cast<double>(edges.size());
}

int contract_short_edges(TetMesh& mesh, const GeometryModel& model,
                         double short_factor) {
  double limit = short_factor * mean_edge_length(mesh);
  auto edges = unique_edges(mesh);
  edges.erase(std::remove_if(edges.begin(), edges.end(),
                             [&](const EdgeRec& e) { return e.len >= limit; }),
              edges.end());
  std::sort(edges.begin(), edges.end(), [](const EdgeRec& l, const EdgeRec& r) {
    return l.len != r.len ? l.len < r.len
                          : std::tie(l.a, l.b) < std::tie(r.a, r.b);
  });

  int done = 0;
  for (const auto& e : edges) {
    if (!mesh.vertex_referenced(e.a) || !mesh.vertex_referenced(e.b)) continue;
    if (!mesh.is_edge(e.a, e.b)) continue;
    EdgeStar star = mesh.edge_star(e.a, e.b);
    bool a_bnd = mesh.is_boundary_vertex(e.a);
    bool b_bnd = mesh.is_boundary_vertex(e.b);
    if (a_bnd && b_bnd && !star.boundary) continue;
    if (!link_condition(mesh, e.a, e.b, star)) continue;

    double q_ab = can_remove_onto(mesh, model, e.a, e.b, star.boundary)
                      ? contraction_quality(mesh, e.a, e.b)
                      : -std::numeric_limits<double>::infinity();
    double q_ba = can_remove_onto(mesh, model, e.b, e.a, star.boundary)
                      ? contraction_quality(mesh, e.b, e.a)
                      : -std::numeric_limits<double>::infinity();
    // Prefer keeping a boundary endpoint over an interior one.
    if (a_bnd && !b_bnd) q_ab = -std::numeric_limits<double>::infinity();
    if (b_bnd && !a_bnd) q_ba = -std::numeric_limits<double>::infinity();
    if (q_ab <= 0 && q_ba <= 0) continue;

    if (q_ab >= q_ba)
      contract(mesh, e.a, e.b);
    else
      contract(mesh, e.b, e.a);
    ++done;
  }
  return done;
}

int split_long_edges(TetMesh& mesh, GeometryModel& model, BoundaryMode mode,
                     double long_factor) {
  double limit = long_factor * mean_edge_length(mesh);
  auto edges = unique_edges(mesh);
  edges.erase(std::remove_if(edges.begin(), edges.end(),
                             [&](const EdgeRec& e) { return e.len <= limit; }),
              edges.end());
  std::sort(edges.begin(), edges.end(), [](const EdgeRec& l, const EdgeRec& r) {
    return l.len != r.len ? l.len > r.len
                          : std::tie(l.a, l.b) < std::tie(r.a, r.b);
  });

  int done = 0;
  for (const auto& e : edges) {
    if (!mesh.is_edge(e.a, e.b)) continue;
    EdgeStar star = mesh.edge_star(e.a, e.b);
    Vec3 mid = 0.5 * (mesh.vertex(e.a) + mesh.vertex(e.b));

    std::vector<int> old = star.tets;
    bool ok = true;
    for (int t : old)
      if (mesh.tet_volume(t) <= 2.0 * mesh.volume_floor()) ok = false;
    if (!ok) continue;

    int v = mesh.add_vertex(mid);
    std::vector<std::array<int, 4>> cells;
    cells.reserve(2 * old.size());
    for (int t : old) {
      std::array<int, 4> c1 = mesh.tet(t), c2 = mesh.tet(t);
      std::replace(c1.begin(), c1.end(), e.b, v);
      std::replace(c2.begin(), c2.end(), e.a, v);
      cells.push_back(c1);
      cells.push_back(c2);
    }
    // A boundary edge's midpoint subdivides the two fan-end boundary faces.
    auto ids = mesh.replace_tets(old, cells, star.boundary);
    classify_new_vertex(mesh, model, v, mode);

    if (model.vclass(v) == VertexClass::CurvedSurface && model.surface) {
      auto proj = model.surface->project(mid);
      mesh.set_vertex(v, proj.point);
      bool valid = true;
      for (int t : ids)
        if (mesh.tet_volume(t) <= mesh.volume_floor()) valid = false;
      if (!valid) mesh.set_vertex(v, mid);
    }
    ++done;
  }
  return done;
}

int split_bad_tets(TetMesh& mesh, GeometryModel& model, BoundaryMode mode,
                   double theta_lim) {
  std::vector<int> bad;
  for (int t : mesh.live_tets())
    if (min_dihedral(mesh.tet_points(t)) < theta_lim) bad.push_back(t);

  int done = 0;
  for (int t : bad) {
    std::array<int, 4> c = mesh.tet(t);
    Vec3 bary = 0.25 * (mesh.vertex(c[0]) + mesh.vertex(c[1]) +
                        mesh.vertex(c[2]) + mesh.vertex(c[3]));
    if (mesh.tet_volume(t) <= 4.0 * mesh.volume_floor()) continue;

    int v = mesh.add_vertex(bary);
    std::array<std::array<int, 4>, 4> cells;
    for (int f = 0; f < 4; ++f)
      cells[f] = {c[kFaceCorners[f][1]], c[kFaceCorners[f][0]],
                  c[kFaceCorners[f][2]], v};
    std::array<int, 1> old = {t};
    mesh.replace_tets(old, cells);
    classify_new_vertex(mesh, model, v, mode);
    ++done;
  }
  return done;
}

} // namespace tetimp
