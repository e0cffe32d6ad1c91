#include "tetimp/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <vector>

#include "tetimp/boundary.hpp"
#include "tetimp/errors.hpp"
#include "tetimp/local_ops.hpp"

namespace tetimp {

namespace {

constexpr int kPerms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                              {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};

// Six tets per grid cell, all sharing the cell's main diagonal.
void cube_cells(int n, const std::function<bool(int, int, int)>& keep,
                std::vector<Vec3>& points,
                std::vector<std::array<int, 4>>& cells) {
  auto vid = [n](int i, int j, int k) { return i + n * (j + n * k); };
  double h = 1.0 / (n - 1);
  points.reserve(static_cast<size_t>(n) * n * n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) points.emplace_back(i * h, j * h, k * h);

  for (int k = 0; k + 1 < n; ++k) {
    for (int j = 0; j + 1 < n; ++j) {
      for (int i = 0; i + 1 < n; ++i) {
        if (!keep(i, j, k)) continue;
        for (const auto& perm : kPerms) {
          int c[3] = {i, j, k};
          std::array<int, 4> cell;
          cell[0] = vid(c[0], c[1], c[2]);
          for (int s = 0; s < 3; ++s) {
            ++c[perm[s]];
            cell[s + 1] = vid(c[0], c[1], c[2]);
          }
          cells.push_back(cell);
        }
      }
    }
  }
}

TetMesh build_referenced(const std::vector<Vec3>& points,
                         std::vector<std::array<int, 4>> cells) {
  std::vector<int> remap(points.size(), -1);
  std::vector<Vec3> used;
  for (auto& cell : cells) {
    for (int& v : cell) {
      if (remap[v] < 0) {
        remap[v] = static_cast<int>(used.size());
        used.push_back(points[v]);
      }
      v = remap[v];
    }
  }
  return TetMesh::build(used, cells);
}

} // namespace

TetMesh cube_grid(int n) {
  if (n < 2) throw InvalidInput("cube_grid: need at least two points per side");
  std::vector<Vec3> points;
  std::vector<std::array<int, 4>> cells;
  cube_cells(n, [](int, int, int) { return true; }, points, cells);
  return TetMesh::build(points, cells);
}

TetMesh l_shape(int n) {
  if (n < 3 || n % 2 == 0)
    throw InvalidInput("l_shape: need an odd point count of at least three");
  int half = (n - 1) / 2;
  std::vector<Vec3> points;
  std::vector<std::array<int, 4>> cells;
  cube_cells(n, [half](int i, int j, int) { return i < half || j < half; },
             points, cells);
  return build_referenced(points, cells);
}

TetMesh ellipsoid(int subdivisions, double rx, double ry, double rz) {
  if (subdivisions < 0 || subdivisions > 5)
    throw InvalidInput("ellipsoid: subdivisions must be between 0 and 5");
  if (rx <= 0 || ry <= 0 || rz <= 0)
    throw InvalidInput("ellipsoid: radii must be positive");

  double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> verts = {
      {-1, phi, 0}, {1, phi, 0}, {-1, -phi, 0}, {1, -phi, 0},
      {0, -1, phi}, {0, 1, phi}, {0, -1, -phi}, {0, 1, -phi},
      {phi, 0, -1}, {phi, 0, 1}, {-phi, 0, -1}, {-phi, 0, 1}};
  for (auto& v : verts) v.normalize();
  std::vector<std::array<int, 3>> faces = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
      {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
      {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
      {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};

  for (int s = 0; s < subdivisions; ++s) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      Vec3 m = (verts[a] + verts[b]).normalized();
      verts.push_back(m);
      int id = static_cast<int>(verts.size()) - 1;
      midpoint[key] = id;
      return id;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(4 * faces.size());
    for (const auto& f : faces) {
      int ab = mid(f[0], f[1]), bc = mid(f[1], f[2]), ca = mid(f[2], f[0]);
      next.push_back({f[0], ab, ca});
      next.push_back({f[1], bc, ab});
      next.push_back({f[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    faces.swap(next);
  }

  std::vector<Vec3> points;
  points.reserve(verts.size() + 1);
  points.emplace_back(0, 0, 0);
  for (const auto& v : verts)
    points.emplace_back(rx * v[0], ry * v[1], rz * v[2]);
  std::vector<std::array<int, 4>> cells;
  cells.reserve(faces.size());
  for (const auto& f : faces)
    cells.push_back({0, f[0] + 1, f[1] + 1, f[2] + 1});
  return TetMesh::build(points, cells);
}

void jiggle(TetMesh& mesh, double amplitude, std::uint64_t seed) {
  if (amplitude < 0) throw InvalidInput("jiggle: amplitude must be >= 0");
  GeometryModel model = classify_boundary(mesh);
  double scale = amplitude * mean_edge_length(mesh);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  for (int v = 0; v < mesh.vertex_count(); ++v) {
    if (!mesh.vertex_referenced(v)) continue;
    if (model.vclass(v) == VertexClass::Corner) continue;
    Vec3 d(unit(rng), unit(rng), unit(rng));
    switch (model.vclass(v)) {
      case VertexClass::Facet:
        d -= d.dot(model.direction[v]) * model.direction[v];
        break;
      case VertexClass::Segment:
        d = d.dot(model.direction[v]) * model.direction[v];
        break;
      default:
        break;
    }
    Vec3 base = mesh.vertex(v);
    double s = scale;
    for (int attempt = 0; attempt < 20; ++attempt, s *= 0.5) {
      mesh.set_vertex(v, base + s * d);
      bool ok = true;
      for (int t : mesh.tets_of_vertex(v))
        if (mesh.tet_volume(t) <= mesh.volume_floor()) ok = false;
      if (ok) break;
      mesh.set_vertex(v, base);
    }
  }
}

} // namespace tetimp
