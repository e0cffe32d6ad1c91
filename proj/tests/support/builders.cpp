#include "builders.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "tetimp/errors.hpp"
#include "tetimp/synthetic.hpp"

namespace tetimp::testing {

std::array<Vec3, 4> regular_tet_points(double edge) {
  double s3 = std::sqrt(3.0), s6 = std::sqrt(6.0);
  return {Vec3(0, 0, 0), Vec3(edge, 0, 0),
          Vec3(edge / 2, edge * s3 / 2, 0),
          Vec3(edge / 2, edge * s3 / 6, edge * s6 / 3)};
}

std::array<Vec3, 4> corner_tet_points() {
  return {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1)};
}

TetMesh single_tet(const std::array<Vec3, 4>& pts) {
  return TetMesh::build({pts[0], pts[1], pts[2], pts[3]}, {{0, 1, 2, 3}});
}

namespace {

SyntheticRing ring_from(const Vec3& a, const Vec3& b,
                        const std::vector<Vec3>& apex) {
  SyntheticRing out;
  std::vector<Vec3> points = {a, b};
  points.insert(points.end(), apex.begin(), apex.end());
  int n = static_cast<int>(apex.size());
  std::vector<std::array<int, 4>> cells;
  for (int i = 0; i < n; ++i)
    cells.push_back({0, 1, 2 + i, 2 + (i + 1) % n});
  out.mesh = TetMesh::build(std::move(points), cells);
  out.geom.a = a;
  out.geom.b = b;
  out.geom.apex = apex;
  out.geom.vol_floor = out.mesh.volume_floor();
  return out;
}

} // namespace

SyntheticRing make_ring(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  Vec3 a(0, 0, 0.8 + 0.8 * uni(rng));
  Vec3 b(0, 0, -(0.8 + 0.8 * uni(rng)));
  std::vector<Vec3> apex(n);
  for (int i = 0; i < n; ++i) {
    // Jittered but order-preserving angles keep the star embeddable.
    double ang = 2.0 * M_PI * (i + 0.6 * uni(rng)) / n;
    double r = 0.6 + 0.8 * uni(rng);
    double z = -0.35 + 0.7 * uni(rng);
    apex[i] = Vec3(r * std::cos(ang), r * std::sin(ang), z);
  }
  return ring_from(a, b, apex);
}

SyntheticRing make_convex_ring(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  Vec3 a(0, 0, 1.0 + 0.3 * uni(rng));
  Vec3 b(0, 0, -(1.0 + 0.3 * uni(rng)));
  std::vector<Vec3> apex(n);
  for (int i = 0; i < n; ++i) {
    double ang = 2.0 * M_PI * (i + 0.25 * uni(rng)) / n;
    apex[i] = Vec3(std::cos(ang), std::sin(ang), 0.0);
  }
  return ring_from(a, b, apex);
}

TetMesh jiggled_cube(int n, double amplitude, std::uint64_t seed) {
  TetMesh mesh = cube_grid(n);
  jiggle(mesh, amplitude, seed);
  return mesh;
}

bool same_mesh(const TetMesh& x, const TetMesh& y) {
  if (x.canonical_cells() != y.canonical_cells()) return false;
  if (x.vertex_count() != y.vertex_count()) return false;
  for (int v = 0; v < x.vertex_count(); ++v) {
    if (!x.vertex_referenced(v) && !y.vertex_referenced(v)) continue;
    if (x.vertex_referenced(v) != y.vertex_referenced(v)) return false;
    if (x.vertex(v) != y.vertex(v)) return false;
  }
  return true;
}

VtkData read_vtk_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  std::getline(in, line);  // version banner
  std::getline(in, line);  // title
  std::getline(in, line);  // ASCII
  if (line != "ASCII") throw IoError(path + ": expected ASCII data");
  std::getline(in, line);
  if (line != "DATASET UNSTRUCTURED_GRID")
    throw IoError(path + ": expected an unstructured grid");

  VtkData data;
  std::string word;
  long n = 0;
  in >> word >> n >> word;
  if (!in) throw IoError(path + ": bad POINTS header");
  data.points.resize(n);
  for (long i = 0; i < n; ++i)
    in >> data.points[i][0] >> data.points[i][1] >> data.points[i][2];

  long m = 0, total = 0;
  in >> word >> m >> total;
  if (!in || word != "CELLS") throw IoError(path + ": bad CELLS header");
  data.cells.resize(m);
  for (long i = 0; i < m; ++i) {
    int k = 0;
    in >> k;
    if (k != 4) throw IoError(path + ": cell is not a tetrahedron");
    for (int j = 0; j < 4; ++j) in >> data.cells[i][j];
  }
  in >> word >> m;
  if (!in || word != "CELL_TYPES")
    throw IoError(path + ": bad CELL_TYPES header");
  data.cell_types.resize(m);
  for (long i = 0; i < m; ++i) in >> data.cell_types[i];
  if (!in) throw IoError(path + ": truncated file");
  return data;
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

} // namespace tetimp::testing
