#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "builders.hpp"
#include "oracles.hpp"
#include "tetimp/errors.hpp"
#include "tetimp/quality.hpp"
#include "tetimp/synthetic.hpp"

using namespace tetimp;
using namespace tetimp::testing;

namespace {

std::array<Vec3, 4> random_tet(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1, 1);
  for (;;) {
    std::array<Vec3, 4> p;
    for (auto& q : p) q = Vec3(u(rng), u(rng), u(rng));
    double vol = (p[1] - p[0]).cross(p[2] - p[0]).dot(p[3] - p[0]) / 6.0;
    if (vol > 1e-3) return p;
  }
}

Mat3 random_rotation(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1, 1);
  Mat3 a;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a(i, j) = u(rng);
  Eigen::HouseholderQR<Mat3> qr(a);
  Mat3 q = qr.householderQ();
  if (q.determinant() < 0) q.col(0) *= -1;
  return q;
}

}  // namespace

TEST_CASE("aspect ratio is 1 for the regular tet and 2 for the corner tet") {
  CHECK(aspect_ratio(regular_tet_points()) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(aspect_ratio(corner_tet_points()) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("aspect ratio is scale and rotation invariant") {
  std::mt19937_64 rng(17);
  for (int k = 0; k < 10; ++k) {
    auto p = random_tet(rng);
    double ar = aspect_ratio(p);
    CHECK(ar >= 1.0);
    Mat3 q = random_rotation(rng);
    std::array<Vec3, 4> pr;
    for (int i = 0; i < 4; ++i) pr[i] = 3.7 * (q * p[i]) + Vec3(5, -2, 1);
    CHECK(aspect_ratio(pr) == doctest::Approx(ar).epsilon(1e-9));
  }
}

TEST_CASE("aspect ratio rejects flat cells") {
  std::array<Vec3, 4> flat = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0),
                              Vec3(1, 1, 0)};
  CHECK_THROWS_AS(aspect_ratio(flat, 1e-14), DegenerateCell);
}

TEST_CASE("dihedral angles of the regular tet are all acos(1/3)") {
  double ref = std::acos(1.0 / 3.0) * 180.0 / M_PI;
  CHECK(regular_dihedral_deg() == doctest::Approx(ref).epsilon(1e-15));
  auto ang = dihedral_angles(regular_tet_points());
  for (double a : ang) CHECK(a == doctest::Approx(ref).epsilon(1e-12));
  CHECK(min_dihedral(regular_tet_points()) == doctest::Approx(ref));
  CHECK(max_dihedral(regular_tet_points()) == doctest::Approx(ref));
}

TEST_CASE("dihedral angles of the unit corner tet") {
  // Three right angles along the legs, acos(1/sqrt(3)) along the far face.
  auto ang = dihedral_angles(corner_tet_points());
  std::sort(ang.begin(), ang.end());
  double lo = std::acos(1.0 / std::sqrt(3.0)) * 180.0 / M_PI;
  for (int i = 0; i < 3; ++i) CHECK(ang[i] == doctest::Approx(lo).epsilon(1e-12));
  for (int i = 3; i < 6; ++i) CHECK(ang[i] == doctest::Approx(90.0).epsilon(1e-12));
}

TEST_CASE("dihedral angles are invariant under reflection") {
  std::mt19937_64 rng(23);
  for (int k = 0; k < 10; ++k) {
    auto p = random_tet(rng);
    auto a1 = dihedral_angles(p);
    std::array<Vec3, 4> m;
    for (int i = 0; i < 4; ++i) m[i] = Vec3(-p[i].x(), p[i].y(), p[i].z());
    auto a2 = dihedral_angles(m);
    std::sort(a1.begin(), a1.end());
    std::sort(a2.begin(), a2.end());
    for (int i = 0; i < 6; ++i)
      CHECK(a1[i] == doctest::Approx(a2[i]).epsilon(1e-10));
  }
}

TEST_CASE("mesh_min_angle agrees with a direct sweep") {
  TetMesh mesh = jiggled_cube(4, 0.3, 99);
  double lo = 1e300;
  for (int t : mesh.live_tets())
    lo = std::min(lo, min_dihedral(mesh.tet_points(t)));
  CHECK(mesh_min_angle(mesh) == doctest::Approx(lo).epsilon(1e-15));
}

TEST_CASE("energy of a unit-volume regular tet is the density at identity") {
  // theta = 1/3, p = 3/2: G(I, 1) = (2/3) * 3^(9/4).
  double edge = std::cbrt(6.0 * std::sqrt(2.0));
  TetMesh mesh = single_tet(regular_tet_points(edge));
  EnergyParams prm;
  CHECK(energy(mesh, prm) ==
        doctest::Approx(7.8964440777149552).epsilon(1e-12));
}

TEST_CASE("energy matches an independent evaluation") {
  EnergyParams a;                    // defaults
  EnergyParams b{0.4, 2.0};          // off-default weights
  for (auto seed : {1u, 2u}) {
    TetMesh mesh = jiggled_cube(3, 0.25, seed);
    CHECK(energy(mesh, a) ==
          doctest::Approx(oracle_energy(mesh, a.theta, a.p)).epsilon(1e-12));
    CHECK(energy(mesh, b) ==
          doctest::Approx(oracle_energy(mesh, b.theta, b.p)).epsilon(1e-12));
  }
}

TEST_CASE("energy is invariant under rigid motion") {
  std::mt19937_64 rng(31);
  TetMesh mesh = jiggled_cube(3, 0.2, 7);
  EnergyParams prm;
  double e0 = energy(mesh, prm);

  TetMesh shifted = mesh;
  for (int v = 0; v < shifted.vertex_count(); ++v)
    shifted.set_vertex(v, shifted.vertex(v) + Vec3(1.3, -0.7, 2.1));
  CHECK(energy(shifted, prm) == doctest::Approx(e0).epsilon(1e-12));

  Mat3 q = random_rotation(rng);
  TetMesh rotated = mesh;
  for (int v = 0; v < rotated.vertex_count(); ++v)
    rotated.set_vertex(v, q * rotated.vertex(v));
  CHECK(energy(rotated, prm) == doctest::Approx(e0).epsilon(1e-9));
}

TEST_CASE("distorting an interior vertex raises the energy") {
  TetMesh mesh = cube_grid(3);
  EnergyParams prm;
  double e0 = energy(mesh, prm);
  int center = -1;
  for (int v = 0; v < mesh.vertex_count(); ++v)
    if ((mesh.vertex(v) - Vec3(0.5, 0.5, 0.5)).norm() < 1e-12) center = v;
  REQUIRE(center >= 0);
  for (Vec3 d : {Vec3(0.1, 0.1, 0.1), Vec3(-0.15, 0, 0.1), Vec3(0, -0.2, 0)}) {
    mesh.set_vertex(center, Vec3(0.5, 0.5, 0.5) + d);
    CHECK(energy(mesh, prm) > e0);
  }
}

TEST_CASE("energy weight validation") {
  CHECK_THROWS_AS((EnergyParams{0.0, 1.5}.validate()), InvalidInput);
  CHECK_THROWS_AS((EnergyParams{0.6, 1.5}.validate()), InvalidInput);
  CHECK_THROWS_AS((EnergyParams{1.0 / 3.0, 1.0}.validate()), InvalidInput);
  CHECK_NOTHROW((EnergyParams{0.5, 1.5}.validate()));
  CHECK_NOTHROW((EnergyParams{}.validate()));
}

TEST_CASE("stats of a single regular tet") {
  TetMesh mesh = single_tet(regular_tet_points());
  QualityStats s = mesh_stats(mesh, EnergyParams{});
  CHECK(s.n_tets == 1);
  CHECK(s.n_vertices == 4);
  double ref = regular_dihedral_deg();
  CHECK(s.min_dihedral_deg == doctest::Approx(ref));
  CHECK(s.max_dihedral_deg == doctest::Approx(ref));
  CHECK(s.mean_dihedral_deg == doctest::Approx(ref));
  CHECK(s.stddev_dihedral_deg == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(s.min_aspect == doctest::Approx(1.0));
  CHECK(s.max_aspect == doctest::Approx(1.0));
  long total = 0;
  for (long c : s.histogram) total += c;
  CHECK(total == 6);
  CHECK(s.histogram[static_cast<int>(ref / 5.0)] == 6);
}

TEST_CASE("histogram counts six angles per tet") {
  TetMesh mesh = jiggled_cube(3, 0.3, 12);
  QualityStats s = mesh_stats(mesh, EnergyParams{});
  long total = 0;
  for (long c : s.histogram) total += c;
  CHECK(total == 6l * s.n_tets);
}

TEST_CASE("stats do not depend on cell order") {
  TetMesh mesh = jiggled_cube(3, 0.25, 40);
  auto cells = mesh.canonical_cells();
  std::vector<Vec3> pts;
  for (int v = 0; v < mesh.vertex_count(); ++v) pts.push_back(mesh.vertex(v));
  std::mt19937_64 rng(8);
  std::shuffle(cells.begin(), cells.end(), rng);
  TetMesh shuffled = TetMesh::build(pts, cells);

  QualityStats a = mesh_stats(mesh, EnergyParams{});
  QualityStats b = mesh_stats(shuffled, EnergyParams{});
  CHECK(a.min_dihedral_deg == doctest::Approx(b.min_dihedral_deg).epsilon(1e-15));
  CHECK(a.max_aspect == doctest::Approx(b.max_aspect).epsilon(1e-15));
  CHECK(a.mean_dihedral_deg == doctest::Approx(b.mean_dihedral_deg).epsilon(1e-12));
  CHECK(a.energy == doctest::Approx(b.energy).epsilon(1e-12));
  CHECK(a.histogram == b.histogram);
}
