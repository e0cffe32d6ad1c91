#include <doctest.h>

#include <cmath>
#include <random>

#include "builders.hpp"
#include "tetimp/errors.hpp"
#include "tetimp/rbf_surface.hpp"
#include "tetimp/synthetic.hpp"

using namespace tetimp;
using namespace tetimp::testing;

namespace {

// Fibonacci-ish point set on the unit sphere.
std::vector<Vec3> sphere_points(int n) {
  std::vector<Vec3> pts;
  double ga = M_PI * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    double z = 1.0 - 2.0 * (i + 0.5) / n;
    double r = std::sqrt(1.0 - z * z);
    pts.emplace_back(r * std::cos(ga * i), r * std::sin(ga * i), z);
  }
  return pts;
}

}  // namespace

TEST_CASE("cube facet normals are exact and outward") {
  TetMesh mesh = cube_grid(4);
  auto normals = estimate_normals(mesh);
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    if (!mesh.is_boundary_vertex(v)) {
      CHECK(normals[v].norm() == 0.0);
      continue;
    }
    const Vec3& p = mesh.vertex(v);
    int extreme = 0;
    for (int k = 0; k < 3; ++k)
      if (p[k] == 0.0 || p[k] == 1.0) ++extreme;
    if (extreme != 1) continue;  // only facet-interior vertices are exact
    Vec3 expect(0, 0, 0);
    for (int k = 0; k < 3; ++k) {
      if (p[k] == 0.0) expect[k] = -1;
      if (p[k] == 1.0) expect[k] = 1;
    }
    CHECK((normals[v] - expect).norm() < 1e-12);
  }
}

TEST_CASE("ellipsoid normals agree with the analytic gradient") {
  TetMesh mesh = ellipsoid(2, 1.0, 1.0, 1.0);
  auto normals = estimate_normals(mesh);
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    if (!mesh.is_boundary_vertex(v)) continue;
    Vec3 exact = mesh.vertex(v).normalized();  // sphere: normal == position
    CHECK(normals[v].norm() == doctest::Approx(1.0).epsilon(1e-12));
    double cosang = normals[v].dot(exact);
    CHECK(cosang > std::cos(5.0 * M_PI / 180.0));  // within 5 degrees
    CHECK(cosang > 0);                             // outward
  }
}

TEST_CASE("estimate_normals requires a watertight boundary") {
  // Two tets glued at a face but meeting the outer world along an edge used
  // by four boundary faces: a and b share edge (0,1) only.
  std::vector<Vec3> pts = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0),
                           Vec3(0, -1, 0), Vec3(0.4, 0.1, 1),
                           Vec3(0.4, -0.1, -1)};
  TetMesh mesh = TetMesh::build(pts, {{0, 1, 2, 4}, {0, 1, 3, 5}});
  CHECK_THROWS_AS(estimate_normals(mesh), OpenBoundary);
}

TEST_CASE("fit interpolates its samples") {
  auto pts = sphere_points(120);
  std::vector<Vec3> normals = pts;  // unit sphere
  RbfSurface s = RbfSurface::fit(pts, normals);
  for (const Vec3& p : pts) CHECK(std::abs(s.eval(p)) < 1e-8);
  // Offset centers reproduce the eps value.
  double eps = s.offset();
  for (size_t i = 0; i < pts.size(); i += 7)
    CHECK(s.eval(pts[i] * (1.0 + eps)) == doctest::Approx(eps).epsilon(1e-4));
}

TEST_CASE("sign convention: negative inside, positive outside") {
  auto pts = sphere_points(150);
  RbfSurface s = RbfSurface::fit(pts, pts);
  CHECK(s.eval(Vec3(0, 0, 0)) < 0);
  CHECK(s.eval(Vec3(0, 0, 1.5)) > 0);
  CHECK(s.eval(Vec3(1.2, 0, 0)) > 0);
}

TEST_CASE("held-out sphere points sit close to the zero set") {
  auto pts = sphere_points(200);
  std::vector<Vec3> train, tnorm, held;
  for (size_t i = 0; i < pts.size(); ++i) {
    if (i % 10 == 3) held.push_back(pts[i]);
    else { train.push_back(pts[i]); tnorm.push_back(pts[i]); }
  }
  RbfSurface s = RbfSurface::fit(train, tnorm);
  for (const Vec3& p : held) CHECK(std::abs(s.eval(p)) < 1e-3);
}

TEST_CASE("a planar sample needs no kernel term") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<Vec3> pts, normals;
  for (int i = 0; i < 80; ++i) {
    pts.emplace_back(u(rng), u(rng), 0.0);
    normals.emplace_back(0, 0, 1);
  }
  RbfSurface s = RbfSurface::fit(pts, normals);
  CHECK(s.kernel_coeff_norm() <= 1e-6);
  // Held-out points on the plane evaluate to ~0 relative to the offset.
  for (int i = 0; i < 10; ++i) {
    Vec3 q(u(rng), u(rng), 0.0);
    CHECK(std::abs(s.eval(q)) <= 1e-6 * s.offset());
  }
}

TEST_CASE("gradient matches finite differences") {
  auto pts = sphere_points(100);
  RbfSurface s = RbfSurface::fit(pts, pts);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1.3, 1.3);
  double h = 1e-6 * s.bbox_diag();
  for (int k = 0; k < 12; ++k) {
    Vec3 x(u(rng), u(rng), u(rng));
    Vec3 g = s.grad(x);
    for (int c = 0; c < 3; ++c) {
      Vec3 e = Vec3::Zero();
      e[c] = h;
      double fd = (s.eval(x + e) - s.eval(x - e)) / (2 * h);
      CHECK(g[c] == doctest::Approx(fd).epsilon(1e-5));
    }
  }
}

TEST_CASE("projection lands on the surface and is idempotent") {
  auto pts = sphere_points(180);
  RbfSurface s = RbfSurface::fit(pts, pts);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int k = 0; k < 15; ++k) {
    Vec3 dir = Vec3(u(rng), u(rng), u(rng)).normalized();
    auto res = s.project(dir * 1.2);
    CHECK(res.converged);
    CHECK(res.point.norm() == doctest::Approx(1.0).epsilon(2e-3));
    // Projecting a point already on the zero set moves it at most tol.
    auto res2 = s.project(res.point);
    CHECK(res2.converged);
    CHECK((res2.point - res.point).norm() <= 1e-7 * s.bbox_diag());
  }
}

TEST_CASE("fit_boundary reconstructs a curved mesh boundary") {
  TetMesh mesh = ellipsoid(2, 1.0, 1.0, 1.0);
  RbfSurface s = RbfSurface::fit_boundary(mesh);
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    if (!mesh.is_boundary_vertex(v)) continue;
    CHECK(std::abs(s.eval(mesh.vertex(v))) < 1e-8 * s.bbox_diag());
  }
  auto res = s.project(Vec3(1.3, 0.1, -0.2));
  CHECK(res.converged);
  CHECK(res.point.norm() == doctest::Approx(1.0).epsilon(5e-2));
}
