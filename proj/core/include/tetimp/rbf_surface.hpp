#pragma once

#include <vector>

#include "tetimp/tet_mesh.hpp"
#include "tetimp/types.hpp"

namespace tetimp {

// Implicit surface s(x) = 0 interpolated with the cubic kernel |r|^3 plus a
// linear polynomial. Interpolation points carry value 0; one extra center
// per point is placed at x + eps*n (outward) with value eps, which fixes the
// sign convention: s < 0 inside, s > 0 outside.
class RbfSurface {
 public:
  struct FitOptions {
    double eps_rel = 0.01;       // offset as a fraction of the bbox diagonal
    int max_centers = 5000;      // on-surface points kept (spatial subsample)
    double residual_tol = 1e-10; // relative residual accepted from the solve
  };

  struct ProjectionResult {
    Vec3 point;
    bool converged = false;
    int iterations = 0;
  };

  static RbfSurface fit(const std::vector<Vec3>& points,
                        const std::vector<Vec3>& normals,
                        const FitOptions& opts);
  static RbfSurface fit(const std::vector<Vec3>& points,
                        const std::vector<Vec3>& normals) {
    return fit(points, normals, FitOptions());
  }

  // Fits to the boundary vertices of a mesh with area-weighted vertex
  // normals (estimate_normals).
  static RbfSurface fit_boundary(const TetMesh& mesh, const FitOptions& opts);
  static RbfSurface fit_boundary(const TetMesh& mesh) {
    return fit_boundary(mesh, FitOptions());
  }

  double eval(const Vec3& x) const;
  Vec3 grad(const Vec3& x) const;

  // First-order iteration x <- x - s(x) grad/|grad|^2 until |s| falls under
  // tol (default 1e-8 * bbox diagonal) or 50 iterations.
  ProjectionResult project(const Vec3& x, double tol = -1,
                           int max_iter = 50) const;

  double bbox_diag() const { return diag_; }
  double offset() const { return eps_; }
  int center_count() const { return static_cast<int>(centers_.size()); }
  // Largest coefficient magnitude of the kernel part, relative to the data
  // scale; vanishes when the samples lie on a plane.
  double kernel_coeff_norm() const;

 private:
  std::vector<Vec3> centers_;
  std::vector<double> weights_;   // kernel coefficients
  Eigen::Vector4d poly_;          // constant + linear coefficients
  double diag_ = 0;
  double eps_ = 0;
};

// Area-weighted outward vertex normals for the boundary vertices of a mesh
// (zero for interior vertices). Throws OpenBoundary if any boundary edge is
// not shared by exactly two boundary faces.
std::vector<Vec3> estimate_normals(const TetMesh& mesh);

} // namespace tetimp
