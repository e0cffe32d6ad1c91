#include "tetimp/rbf_surface.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include <Eigen/LU>

namespace tetimp {

namespace {

double bbox_diag_of(const std::vector<Vec3>& pts) {
  Vec3 lo = Vec3::Constant(std::numeric_limits<double>::max());
  Vec3 hi = Vec3::Constant(std::numeric_limits<double>::lowest());
  for (const Vec3& p : pts) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  return (hi - lo).norm();
}

// Keeps at most `cap` points, one per cell of a uniform grid sized so the
// expected survivor count is near the cap.
void subsample(std::vector<Vec3>& pts, std::vector<Vec3>& nrm, int cap) {
  if (static_cast<int>(pts.size()) <= cap) return;
  Vec3 lo = Vec3::Constant(std::numeric_limits<double>::max());
  Vec3 hi = Vec3::Constant(std::numeric_limits<double>::lowest());
  for (const Vec3& p : pts) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  Vec3 ext = (hi - lo).cwiseMax(1e-12);
  int res = std::max(1, static_cast<int>(std::cbrt(static_cast<double>(cap))));
  while (true) {
    std::map<std::array<int, 3>, int> cells;
    for (size_t i = 0; i < pts.size(); ++i) {
      Vec3 u = (pts[i] - lo).cwiseQuotient(ext) * res;
      std::array<int, 3> key = {std::min(res - 1, static_cast<int>(u[0])),
                                std::min(res - 1, static_cast<int>(u[1])),
                                std::min(res - 1, static_cast<int>(u[2]))};
      cells.emplace(key, static_cast<int>(i));
    }
    if (static_cast<int>(cells.size()) <= cap || res > 1024) {
      std::vector<Vec3> p2, n2;
      p2.reserve(cells.size());
      n2.reserve(cells.size());
      for (const auto& [key, i] : cells) {
        p2.push_back(pts[i]);
        n2.push_back(nrm[i]);
      }
      pts.swap(p2);
      nrm.swap(n2);
      return;
    }
    res = std::max(1, res - 1 - res / 8);
  }
}

} // namespace

RbfSurface RbfSurface::fit(const std::vector<Vec3>& points,
                           const std::vector<Vec3>& normals,
                           const FitOptions& opts) {
  if (points.size() < 4) throw InvalidInput("too few surface samples");
  if (points.size() != normals.size())
    throw InvalidInput("points/normals size mismatch");

  std::vector<Vec3> pts = points, nrm = normals;
  for (Vec3& n : nrm) {
    double len = n.norm();
    if (len == 0) throw InvalidInput("zero normal in surface samples");
    n /= len;
  }
  subsample(pts, nrm, opts.max_centers);

  RbfSurface s;
  s.diag_ = bbox_diag_of(pts);
  if (s.diag_ <= 0) throw InvalidInput("degenerate sample cloud");
  s.eps_ = opts.eps_rel * s.diag_;

  const int n = static_cast<int>(pts.size());
  const int m = 2 * n;
  s.centers_.resize(m);
  for (int i = 0; i < n; ++i) {
    s.centers_[i] = pts[i];
    s.centers_[n + i] = pts[i] + s.eps_ * nrm[i];
  }

  // Saddle system: kernel block, polynomial tail, zero moment conditions.
  Eigen::MatrixXd sys = Eigen::MatrixXd::Zero(m + 4, m + 4);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m + 4);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      double r = (s.centers_[i] - s.centers_[j]).norm();
      sys(i, j) = r * r * r;
    }
    sys(i, m) = 1.0;
    sys(m, i) = 1.0;
    for (int d = 0; d < 3; ++d) {
      sys(i, m + 1 + d) = s.centers_[i][d];
      sys(m + 1 + d, i) = s.centers_[i][d];
    }
    rhs[i] = i < n ? 0.0 : s.eps_;
  }

  Eigen::VectorXd sol = sys.partialPivLu().solve(rhs);
  double scale = sys.cwiseAbs().maxCoeff() * sol.cwiseAbs().maxCoeff() +
                 rhs.cwiseAbs().maxCoeff();
  double resid = (sys * sol - rhs).cwiseAbs().maxCoeff();
  if (!(resid <= opts.residual_tol * scale)) {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(sys);
    if (lu.rank() < m + 4)
      throw SingularSystem("surface system is rank-deficient");
    sol = lu.solve(rhs);
    resid = (sys * sol - rhs).cwiseAbs().maxCoeff();
    if (!(resid <= opts.residual_tol * scale))
      throw SingularSystem("surface solve residual too large");
  }

  s.weights_.assign(sol.data(), sol.data() + m);
  s.poly_ = sol.segment<4>(m);
  return s;
}

std::vector<Vec3> estimate_normals(const TetMesh& mesh) {
  std::vector<Vec3> normals(mesh.vertex_count(), Vec3::Zero());
  std::map<std::array<int, 2>, int> edge_faces;
  for (auto [t, lf] : mesh.boundary_faces()) {
    const auto& c = mesh.tet(t);
    int u = c[kFaceCorners[lf][0]];
    int v = c[kFaceCorners[lf][1]];
    int w = c[kFaceCorners[lf][2]];
    // Face winding points outward already; weight by twice the area.
    Vec3 n = (mesh.vertex(v) - mesh.vertex(u))
                 .cross(mesh.vertex(w) - mesh.vertex(u));
    normals[u] += n;
    normals[v] += n;
    normals[w] += n;
    int e[3][2] = {{u, v}, {v, w}, {w, u}};
    for (auto& pair : e) {
      std::array<int, 2> key = {std::min(pair[0], pair[1]),
                                std::max(pair[0], pair[1])};
      edge_faces[key]++;
    }
  }
  if (edge_faces.empty()) throw OpenBoundary("mesh has no boundary faces");
  for (const auto& [e, cnt] : edge_faces)
    if (cnt != 2)
      throw OpenBoundary("boundary edge not shared by exactly two faces");
  for (Vec3& n : normals) {
    double len = n.norm();
    if (len > 0) n /= len;
  }
  return normals;
}

RbfSurface RbfSurface::fit_boundary(const TetMesh& mesh,
                                    const FitOptions& opts) {
  auto normals = estimate_normals(mesh);
  std::vector<Vec3> pts, nrm;
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    if (!mesh.vertex_referenced(v)) continue;
    if (normals[v].squaredNorm() == 0) continue;
    pts.push_back(mesh.vertex(v));
    nrm.push_back(normals[v]);
  }
  return fit(pts, nrm, opts);
}

double RbfSurface::eval(const Vec3& x) const {
  double s = poly_[0] + poly_.tail<3>().dot(x);
  for (size_t j = 0; j < centers_.size(); ++j) {
    double r = (x - centers_[j]).norm();
    s += weights_[j] * r * r * r;
  }
  return s;
}

Vec3 RbfSurface::grad(const Vec3& x) const {
  Vec3 g = poly_.tail<3>();
  for (size_t j = 0; j < centers_.size(); ++j) {
    Vec3 d = x - centers_[j];
    g += weights_[j] * 3.0 * d.norm() * d;
  }
  return g;
}

RbfSurface::ProjectionResult RbfSurface::project(const Vec3& x, double tol,
                                                 int max_iter) const {
  if (tol < 0) tol = 1e-8 * diag_;
  ProjectionResult res;
  res.point = x;
  for (res.iterations = 0; res.iterations < max_iter; ++res.iterations) {
    double s = eval(res.point);
    if (std::abs(s) <= tol) {
      res.converged = true;
      return res;
    }
    Vec3 g = grad(res.point);
    double g2 = g.squaredNorm();
    if (g2 < 1e-20)
      throw VanishingGradient("surface gradient vanishes at the iterate");
    res.point -= s / g2 * g;
  }
  res.converged = std::abs(eval(res.point)) <= tol;
  return res;
}

double RbfSurface::kernel_coeff_norm() const {
  double m = 0;
  for (double w : weights_) m = std::max(m, std::abs(w));
  double scale = std::max(1.0, poly_.cwiseAbs().maxCoeff());
  return m * diag_ * diag_ * diag_ / scale;
}

} // namespace tetimp
