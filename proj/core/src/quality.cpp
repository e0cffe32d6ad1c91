#include "tetimp/quality.hpp"

#include <algorithm>
#include <cmath>

namespace tetimp {

void EnergyParams::validate() const {
  if (!(theta > 0.0) || !(theta <= 0.5))
    throw InvalidInput("theta must lie in (0, 1/2]");
  if (!(p > 1.0)) throw InvalidInput("p must be greater than 1");
}

double regular_dihedral_deg() { return std::acos(1.0 / 3.0) * 180.0 / M_PI; }

double aspect_ratio(const std::array<Vec3, 4>& pts, double volume_floor) {
  double vol = (pts[1] - pts[0]).cross(pts[2] - pts[0]).dot(pts[3] - pts[0]) / 6.0;
  double longest = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      longest = std::max(longest, (pts[i] - pts[j]).norm());
  double area_max = 0;
  for (int lf = 0; lf < 4; ++lf) {
    const Vec3& a = pts[kFaceCorners[lf][0]];
    const Vec3& b = pts[kFaceCorners[lf][1]];
    const Vec3& c = pts[kFaceCorners[lf][2]];
    area_max = std::max(area_max, 0.5 * (b - a).cross(c - a).norm());
  }
  if (vol <= volume_floor || area_max <= 0)
    throw DegenerateCell("aspect ratio of a degenerate cell");
  double altitude = 3.0 * vol / area_max;
  return std::sqrt(2.0 / 3.0) * longest / altitude;
}

std::array<double, 6> dihedral_angles(const std::array<Vec3, 4>& pts) {
  static constexpr int edge[6][2] = {{0, 1}, {0, 2}, {0, 3},
                                     {1, 2}, {1, 3}, {2, 3}};
  static constexpr int rest[6][2] = {{2, 3}, {1, 3}, {1, 2},
                                     {0, 3}, {0, 2}, {0, 1}};
  std::array<double, 6> out;
  for (int e = 0; e < 6; ++e) {
    Vec3 u = pts[edge[e][1]] - pts[edge[e][0]];
    Vec3 n1 = u.cross(pts[rest[e][0]] - pts[edge[e][0]]);
    Vec3 n2 = u.cross(pts[rest[e][1]] - pts[edge[e][0]]);
    // Angle between the half-planes; equals the interior dihedral.
    out[e] = std::atan2(n1.cross(n2).norm(), n1.dot(n2)) * 180.0 / M_PI;
  }
  return out;
}

double min_dihedral(const std::array<Vec3, 4>& pts) {
  auto a = dihedral_angles(pts);
  return *std::min_element(a.begin(), a.end());
}

double max_dihedral(const std::array<Vec3, 4>& pts) {
  auto a = dihedral_angles(pts);
  return *std::max_element(a.begin(), a.end());
}

double mesh_min_angle(const TetMesh& mesh) {
  double q = 180.0;
  for (int t = 0; t < mesh.tet_slot_count(); ++t) {
    if (!mesh.alive(t)) continue;
    q = std::min(q, min_dihedral(mesh.tet_points(t)));
  }
  return q;
}

double energy_density(const ElementFrame& f, const EnergyParams& params) {
  const double d = EnergyParams::dim;
  const double dp2 = d * params.p / 2.0;
  double trace = (f.jac * f.jac.transpose()).trace();
  return params.theta * std::pow(trace, dp2) +
         (1.0 - 2.0 * params.theta) * std::pow(d, dp2) *
             std::pow(f.det_jac, params.p);
}

double energy(const TetMesh& mesh, const EnergyParams& params) {
  if (mesh.tet_count() == 0) throw EmptyMesh("energy of an empty mesh");
  Mat3 ref = reference_edges(mesh.tet_count());
  double floor = mesh.volume_floor();
  double sum = 0;
  for (int t = 0; t < mesh.tet_slot_count(); ++t) {
    if (!mesh.alive(t)) continue;
    ElementFrame f = element_frame(mesh.tet_points(t), ref, floor);
    sum += f.volume * energy_density(f, params);
  }
  return sum;
}

QualityStats mesh_stats(const TetMesh& mesh, const EnergyParams& params) {
  QualityStats s;
  s.n_tets = mesh.tet_count();
  if (s.n_tets == 0) throw EmptyMesh("stats of an empty mesh");
  for (int v = 0; v < mesh.vertex_count(); ++v)
    if (mesh.vertex_referenced(v)) s.n_vertices++;

  double floor = mesh.volume_floor();
  s.min_dihedral_deg = 180.0;
  s.max_dihedral_deg = 0.0;
  s.min_aspect = std::numeric_limits<double>::max();
  double sum = 0, sum2 = 0, ar_sum = 0;
  long count = 0;
  for (int t = 0; t < mesh.tet_slot_count(); ++t) {
    if (!mesh.alive(t)) continue;
    auto pts = mesh.tet_points(t);
    for (double a : dihedral_angles(pts)) {
      s.min_dihedral_deg = std::min(s.min_dihedral_deg, a);
      s.max_dihedral_deg = std::max(s.max_dihedral_deg, a);
      sum += a;
      sum2 += a * a;
      count++;
      int bin = std::clamp(static_cast<int>(a / 5.0), 0, kHistogramBins - 1);
      s.histogram[bin]++;
    }
    double ar = aspect_ratio(pts, floor);
    s.min_aspect = std::min(s.min_aspect, ar);
    s.max_aspect = std::max(s.max_aspect, ar);
    ar_sum += ar;
  }
  s.mean_dihedral_deg = sum / count;
  double var = sum2 / count - s.mean_dihedral_deg * s.mean_dihedral_deg;
  s.stddev_dihedral_deg = std::sqrt(std::max(0.0, var));
  s.mean_aspect = ar_sum / s.n_tets;
  s.energy = energy(mesh, params);
  return s;
}

} // namespace tetimp
