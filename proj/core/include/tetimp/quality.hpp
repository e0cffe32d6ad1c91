#pragma once

#include <array>
#include <vector>

#include "tetimp/element_frame.hpp"
#include "tetimp/tet_mesh.hpp"

namespace tetimp {

// Energy density weights: theta in (0, 1/2] balances the shape term against
// the volume term, p > 1 is the exponent; dimension is fixed at 3.
struct EnergyParams {
  double theta = 1.0 / 3.0;
  double p = 1.5;
  static constexpr int dim = 3;
  void validate() const;
};

// Dihedral angle of a regular tetrahedron, acos(1/3), in degrees.
double regular_dihedral_deg();

// sqrt(2/3) * (longest edge) / (shortest altitude); 1 for a regular tet.
double aspect_ratio(const std::array<Vec3, 4>& pts, double volume_floor = 0);

// The six interior dihedral angles in degrees, in edge order
// (01,02,03,12,13,23).
std::array<double, 6> dihedral_angles(const std::array<Vec3, 4>& pts);

double min_dihedral(const std::array<Vec3, 4>& pts);
double max_dihedral(const std::array<Vec3, 4>& pts);

// Smallest dihedral angle over all tets of the mesh (degrees).
double mesh_min_angle(const TetMesh& mesh);

// Energy density G evaluated from an element frame.
double energy_density(const ElementFrame& f, const EnergyParams& params);

// Meshing energy: sum over elements of |K| * G.
double energy(const TetMesh& mesh, const EnergyParams& params);

inline constexpr int kHistogramBins = 36;  // 5-degree bins over [0, 180)

struct QualityStats {
  int n_tets = 0;
  int n_vertices = 0;
  double min_dihedral_deg = 0, max_dihedral_deg = 0;
  double mean_dihedral_deg = 0, stddev_dihedral_deg = 0;
  double min_aspect = 0, max_aspect = 0, mean_aspect = 0;
  double energy = 0;
  std::array<long, kHistogramBins> histogram{};  // counts sum to 6 * n_tets
};

QualityStats mesh_stats(const TetMesh& mesh, const EnergyParams& params);

} // namespace tetimp
