#pragma once

// Index-based tetrahedral mesh with face-neighbor connectivity.
//
// Vertices and tets live in slot arrays; topological operations (flips,
// splits, contractions) retire tet slots and reuse them via a free list, so
// tet ids are stable until compact() is called. Each tet stores its four
// vertex ids in positive orientation (det[x1-x0, x2-x0, x3-x0] > 0) plus the
// id of the neighbor tet across each of its four faces (-1 on the boundary).
// The face opposite local vertex i is kFaceCorners[i], wound so its normal
// points out of the tet.
//
// All mutations go through replace_tets(), which swaps a connected group of
// tets for a new set of cells filling the same region and restitches
// neighbor links across the region boundary. Reads are safe from multiple
// threads; mutation requires exclusive access.

#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "tetimp/errors.hpp"
#include "tetimp/types.hpp"

namespace tetimp {

inline constexpr std::array<std::array<int, 3>, 4> kFaceCorners = {{
    {{1, 2, 3}}, {{0, 3, 2}}, {{0, 1, 3}}, {{0, 2, 1}}}};

// Relative floor under which a cell volume counts as degenerate.
inline constexpr double kVolumeFloorScale = 1e-14;

struct EdgeStar {
  // Tets around edge (a,b). Interior edge: a closed cycle, tets[i] has
  // apexes (apex[i], apex[i+1 mod n]). Boundary edge: an open fan with
  // apex.size() == tets.size() + 1.
  std::vector<int> tets;
  std::vector<int> apex;
  bool boundary = false;
  int size() const { return static_cast<int>(tets.size()); }
};

class TetMesh {
 public:
  TetMesh() = default;

  // Builds connectivity from raw cells. Cells with negative volume are
  // reoriented; cells with |volume| under the degeneracy floor, bad indices,
  // duplicate cells, or faces shared by more than two tets are rejected.
  static TetMesh build(std::vector<Vec3> points,
                       const std::vector<std::array<int, 4>>& cells);

  int vertex_count() const { return static_cast<int>(points_.size()); }
  int tet_count() const { return live_count_; }
  int tet_slot_count() const { return static_cast<int>(cells_.size()); }

  const Vec3& vertex(int v) const { return points_[v]; }
  void set_vertex(int v, const Vec3& p) { points_[v] = p; geom_version_++; }
  int add_vertex(const Vec3& p);

  bool alive(int t) const { return cells_[t][0] >= 0; }
  const std::array<int, 4>& tet(int t) const { return cells_[t]; }
  const std::array<int, 4>& neighbors(int t) const { return nbrs_[t]; }
  std::span<const int> tets_of_vertex(int v) const {
    return vertex_tets_[v];
  }
  std::vector<int> live_tets() const;

  std::array<Vec3, 4> tet_points(int t) const;
  double tet_volume(int t) const;
  double total_volume() const;

  // Bounding box diagonal of the live vertices; cached until geometry or
  // connectivity changes.
  double bbox_diag() const;
  double volume_floor() const {
    double d = bbox_diag();
    return kVolumeFloorScale * d * d * d;
  }

  bool vertex_referenced(int v) const { return !vertex_tets_[v].empty(); }
  bool is_boundary_vertex(int v) const;
  bool is_edge(int a, int b) const;
  // Ordered star of tets around edge (a,b). Throws NotAnEdge.
  EdgeStar edge_star(int a, int b) const;
  // Tets containing all three of (u,v,w): two for an interior face, one for
  // a boundary face, none otherwise.
  std::vector<int> tets_with_face(int u, int v, int w) const;
  // All (tet, local face) pairs with no neighbor.
  std::vector<std::pair<int, int>> boundary_faces() const;

  // Replaces the tets old_ids with new_cells (same covered region). New
  // cells must be positively oriented and their outer faces must tile the
  // region boundary exactly; neighbor links across the boundary are
  // restitched. With reshape_boundary the part of the region boundary lying
  // on the mesh boundary may change shape: unmatched new faces become
  // boundary faces and old boundary faces may vanish, while faces toward
  // live neighbors must still match exactly. Returns the ids of the new
  // tets.
  std::vector<int> replace_tets(std::span<const int> old_ids,
                                std::span<const std::array<int, 4>> new_cells,
                                bool reshape_boundary = false);

  // Drops dead tet slots and unreferenced vertices, remapping ids.
  void compact();

  // Full invariant check (orientation, mutual neighbor links, face sharing,
  // vertex-incidence consistency). Throws on violation.
  void validate() const;

  // Live cells as sorted vertex tuples in lexicographic order: equal results
  // mean combinatorially identical meshes.
  std::vector<std::array<int, 4>> canonical_cells() const;
  std::uint64_t canonical_hash() const;

  std::uint64_t geometry_version() const { return geom_version_; }

 private:
  int claim_slot(const std::array<int, 4>& cell);
  void release_slot(int t);
  static double cell_volume(const Vec3& a, const Vec3& b, const Vec3& c,
                            const Vec3& d);

  std::vector<Vec3> points_;
  std::vector<std::array<int, 4>> cells_;  // cells_[t][0] < 0 marks a dead slot
  std::vector<std::array<int, 4>> nbrs_;
  std::vector<std::vector<int>> vertex_tets_;
  std::vector<int> free_slots_;
  int live_count_ = 0;
  std::uint64_t geom_version_ = 0;
  mutable double cached_diag_ = -1.0;
  mutable std::uint64_t cached_diag_version_ = ~0ull;
};

} // namespace tetimp
