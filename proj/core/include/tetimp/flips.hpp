#pragma once

// Topological flips and the recursive edge-removal search.
//
// flip23/flip32 are the two primitives. FlipSearch drives a depth-first
// removal of one interior edge: 2-3 flips shave apexes off the edge's link
// polygon one at a time (each recorded for exact reversal) until three tets
// remain and a 3-2 flip can finish the removal. At positive search levels,
// edges adjacent to the target edge may be removed first by child searches.
// Failed branches are reversed in place as the search backtracks, so a
// search that returns done == false leaves the mesh untouched; a successful
// removal keeps its full record trail and can still be reversed afterwards
// with flipnm_post(search, true).

#include <map>
#include <memory>
#include <set>
#include <vector>

#include "tetimp/quality.hpp"
#include "tetimp/tet_mesh.hpp"

namespace tetimp {

enum class FlipMode {
  MinMaxDihedral,  // raise the smallest dihedral; tie-break on the largest
  AspectRatio,     // lower the largest aspect ratio
};

struct FlipCriterion {
  FlipMode mode = FlipMode::MinMaxDihedral;
};

// Replaces the two tets sharing the interior face (t, lf) with three tets
// around the apex-apex edge. Throws NotFlippable when the face is on the
// boundary, the bipyramid is not convex, or the apex edge already exists.
std::array<int, 3> flip23(TetMesh& mesh, int t, int lf);

// Replaces the three tets around interior edge (a, b) with two tets over the
// link triangle. Throws NotFlippable when the ring size differs from three,
// the link face already exists, or either new tet would be inverted.
std::array<int, 2> flip32(TetMesh& mesh, int a, int b);

struct FlipnmResult {
  bool done;  // the edge was removed
  int m;      // ring size at exit (3 on success, the entry size on failure)
};

class FlipSearch {
 public:
  // Throws NotAnEdge / NotFlippable (boundary edge).
  FlipSearch(TetMesh& mesh, int a, int b,
             const FlipCriterion* criterion = nullptr);
  ~FlipSearch();
  FlipSearch(const FlipSearch&) = delete;
  FlipSearch& operator=(const FlipSearch&) = delete;

  int edge_a() const { return va_; }
  int edge_b() const { return vb_; }
  int initial_ring_size() const { return n0_; }
  int ring_size() const { return static_cast<int>(ring_.size()); }
  bool done() const { return done_; }
  // Forward flips performed, including ones reversed while backtracking.
  int flip_count() const { return flip_count_; }
  const std::vector<int>& ring() const { return ring_; }
  const std::vector<int>& apexes() const { return apex_; }

  // Net effect of the flips performed so far: ids of tets created and still
  // alive, and the cells of original tets destroyed and not restored. Both
  // drain back to empty when every flip has been reversed.
  const std::set<int>& created_ids() const { return created_; }
  const std::map<std::array<int, 4>, int>& destroyed_cells() const {
    return destroyed_;
  }

  // Test hook: reject every final removal step so the search is forced to
  // explore and fully backtrack.
  bool deny_removal = false;

 private:
  friend FlipnmResult flipnm(FlipSearch& search, int level);
  friend void flipnm_post(FlipSearch& search, bool undo);

  struct Rec {
    int pos, prev, cur, next;
    std::unique_ptr<FlipSearch> child;  // null for a plain 2-3 flip
  };

  FlipSearch(TetMesh& mesh, int a, int b, const FlipCriterion* criterion,
             std::vector<int> locked, std::array<int, 2> allowed,
             FlipSearch* root);
  void init_ring();

  bool search(int level);
  bool try_flip23_at(int i);
  void pop_flip23();
  bool try_child(int i, int x, int level);
  void pop_child();
  bool try_final_flip32();
  void undo_final();
  void undo_all();

  std::vector<int> do_replace(std::span<const int> old_ids,
                              std::span<const std::array<int, 4>> cells);
  bool pair_ok(const std::array<Vec3, 4>& c1,
               const std::array<Vec3, 4>& c2) const;
  bool region_ok(const std::array<std::array<int, 4>, 2>& fin) const;
  bool is_locked(int t) const;
  void shrink_arrays(int pos, int bridge);
  void restore_arrays(int pos, int id_prev, int id_next, int cur);
  std::vector<int> state_key() const;

  TetMesh& mesh_;
  int va_, vb_;
  const FlipCriterion* crit_;
  FlipSearch* root_;              // top-level search owning the net-effect sets
  std::vector<int> ring_, apex_;
  std::vector<int> locked_;       // ancestor ring tets, sorted
  std::array<int, 2> allowed_;    // parent tets the final flip may destroy
  int n0_ = 0;
  double ref_min_dih_ = 0, ref_max_dih_ = 0, ref_max_ar_ = 0;
  std::vector<Rec> recs_;
  bool done_ = false;
  std::array<int, 3> final_tri_ = {-1, -1, -1};
  int flip_count_ = 0;
  std::set<std::vector<int>> failed_states_;
  std::set<int> created_;
  std::map<std::array<int, 4>, int> destroyed_;
};

// Runs the removal search at the given level (0 disables child edges, 2 is
// the maximum). The mesh is modified only if the result reports done.
FlipnmResult flipnm(FlipSearch& search, int level);

// Releases the search; with undo == true a completed removal is reversed
// first, restoring the combinatorially identical pre-search mesh.
void flipnm_post(FlipSearch& search, bool undo);

struct LazyPassStats {
  int removals = 0;
  int sweeps = 0;
};

// One row per attempted edge removal, for offline inspection of a pass.
struct FlipTraceRow {
  int a = 0, b = 0;
  int level = 0;
  bool accepted = false;
  double objective_before = 0;  // ring min dihedral / max aspect ratio
  double objective_after = 0;   // same measure over the replacement tets
};

// Sweeps all interior edges worst-first, attempting a removal on each; every
// intermediate flip must improve the criterion against the edge's original
// ring, and the removal commits only if the replacement region beats the
// destroyed one outright, so accepted removals strictly improve the affected
// region. Sweeps repeat until one makes no change. When trace is non-null a
// row is appended for every attempt.
LazyPassStats lazy_pass(TetMesh& mesh, const FlipCriterion& crit, int level,
                        std::vector<FlipTraceRow>* trace = nullptr);

} // namespace tetimp
