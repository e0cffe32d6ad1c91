#pragma once

// The full improvement scheme: alternating rounds of gradient-flow
// smoothing, lazy flip sweeps, edge contraction, edge splitting, and
// bad-tet splitting, driven until a target minimum dihedral angle is
// reached, nothing changes any more, or the iteration cap is hit.

#include <vector>

#include "tetimp/boundary.hpp"
#include "tetimp/flips.hpp"
#include "tetimp/quality.hpp"
#include "tetimp/smoothing.hpp"

namespace tetimp {

struct ImproveOptions {
  double theta_lim = 30.0;  // target smallest dihedral angle, degrees
  EnergyParams energy;
  IntegratorConfig integrator;
  int flip_level = 1;
  BoundaryMode mode = BoundaryMode::Plc;
  double rbf_eps_rel = 0.01;  // offset scale for the surface fit, Curved mode
  int max_outer = 10;
  int max_inner = 50;          // cap on rounds inside each phase
  double move_tol_rel = 1e-9;  // "nothing moved" threshold * bbox diagonal
};

enum class ImproveTermination { TargetReached, Fixpoint, IterationCap };

// One lazy flip sweep set, with the mesh minimum dihedral before and after.
struct LazyRecord {
  int outer;
  FlipMode criterion;
  double q_before, q_after;
  int removals;
};

struct PhaseRecord {
  int outer;
  const char* phase;  // "smooth", "contract", "split", "split_bad"
  int rounds;
  int operations;  // flips for "smooth", contractions / splits otherwise
};

struct ImproveReport {
  QualityStats initial, final_stats;
  std::vector<LazyRecord> lazy;
  std::vector<PhaseRecord> phases;
  int outer_iterations = 0;
  ImproveTermination termination = ImproveTermination::Fixpoint;
};

// Improves the mesh in place; the mesh is compacted before returning.
ImproveReport improve(TetMesh& mesh, const ImproveOptions& opts = {});

const char* to_string(ImproveTermination t);

} // namespace tetimp
