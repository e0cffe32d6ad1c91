#include "tetimp/improve.hpp"

#include "tetimp/errors.hpp"
#include "tetimp/local_ops.hpp"
#include "tetimp/rbf_surface.hpp"

namespace tetimp {

namespace {

int boundary_vertex_count(const TetMesh& mesh) {
  int n = 0;
  for (int v = 0; v < mesh.vertex_count(); ++v)
    if (mesh.vertex_referenced(v) && mesh.is_boundary_vertex(v)) ++n;
  return n;
}

} // namespace

const char* to_string(ImproveTermination t) {
  switch (t) {
    case ImproveTermination::TargetReached: return "target_reached";
    case ImproveTermination::Fixpoint: return "fixpoint";
    case ImproveTermination::IterationCap: return "iteration_cap";
  }
  return "unknown";
}

ImproveReport improve(TetMesh& mesh, const ImproveOptions& opts) {
  opts.energy.validate();
  if (opts.max_outer < 1 || opts.max_inner < 1)
    throw InvalidInput("improve: iteration caps must be positive");

  ImproveReport report;
  report.initial = mesh_stats(mesh, opts.energy);

  GeometryModel model = classify_boundary(mesh, opts.mode);
  int fit_count = 0;
  auto refit_surface = [&] {
    int count = boundary_vertex_count(mesh);
    if (count == fit_count) return;
    RbfSurface::FitOptions fo;
    fo.eps_rel = opts.rbf_eps_rel;
    model.surface = std::make_shared<RbfSurface>(
        RbfSurface::fit_boundary(mesh, fo));
    fit_count = count;
  };
  if (opts.mode == BoundaryMode::Curved) refit_surface();

  FlipMode crit_mode = FlipMode::MinMaxDihedral;
  auto q_now = [&] { return mesh_min_angle(mesh); };
  auto run_lazy = [&](int outer) {
    FlipCriterion crit{crit_mode};
    double qb = q_now();
    LazyPassStats st = lazy_pass(mesh, crit, opts.flip_level);
    report.lazy.push_back({outer, crit_mode, qb, q_now(), st.removals});
    return st.removals;
  };

  ImproveTermination termination = ImproveTermination::IterationCap;
  int outer = 0;
  for (; outer < opts.max_outer; ++outer) {
    bool any_op = false;

    // Smooth, project, flip.
    {
      int rounds = 0, flips = 0;
      while (rounds < opts.max_inner && q_now() < opts.theta_lim) {
        ++rounds;
        bool moved = false;
        try {
          StepReport rep = integrate(mesh, model, opts.energy, opts.integrator);
          moved = rep.max_displacement > opts.move_tol_rel * mesh.bbox_diag();
        } catch (const StepFloorReached&) {
          // Smoothing is stuck; leave the mesh to the discrete operations.
        }
        int removals = run_lazy(outer);
        flips += removals;
        if (moved || removals > 0) any_op = true;
        if (!moved || removals == 0) break;
      }
      report.phases.push_back({outer, "smooth", rounds, flips});
    }

    // Contract short edges, flip.
    {
      int rounds = 0, ops = 0;
      while (rounds < opts.max_inner && q_now() < opts.theta_lim) {
        ++rounds;
        int contracted = contract_short_edges(mesh, model);
        if (contracted == 0) break;
        ops += contracted;
        any_op = true;
        run_lazy(outer);
      }
      if (opts.mode == BoundaryMode::Curved && ops > 0) refit_surface();
      report.phases.push_back({outer, "contract", rounds, ops});
    }

    // Split long edges, project, flip.
    {
      int rounds = 0, ops = 0;
      while (rounds < opts.max_inner && q_now() <= opts.theta_lim) {
        ++rounds;
        int split = split_long_edges(mesh, model, opts.mode);
        if (split == 0) break;
        ops += split;
        any_op = true;
        if (opts.mode == BoundaryMode::Curved) refit_surface();
        run_lazy(outer);
      }
      report.phases.push_back({outer, "split", rounds, ops});
    }

    // Split tets under the angle target once, as seeds for the next
    // smoothing round. Looping here would diverge: the barycenter split of
    // a sliver produces four new slivers.
    {
      int rounds = 0, ops = 0;
      if (q_now() <= opts.theta_lim) {
        rounds = 1;
        ops = split_bad_tets(mesh, model, opts.mode, opts.theta_lim);
        if (ops > 0) {
          any_op = true;
          run_lazy(outer);
        }
      }
      report.phases.push_back({outer, "split_bad", rounds, ops});
    }

    crit_mode = crit_mode == FlipMode::MinMaxDihedral
                    ? FlipMode::AspectRatio
                    : FlipMode::MinMaxDihedral;
    if (q_now() > opts.theta_lim) {
      termination = ImproveTermination::TargetReached;
      ++outer;
      break;
    }
    if (!any_op) {
      termination = ImproveTermination::Fixpoint;
      ++outer;
      break;
    }
  }

  mesh.compact();
  report.outer_iterations = outer;
  report.termination = termination;
  report.final_stats = mesh_stats(mesh, opts.energy);
  return report;
}

} // namespace tetimp
