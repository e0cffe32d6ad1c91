#pragma once

#include <vector>

#include "tetimp/boundary.hpp"
#include "tetimp/quality.hpp"
#include "tetimp/tet_mesh.hpp"

namespace tetimp {

// Per-element nodal velocities of the energy gradient flow:
// |K| * v[j] == -d(|K| G)/dx_j, so v[0] + v[1] + v[2] + v[3] == 0.
std::array<Vec3, 4> element_velocities(const ElementFrame& f,
                                       const EnergyParams& params);

// Assembled nodal velocities dx/dt = -grad I_h, before any boundary
// adjustment. Element contributions are computed independently per element
// and scattered in element order, so the result is deterministic.
std::vector<Vec3> assemble_velocities(const TetMesh& mesh,
                                      const EnergyParams& params);

// Constrains a nodal velocity to the feature the vertex rides on: facets
// lose their normal component, segments keep only the component along the
// segment, corners are pinned, curved-surface vertices lose the component
// along the surface gradient.
Vec3 adjust_boundary_velocity(const Vec3& v, VertexClass cls, const Vec3& dir,
                              const RbfSurface* surface, const Vec3& x);

struct IntegratorConfig {
  double t_end = 10.0;
  double atol = 1e-4;   // scaled by the bbox diagonal internally
  double rtol = 1e-4;
  double eps_abs = -1;  // energy stagnation; <0 means 1e-8 * initial energy
  double eps_rel = 1e-6;
  int max_steps = 5000;
  double step_floor = 1e-12;
};

enum class StopReason { TimeHorizon, EnergyStagnation, MaxSteps };

struct StepRecord {
  double t;
  double energy;
  double h;  // step size that produced this state (0 for the initial entry)
};

struct StepReport {
  std::vector<StepRecord> trace;  // trace[0] is the initial state
  int accepted = 0;
  int rejected = 0;
  double max_displacement = 0;  // against the positions at entry
  StopReason reason = StopReason::TimeHorizon;
};

// Integrates the gradient flow with an embedded Dormand-Prince 5(4) pair.
// Steps that invert an element or raise the energy are rejected and halved;
// the energy trace over accepted steps is non-increasing. CurvedSurface
// vertices are re-projected onto model.surface after each accepted step.
StepReport integrate(TetMesh& mesh, const GeometryModel& model,
                     const EnergyParams& params, const IntegratorConfig& cfg);

} // namespace tetimp
