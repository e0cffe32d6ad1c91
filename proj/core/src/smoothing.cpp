#include "tetimp/smoothing.hpp"

#include <cmath>

#include "tetimp/rbf_surface.hpp"

namespace tetimp {

std::array<Vec3, 4> element_velocities(const ElementFrame& f,
                                       const EnergyParams& params) {
  const double d = EnergyParams::dim;
  const double dp2 = d * params.p / 2.0;
  const Mat3& jac = f.jac;
  double trace = (jac * jac.transpose()).trace();
  double g = params.theta * std::pow(trace, dp2) +
             (1.0 - 2.0 * params.theta) * std::pow(d, dp2) *
                 std::pow(f.det_jac, params.p);
  Mat3 dg_djac =
      d * params.p * params.theta * std::pow(trace, dp2 - 1.0) * jac.transpose();
  double dg_ddet = params.p * (1.0 - 2.0 * params.theta) * std::pow(d, dp2) *
                   std::pow(f.det_jac, params.p - 1.0);

  Mat3 inv = f.edges.inverse();
  // Rows of vmat are the velocities of vertices 1..3; vertex 0 balances them.
  Mat3 vmat = -g * inv + inv * dg_djac * f.ref_edges * inv +
              dg_ddet * f.det_jac * inv;
  std::array<Vec3, 4> v;
  v[1] = vmat.row(0);
  v[2] = vmat.row(1);
  v[3] = vmat.row(2);
  v[0] = -(v[1] + v[2] + v[3]);
  return v;
}

namespace {

// Element loop over explicit positions (the mesh supplies connectivity
// only). Returns false if any element is at or below the volume floor.
bool velocities_at(const TetMesh& mesh, const std::vector<int>& tets,
                   const std::vector<Vec3>& pos, const Mat3& ref, double floor,
                   const EnergyParams& params, std::vector<Vec3>& vel,
                   double* energy_out) {
  std::fill(vel.begin(), vel.end(), Vec3::Zero());
  double total = 0;
  for (int t : tets) {
    const auto& c = mesh.tet(t);
    std::array<Vec3, 4> pts = {pos[c[0]], pos[c[1]], pos[c[2]], pos[c[3]]};
    ElementFrame f;
    f.edges.col(0) = pts[1] - pts[0];
    f.edges.col(1) = pts[2] - pts[0];
    f.edges.col(2) = pts[3] - pts[0];
    double det = f.edges.determinant();
    f.volume = det / 6.0;
    if (!(f.volume > floor)) return false;
    f.ref_edges = ref;
    f.jac = ref * f.edges.inverse();
    f.det_jac = ref.determinant() / det;
    auto v = element_velocities(f, params);
    for (int j = 0; j < 4; ++j) vel[c[j]] += f.volume * v[j];
    if (energy_out) total += f.volume * energy_density(f, params);
  }
  if (energy_out) *energy_out = total;
  return true;
}

bool energy_at(const TetMesh& mesh, const std::vector<int>& tets,
               const std::vector<Vec3>& pos, const Mat3& ref, double floor,
               const EnergyParams& params, double* energy_out) {
  double total = 0;
  for (int t : tets) {
    const auto& c = mesh.tet(t);
    Mat3 e;
    e.col(0) = pos[c[1]] - pos[c[0]];
    e.col(1) = pos[c[2]] - pos[c[0]];
    e.col(2) = pos[c[3]] - pos[c[0]];
    double det = e.determinant();
    double vol = det / 6.0;
    if (!(vol > floor)) return false;
    ElementFrame f;
    f.edges = e;
    f.ref_edges = ref;
    f.jac = ref * e.inverse();
    f.det_jac = ref.determinant() / det;
    f.volume = vol;
    total += vol * energy_density(f, params);
  }
  *energy_out = total;
  return true;
}

} // namespace

std::vector<Vec3> assemble_velocities(const TetMesh& mesh,
                                      const EnergyParams& params) {
  params.validate();
  if (mesh.tet_count() == 0) throw EmptyMesh("no elements to assemble");
  std::vector<Vec3> pos(mesh.vertex_count());
  for (int v = 0; v < mesh.vertex_count(); ++v) pos[v] = mesh.vertex(v);
  std::vector<Vec3> vel(mesh.vertex_count(), Vec3::Zero());
  auto tets = mesh.live_tets();
  Mat3 ref = reference_edges(mesh.tet_count());
  if (!velocities_at(mesh, tets, pos, ref, mesh.volume_floor(), params, vel,
                     nullptr))
    throw DegenerateCell("assemble_velocities on a degenerate mesh");
  return vel;
}

Vec3 adjust_boundary_velocity(const Vec3& v, VertexClass cls, const Vec3& dir,
                              const RbfSurface* surface, const Vec3& x) {
  switch (cls) {
    case VertexClass::Free:
      return v;
    case VertexClass::Facet:
      return v - v.dot(dir) * dir;
    case VertexClass::Segment:
      return v.dot(dir) * dir;
    case VertexClass::Corner:
      return Vec3::Zero();
    case VertexClass::CurvedSurface: {
      if (!surface) throw MissingSurface("curved vertex without a surface");
      Vec3 g = surface->grad(x);
      double len = g.norm();
      if (len < 1e-10) return v;  // no reliable tangent plane here
      g /= len;
      return v - v.dot(g) * g;
    }
  }
  return v;
}

namespace {

void adjust_all(const GeometryModel& model, const std::vector<Vec3>& pos,
                std::vector<Vec3>& vel) {
  const RbfSurface* surf = model.surface.get();
  for (size_t v = 0; v < vel.size(); ++v) {
    VertexClass cls = model.vclass(static_cast<int>(v));
    if (cls == VertexClass::Free) continue;
    vel[v] = adjust_boundary_velocity(vel[v], cls, model.direction[v], surf,
                                      pos[v]);
  }
}

} // namespace

StepReport integrate(TetMesh& mesh, const GeometryModel& model,
                     const EnergyParams& params, const IntegratorConfig& cfg) {
  params.validate();
  if (mesh.tet_count() == 0) throw EmptyMesh("integrate on an empty mesh");

  // Dormand-Prince 5(4) tableau.
  static const double a[7][6] = {
      {},
      {1.0 / 5},
      {3.0 / 40, 9.0 / 40},
      {44.0 / 45, -56.0 / 15, 32.0 / 9},
      {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
      {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176,
       -5103.0 / 18656},
      {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
  static const double b5[7] = {35.0 / 384,    0.0,        500.0 / 1113,
                               125.0 / 192,   -2187.0 / 6784, 11.0 / 84, 0.0};
  static const double b4[7] = {5179.0 / 57600, 0.0,       7571.0 / 16695,
                               393.0 / 640,   -92097.0 / 339200,
                               187.0 / 2100,  1.0 / 40};

  const int nv = mesh.vertex_count();
  const auto tets = mesh.live_tets();
  const Mat3 ref = reference_edges(mesh.tet_count());
  const double diag = mesh.bbox_diag();
  const double floor = mesh.volume_floor();
  const double atol = cfg.atol * diag;

  std::vector<Vec3> pos(nv), entry(nv);
  for (int v = 0; v < nv; ++v) pos[v] = entry[v] = mesh.vertex(v);

  std::vector<std::vector<Vec3>> k(7, std::vector<Vec3>(nv, Vec3::Zero()));
  std::vector<Vec3> stage(nv), cand(nv), low(nv);

  StepReport report;
  double i_prev = 0;
  if (!velocities_at(mesh, tets, pos, ref, floor, params, k[0], &i_prev))
    throw DegenerateCell("integrate entered with a degenerate mesh");
  adjust_all(model, pos, k[0]);
  report.trace.push_back({0.0, i_prev, 0.0});
  const double eps_abs = cfg.eps_abs < 0 ? 1e-8 * i_prev : cfg.eps_abs;

  double vmax = 0;
  for (const Vec3& v : k[0]) vmax = std::max(vmax, v.norm());
  double h = std::min(cfg.t_end, 0.01 * diag / (vmax + 1e-300));
  if (!(h > 0) || h > cfg.t_end) h = cfg.t_end;

  double t = 0;
  bool stagnated = false;
  auto halve = [&](double factor) {
    h *= factor;
    report.rejected++;
    if (h < cfg.step_floor)
      throw StepFloorReached("step size fell below the floor");
  };

  while (t < cfg.t_end && report.accepted < cfg.max_steps) {
    h = std::min(h, cfg.t_end - t);

    bool stage_ok = true;
    for (int s = 1; s < 7 && stage_ok; ++s) {
      for (int v = 0; v < nv; ++v) {
        Vec3 acc = pos[v];
        for (int j = 0; j < s; ++j) acc += h * a[s][j] * k[j][v];
        stage[v] = acc;
      }
      if (!velocities_at(mesh, tets, stage, ref, floor, params, k[s], nullptr)) {
        stage_ok = false;
        break;
      }
      adjust_all(model, stage, k[s]);
    }
    if (!stage_ok) {
      halve(0.5);
      continue;
    }

    // Stage 6's position is already the fifth-order candidate (FSAL).
    for (int v = 0; v < nv; ++v) {
      Vec3 acc5 = pos[v], acc4 = pos[v];
      for (int j = 0; j < 7; ++j) {
        acc5 += h * b5[j] * k[j][v];
        acc4 += h * b4[j] * k[j][v];
      }
      cand[v] = acc5;
      low[v] = acc4;
    }

    double err2 = 0;
    for (int v = 0; v < nv; ++v) {
      for (int d0 = 0; d0 < 3; ++d0) {
        double sc = atol + cfg.rtol * std::max(std::abs(pos[v][d0]),
                                               std::abs(cand[v][d0]));
        double e = (cand[v][d0] - low[v][d0]) / sc;
        err2 += e * e;
      }
    }
    double err = std::sqrt(err2 / (3.0 * nv));
    if (!(err <= 1.0)) {
      double factor = std::isfinite(err)
                          ? std::max(0.2, 0.9 * std::pow(err, -0.2))
                          : 0.5;
      halve(factor);
      continue;
    }

    // Re-projection of curved-surface vertices onto the fitted surface.
    bool projected = false;
    if (model.surface) {
      bool proj_ok = true;
      for (int v = 0; v < nv && proj_ok; ++v) {
        if (model.vclass(v) != VertexClass::CurvedSurface) continue;
        try {
          auto r = model.surface->project(cand[v]);
          if ((r.point - cand[v]).squaredNorm() > 0) projected = true;
          cand[v] = r.point;
        } catch (const VanishingGradient&) {
          proj_ok = false;
        }
      }
      if (!proj_ok) {
        halve(0.5);
        continue;
      }
    }

    double i_new = 0;
    if (!energy_at(mesh, tets, cand, ref, floor, params, &i_new)) {
      halve(0.5);
      continue;
    }

    bool small_change = std::abs(i_new - i_prev) <= eps_abs ||
                        std::abs(i_new - i_prev) <= cfg.eps_rel * std::abs(i_new);
    if (i_new > i_prev) {
      if (small_change) {
        // At stagnation; stop without applying an energy-increasing step.
        stagnated = true;
        break;
      }
      halve(0.5);
      continue;
    }

    pos.swap(cand);
    t += h;
    report.accepted++;
    report.trace.push_back({t, i_new, h});
    i_prev = i_new;

    if (projected) {
      if (!velocities_at(mesh, tets, pos, ref, floor, params, k[0], nullptr))
        throw DegenerateCell("projection produced a degenerate mesh");
      adjust_all(model, pos, k[0]);
    } else {
      k[0].swap(k[6]);
    }

    if (small_change) {
      stagnated = true;
      break;
    }
    double grow = err > 0 ? std::min(5.0, std::max(0.2, 0.9 * std::pow(err, -0.2)))
                          : 5.0;
    h *= grow;
  }

  if (stagnated)
    report.reason = StopReason::EnergyStagnation;
  else if (t >= cfg.t_end)
    report.reason = StopReason::TimeHorizon;
  else
    report.reason = StopReason::MaxSteps;

  for (int v = 0; v < nv; ++v) {
    report.max_displacement =
        std::max(report.max_displacement, (pos[v] - entry[v]).norm());
    mesh.set_vertex(v, pos[v]);
  }
  return report;
}

} // namespace tetimp
