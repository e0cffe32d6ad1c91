// Command line front end: improve / smooth / flip / stats / generate.

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "tetimp/errors.hpp"
#include "tetimp/improve.hpp"
#include "tetimp/local_ops.hpp"
#include "tetimp/rbf_surface.hpp"
#include "tetimp/stats_io.hpp"
#include "tetimp/synthetic.hpp"
#include "tetimp/tetgen_io.hpp"
#include "tetimp/vtk_io.hpp"

namespace {

using namespace tetimp;

TetMesh load_mesh(const std::string& path) {
  return to_tet_mesh(read_tetgen(path));
}

void save_mesh(const std::string& path, const TetMesh& mesh) {
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".vtk")
    write_vtk(path, mesh);
  else
    write_tetgen(path, from_tet_mesh(mesh));
}

void print_stats(const char* label, const QualityStats& s) {
  std::printf("%s: %d tets, %d vertices\n", label, s.n_tets, s.n_vertices);
  std::printf("  dihedral angles: min %.4f  max %.4f  mean %.4f  stddev %.4f\n",
              s.min_dihedral_deg, s.max_dihedral_deg, s.mean_dihedral_deg,
              s.stddev_dihedral_deg);
  std::printf("  aspect ratio:    min %.4f  max %.4f  mean %.4f\n",
              s.min_aspect, s.max_aspect, s.mean_aspect);
  std::printf("  energy: %.10g\n", s.energy);
}

struct CommonOpts {
  std::string input, out, stats_out;
  double theta_lim = 30.0;
  double theta = 1.0 / 3.0;
  double p = 1.5;
  double t_end = 10.0;
  int flip_level = 1;
  int max_outer = 10;
  bool fix_boundary = false;
  bool rbf = false;
  double epsilon_rel = 0.01;
};

void add_energy_flags(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--theta", o.theta,
                  "energy weight between shape and volume terms, in (0, 1/2]");
  cmd->add_option("--p", o.p, "energy exponent, > 1");
}

void add_boundary_flags(CLI::App* cmd, CommonOpts& o) {
  cmd->add_flag("--fix-boundary", o.fix_boundary,
                "pin every boundary vertex in place");
  cmd->add_flag("--rbf", o.rbf,
                "reconstruct the boundary as a smooth surface and keep "
                "boundary vertices on it");
  cmd->add_option("--epsilon-rel", o.epsilon_rel,
                  "offset distance for the surface fit, relative to the "
                  "bounding box diagonal");
}

BoundaryMode mode_of(const CommonOpts& o) {
  if (o.fix_boundary && o.rbf)
    throw InvalidInput("--fix-boundary and --rbf are mutually exclusive");
  if (o.fix_boundary) return BoundaryMode::Fixed;
  if (o.rbf) return BoundaryMode::Curved;
  return BoundaryMode::Plc;
}

int run_improve(const CommonOpts& o, const std::string& report_out) {
  TetMesh mesh = load_mesh(o.input);
  ImproveOptions opts;
  opts.theta_lim = o.theta_lim;
  opts.energy.theta = o.theta;
  opts.energy.p = o.p;
  opts.integrator.t_end = o.t_end;
  opts.flip_level = o.flip_level;
  opts.max_outer = o.max_outer;
  opts.mode = mode_of(o);
  opts.rbf_eps_rel = o.epsilon_rel;

  ImproveReport report = improve(mesh, opts);
  print_stats("before", report.initial);
  print_stats("after", report.final_stats);
  std::printf("termination: %s after %d outer iterations\n",
              to_string(report.termination), report.outer_iterations);

  if (!o.out.empty()) save_mesh(o.out, mesh);
  if (!o.stats_out.empty())
    write_stats_csv(o.stats_out, {{"initial", report.initial},
                                  {"final", report.final_stats}});
  if (!report_out.empty()) write_report_json(report_out, report);
  return 0;
}

int run_smooth(const CommonOpts& o) {
  TetMesh mesh = load_mesh(o.input);
  BoundaryMode mode = mode_of(o);
  GeometryModel model = classify_boundary(mesh, mode);
  if (mode == BoundaryMode::Curved) {
    RbfSurface::FitOptions fo;
    fo.eps_rel = o.epsilon_rel;
    model.surface =
        std::make_shared<RbfSurface>(RbfSurface::fit_boundary(mesh, fo));
  }

  EnergyParams params;
  params.theta = o.theta;
  params.p = o.p;
  params.validate();
  IntegratorConfig cfg;
  cfg.t_end = o.t_end;

  StepReport rep = integrate(mesh, model, params, cfg);
  std::printf("energy: %.10g -> %.10g\n", rep.trace.front().energy,
              rep.trace.back().energy);
  std::printf("steps: %d accepted, %d rejected; largest displacement %.6g\n",
              rep.accepted, rep.rejected, rep.max_displacement);

  if (!o.out.empty()) save_mesh(o.out, mesh);
  return 0;
}

int run_flip(const CommonOpts& o, const std::string& criterion,
             const std::string& trace_out) {
  TetMesh mesh = load_mesh(o.input);
  FlipCriterion crit;
  if (criterion == "aspect")
    crit.mode = FlipMode::AspectRatio;
  else if (criterion != "minmax")
    throw InvalidInput("criterion must be 'minmax' or 'aspect'");

  double q0 = mesh_min_angle(mesh);
  std::vector<FlipTraceRow> rows;
  LazyPassStats st = lazy_pass(mesh, crit, o.flip_level,
                               trace_out.empty() ? nullptr : &rows);
  if (!trace_out.empty()) write_flip_trace_csv(trace_out, rows);
  mesh.compact();
  std::printf("%d edges removed in %d sweeps\n", st.removals, st.sweeps);
  std::printf("smallest dihedral: %.4f -> %.4f\n", q0, mesh_min_angle(mesh));

  if (!o.out.empty()) save_mesh(o.out, mesh);
  return 0;
}

int run_stats(const CommonOpts& o) {
  TetMesh mesh = load_mesh(o.input);
  EnergyParams params;
  params.theta = o.theta;
  params.p = o.p;
  params.validate();
  QualityStats s = mesh_stats(mesh, params);
  print_stats(o.input.c_str(), s);
  if (!o.stats_out.empty()) write_stats_csv(o.stats_out, {{o.input, s}});
  return 0;
}

int run_generate(const std::string& kind, int n, int subdiv, double rx,
                 double ry, double rz, double amplitude, std::uint64_t seed,
                 const std::string& out) {
  TetMesh mesh = [&] {
    if (kind == "cube") return cube_grid(n);
    if (kind == "lshape") return l_shape(n);
    if (kind == "ellipsoid") return ellipsoid(subdiv, rx, ry, rz);
    throw InvalidInput("kind must be cube, lshape, or ellipsoid");
  }();
  if (amplitude > 0) jiggle(mesh, amplitude, seed);
  save_mesh(out, mesh);
  std::printf("%d tets, %d vertices -> %s\n",
              static_cast<int>(mesh.tet_count()), mesh.vertex_count(),
              out.c_str());
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"tetrahedral mesh improvement"};
  app.require_subcommand(1);

  CommonOpts o;
  std::string report_out, criterion = "minmax", trace_out;
  std::string gen_kind, gen_out;
  int gen_n = 5, gen_subdiv = 2;
  double gen_rx = 1, gen_ry = 1, gen_rz = 1, gen_amp = 0;
  std::uint64_t gen_seed = 1;

  auto* improve_cmd = app.add_subcommand(
      "improve", "run the full improvement scheme on a mesh");
  improve_cmd->add_option("input", o.input, "mesh file (.node/.ele)")
      ->required();
  improve_cmd->add_option("--out", o.out, "output mesh (.node base or .vtk)");
  improve_cmd->add_option("--stats-out", o.stats_out, "quality table (CSV)");
  improve_cmd->add_option("--report-out", report_out, "run report (JSON)");
  improve_cmd->add_option("--theta-lim", o.theta_lim,
                          "target smallest dihedral angle in degrees");
  improve_cmd->add_option("--t-end", o.t_end, "smoothing pseudo-time horizon");
  improve_cmd->add_option("--flip-level", o.flip_level,
                          "edge removal search depth (0-2)");
  improve_cmd->add_option("--max-outer", o.max_outer,
                          "cap on outer iterations");
  add_energy_flags(improve_cmd, o);
  add_boundary_flags(improve_cmd, o);

  auto* smooth_cmd =
      app.add_subcommand("smooth", "run gradient-flow smoothing only");
  smooth_cmd->add_option("input", o.input, "mesh file (.node/.ele)")
      ->required();
  smooth_cmd->add_option("--out", o.out, "output mesh (.node base or .vtk)");
  smooth_cmd->add_option("--t-end", o.t_end, "smoothing pseudo-time horizon");
  add_energy_flags(smooth_cmd, o);
  add_boundary_flags(smooth_cmd, o);

  auto* flip_cmd =
      app.add_subcommand("flip", "run lazy edge-removal sweeps only");
  flip_cmd->add_option("input", o.input, "mesh file (.node/.ele)")->required();
  flip_cmd->add_option("--out", o.out, "output mesh (.node base or .vtk)");
  flip_cmd->add_option("--flip-level", o.flip_level,
                       "edge removal search depth (0-2)");
  flip_cmd->add_option("--criterion", criterion, "minmax or aspect");
  flip_cmd->add_option("--trace-out", trace_out,
                       "write a CSV row per attempted edge removal");

  auto* stats_cmd = app.add_subcommand("stats", "print mesh quality");
  stats_cmd->add_option("input", o.input, "mesh file (.node/.ele)")
      ->required();
  stats_cmd->add_option("--stats-out", o.stats_out, "quality table (CSV)");
  add_energy_flags(stats_cmd, o);

  auto* gen_cmd = app.add_subcommand("generate", "generate a sample mesh");
  gen_cmd->add_option("kind", gen_kind, "cube, lshape, or ellipsoid")
      ->required();
  gen_cmd->add_option("--out", gen_out, "output mesh (.node base or .vtk)")
      ->required();
  gen_cmd->add_option("--n", gen_n, "grid points per side (cube, lshape)");
  gen_cmd->add_option("--subdiv", gen_subdiv,
                      "surface subdivision level (ellipsoid)");
  gen_cmd->add_option("--rx", gen_rx, "ellipsoid semi-axis x");
  gen_cmd->add_option("--ry", gen_ry, "ellipsoid semi-axis y");
  gen_cmd->add_option("--rz", gen_rz, "ellipsoid semi-axis z");
  gen_cmd->add_option("--jiggle", gen_amp,
                      "random perturbation relative to the mean edge length");
  gen_cmd->add_option("--seed", gen_seed, "random seed for --jiggle");

  // Exit codes: 0 success, 1 usage error, 2 input error, 3 runtime failure.
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (improve_cmd->parsed()) return run_improve(o, report_out);
    if (smooth_cmd->parsed()) return run_smooth(o);
    if (flip_cmd->parsed()) return run_flip(o, criterion, trace_out);
    if (stats_cmd->parsed()) return run_stats(o);
    if (gen_cmd->parsed())
      return run_generate(gen_kind, gen_n, gen_subdiv, gen_rx, gen_ry, gen_rz,
                          gen_amp, gen_seed, gen_out);
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 1;
}
