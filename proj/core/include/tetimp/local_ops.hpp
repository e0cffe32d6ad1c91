#pragma once

// Edge contraction, edge splitting, and bad-tet splitting. Each pass works
// on a snapshot taken at entry: the mean edge length and the candidate list
// are frozen, candidates invalidated by earlier operations are skipped.

#include "tetimp/boundary.hpp"
#include "tetimp/tet_mesh.hpp"

namespace tetimp {

// Mean length over the unique edges of the live tets.
double mean_edge_length(const TetMesh& mesh);

// Contracts edges shorter than short_factor * mean edge length, shortest
// first. An endpoint is removed only if the link condition holds, its class
// admits the move (Corner vertices are never removed, boundary vertices only
// slide along their facet / segment / surface), and every surviving tet stays
// positively oriented. Returns the number of contractions.
int contract_short_edges(TetMesh& mesh, const GeometryModel& model,
                         double short_factor = 0.5);

// Splits edges longer than long_factor * mean edge length at their midpoint,
// longest first. New vertices are classified in the model; midpoints of
// surface edges are pulled onto the fitted surface when that keeps the
// incident tets valid. Returns the number of splits.
int split_long_edges(TetMesh& mesh, GeometryModel& model, BoundaryMode mode,
                     double long_factor = 1.5);

// Splits every tet whose smallest dihedral angle (degrees) is below
// theta_lim into four tets at its barycenter. Returns the number of splits.
int split_bad_tets(TetMesh& mesh, GeometryModel& model, BoundaryMode mode,
                   double theta_lim);

} // namespace tetimp
