#pragma once

#include <string>

#include "tetimp/tet_mesh.hpp"

namespace tetimp {

// Writes the live tets as a legacy ASCII unstructured grid (cell type 10).
// Coordinates are printed with enough digits to round-trip exactly.
void write_vtk(const std::string& path, const TetMesh& mesh,
               const std::string& title = "tetrahedral mesh");

} // namespace tetimp
