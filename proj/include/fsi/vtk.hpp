/*
  This file is part of fsi-resolvent, a mixed finite element solver for a
  Stokes fluid coupled to a clamped plate.

  Licensed under the Apache License, Version 2.0 (the "License"); you may
  not use this file except in compliance with the License.  You may obtain
  a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0
*/

#pragma once

#include <string>

#include "fsi/argyris.hpp"
#include "fsi/mesh.hpp"
#include "fsi/taylor_hood.hpp"

namespace fsi {

// Legacy ASCII unstructured-grid writers. Fluid fields are written on the
// linear tetrahedra (cell type 10) using vertex values; plate fields on the
// triangles (cell type 5). All writers throw IoError when the file cannot
// be written.
void write_vtk_mesh(const std::string& path, const Mesh2& mesh);
void write_vtk_mesh(const std::string& path, const Mesh3& mesh);
void write_vtk_fluid(const std::string& path, const FluidField& u, const PressureField& p);
void write_vtk_plate(const std::string& path, const PlateField& w, const std::string& name = "w");

struct VtkCheck {
  bool ok = false;
  std::string message;
  long points = 0;
  long cells = 0;
  int cell_type = 0;  // common type code, or -1 when mixed
};

// Structural check of a legacy unstructured-grid file: header, point and
// cell counts, connectivity sizes against cell-type codes, index bounds and
// point-data lengths.
VtkCheck validate_vtk(const std::string& path);

}  // namespace fsi
