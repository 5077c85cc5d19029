/*
  This file is part of fsi-resolvent, a mixed finite element solver for a
  Stokes fluid coupled to a clamped plate.

  Licensed under the Apache License, Version 2.0 (the "License"); you may
  not use this file except in compliance with the License.  You may obtain
  a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0
*/

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fsi/verification.hpp"

namespace fsi {

// Settings shared by every command. The file format is one `key = value`
// per line with `#` comments; keys are the names accepted by set().
struct RunConfig {
  std::string case_name = "paper-rho0";
  std::vector<int> levels{1, 2, 4, 8};
  int level = 2;
  double lambda = 1.0;
  double rho = 0.0;
  int plate_load_degree = 10;
  int fluid_load_degree = 6;
  int plate_error_degree = 12;
  int fluid_error_degree = 6;
  int fluid_level_offset = 0;
  double solver_tolerance = 1e-9;
  std::string output_dir = "fsi_out";
  bool export_csv = true;
  bool export_vtk = false;
  bool export_grid = false;
  int grid_resolution = 50;
  bool deep = false;
  H2Norm h2_norm = H2Norm::Hessian;
  int reference_level = 32;
  bool quiet = false;

  // Throws InvalidArgument for an unknown key or a malformed value.
  void set(const std::string& key, const std::string& value);
  void load(const std::string& path);
  // Throws InvalidArgument when the settings are inconsistent for `command`.
  void validate(const std::string& command) const;
  StudyOptions study_options() const;
};

std::vector<int> parse_levels(const std::string& text);

// Runs one of: converge, solve, infsup, mesh-dump. Returns 0 on success and
// a nonzero status after printing an error line to `err`.
int run(const RunConfig& config, const std::string& command, std::ostream& log, std::ostream& err);

// Exit statuses of run().
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitSolver = 3;
inline constexpr int kExitIo = 4;
inline constexpr int kExitTolerance = 5;

}  // namespace fsi
