/*
  This file is part of fsi-resolvent, a mixed finite element solver for a
  Stokes fluid coupled to a clamped plate.

  Licensed under the Apache License, Version 2.0 (the "License"); you may
  not use this file except in compliance with the License.  You may obtain
  a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0
*/

// Command-line front end. Parses flags with CLI11, forwards every setting to
// the C API as a key/value pair and lets the library run the command.

#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "fsi/fsi.h"

namespace {

struct Flags {
  std::string config_file;
  std::vector<std::pair<std::string, std::string>> settings;
};

// Registers a string option whose value, when given, becomes config key `key`.
void forward(CLI::App* app, Flags& flags, const std::string& name, const std::string& key, const std::string& help) {
  app->add_option_function<std::string>(
      name, [&flags, key](const std::string& v) { flags.settings.emplace_back(key, v); }, help);
}

void add_common(CLI::App* app, Flags& flags) {
  app->add_option("--config", flags.config_file, "flat key = value file; flags override it");
  forward(app, flags, "--case", "case", "paper-rho0 (default) or manufactured-rho");
  forward(app, flags, "--lambda", "lambda", "resolvent parameter, > 0 (default 1)");
  forward(app, flags, "--rho", "rho", "rotational inertia, >= 0 (default 0)");
  forward(app, flags, "--out", "out", "output directory (default fsi_out)");
  forward(app, flags, "--export", "export", "comma list of csv, vtk, grid, none (default csv)");
  forward(app, flags, "--h2-norm", "h2_norm", "hessian (default) or laplacian");
  forward(app, flags, "--fluid-level-offset", "fluid_level_offset", "fluid mesh level = plate level * 2^offset");
  forward(app, flags, "--plate-load-degree", "plate_load_degree", "quadrature degree for plate loads");
  forward(app, flags, "--fluid-load-degree", "fluid_load_degree", "quadrature degree for fluid loads");
  forward(app, flags, "--plate-error-degree", "plate_error_degree", "quadrature degree for plate errors");
  forward(app, flags, "--fluid-error-degree", "fluid_error_degree", "quadrature degree for fluid errors");
  forward(app, flags, "--tolerance", "solver_tolerance", "bound on solver consistency residuals");
  forward(app, flags, "--grid", "grid_resolution", "intervals per side of the exported plate grid");
  app->add_flag_callback("--deep", [&flags] { flags.settings.emplace_back("deep", "true"); },
                         "allow fluid meshes above level 8 (several GB of memory)");
  app->add_flag_callback("--quiet", [&flags] { flags.settings.emplace_back("quiet", "true"); },
                         "suppress progress messages");
}

int report(fsi_status s) {
  std::fprintf(stderr, "error: [%s] %s\n", fsi_status_string(s), fsi_last_error());
  return s == FSI_ERR_INVALID_ARGUMENT ? 2 : s == FSI_ERR_IO ? 4 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mixed finite element solver for a Stokes fluid coupled to a clamped plate"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(fsi_version()));
  Flags flags;

  CLI::App* converge = app.add_subcommand("converge", "manufactured-solution convergence study");
  add_common(converge, flags);
  forward(converge, flags, "--levels", "levels", "comma list of strictly increasing levels (default 1,2,4,8)");

  CLI::App* solve = app.add_subcommand("solve", "coupled solve at one level");
  add_common(solve, flags);
  forward(solve, flags, "--level", "level", "mesh level (default 2)");

  CLI::App* infsup = app.add_subcommand("infsup", "discrete inf-sup witness per level");
  add_common(infsup, flags);
  forward(infsup, flags, "--levels", "levels", "comma list of levels (default 1,2,4,8)");
  forward(infsup, flags, "--reference-level", "reference_level", "fine reference level (default 32)");

  CLI::App* dump = app.add_subcommand("mesh-dump", "write the square and cube meshes as VTK");
  add_common(dump, flags);
  forward(dump, flags, "--level", "level", "mesh level (default 2)");

  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();

  fsi_config* cfg = nullptr;
  if (fsi_status s = fsi_config_create(&cfg); s != FSI_OK) return report(s);
  int code = 0;
  fsi_status s = FSI_OK;
  if (!flags.config_file.empty()) s = fsi_config_load(cfg, flags.config_file.c_str());
  for (std::size_t i = 0; s == FSI_OK && i < flags.settings.size(); ++i)
    s = fsi_config_set(cfg, flags.settings[i].first.c_str(), flags.settings[i].second.c_str());
  if (s == FSI_OK) s = fsi_run(cfg, command.c_str(), &code);
  fsi_config_destroy(cfg);
  return s == FSI_OK ? code : report(s);
}
