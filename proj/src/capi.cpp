/*
  This file is part of fsi-resolvent, a mixed finite element solver for a
  Stokes fluid coupled to a clamped plate.

  Licensed under the Apache License, Version 2.0 (the "License"); you may
  not use this file except in compliance with the License.  You may obtain
  a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0
*/

#include "fsi/fsi.h"

#include <fstream>
#include <iostream>
#include <memory>
#include <new>
#include <string>

#include "fsi/argyris.hpp"
#include "fsi/cli_io.hpp"
#include "fsi/error.hpp"
#include "fsi/mesh.hpp"
#include "fsi/verification.hpp"
#include "fsi/vtk.hpp"

struct fsi_config {
  fsi::RunConfig cfg;
};

struct fsi_report {
  fsi::ConvergenceReport report;
  std::vector<fsi::RateRow> rates;
};

namespace {

thread_local std::string g_last_error;

fsi_status fail(fsi_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

// Translates any exception escaping `fn` into a status code.
template <class Fn>
fsi_status guard(Fn&& fn) {
  try {
    g_last_error.clear();
    fn();
    return FSI_OK;
  } catch (const fsi::SingularMatrix& e) {
    return fail(FSI_ERR_SINGULAR, e.what());
  } catch (const fsi::InvalidArgument& e) {
    return fail(FSI_ERR_INVALID_ARGUMENT, e.what());
  } catch (const fsi::IoError& e) {
    return fail(FSI_ERR_IO, e.what());
  } catch (const fsi::Error& e) {
    return fail(FSI_ERR_SOLVER, e.what());
  } catch (const std::bad_alloc&) {
    return fail(FSI_ERR_SOLVER, "out of memory");
  } catch (const std::exception& e) {
    return fail(FSI_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(FSI_ERR_INTERNAL, "unknown exception");
  }
}

void require(const void* p, const char* what) {
  if (!p) throw fsi::InvalidArgument(std::string(what) + " is null");
}

fsi_level_record to_c(const fsi::LevelRecord& r) {
  fsi_level_record c{};
  c.level = r.level;
  c.plate_elements = r.plate_elements;
  c.fluid_elements = r.fluid_elements;
  c.plate_dofs = r.plate_dofs;
  c.fluid_unknowns = r.fluid_unknowns;
  c.trace_nodes = r.trace_nodes;
  c.char_length = r.char_length;
  c.fluid_char_length = r.fluid_char_length;
  c.plate_h2 = r.plate.h2;
  c.plate_h1 = r.plate.h1;
  c.plate_l2 = r.plate.l2;
  c.fluid_l2 = r.fluid.l2;
  c.fluid_h1 = r.fluid.h1;
  c.pressure_l2 = r.fluid.p;
  c.energy_residual = r.energy.residual;
  c.energy_relative = r.energy.relative;
  c.c_tilde = r.c_tilde;
  c.w1_integral = r.w1_integral;
  c.trace_mismatch = r.trace_mismatch;
  c.wall_velocity = r.wall_velocity;
  c.schur_mismatch = r.schur_mismatch;
  c.mu_divergence = r.mu_divergence;
  c.mu_mean_pressure = r.mu_mean_pressure;
  return c;
}

fsi::ConvergenceReport empty_report(const fsi::RunConfig& cfg) {
  fsi::ConvergenceReport rep;
  rep.case_name = cfg.case_name;
  rep.lambda = cfg.lambda;
  rep.rho = cfg.rho;
  rep.h2_norm = cfg.h2_norm;
  return rep;
}

}  // namespace

extern "C" {

const char* fsi_version(void) { return "1.0.0"; }

const char* fsi_last_error(void) { return g_last_error.c_str(); }

const char* fsi_status_string(fsi_status status) {
  switch (status) {
    case FSI_OK: return "ok";
    case FSI_ERR_INVALID_ARGUMENT: return "invalid argument";
    case FSI_ERR_SOLVER: return "solver failure";
    case FSI_ERR_SINGULAR: return "singular matrix";
    case FSI_ERR_IO: return "i/o failure";
    case FSI_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

fsi_status fsi_config_create(fsi_config** out) {
  return guard([&] {
    require(out, "out");
    *out = new fsi_config;
  });
}

void fsi_config_destroy(fsi_config* config) { delete config; }

fsi_status fsi_config_set(fsi_config* config, const char* key, const char* value) {
  return guard([&] {
    require(config, "config");
    require(key, "key");
    require(value, "value");
    config->cfg.set(key, value);
  });
}

fsi_status fsi_config_load(fsi_config* config, const char* path) {
  return guard([&] {
    require(config, "config");
    require(path, "path");
    config->cfg.load(path);
  });
}

fsi_status fsi_config_validate(const fsi_config* config, const char* command) {
  return guard([&] {
    require(config, "config");
    require(command, "command");
    config->cfg.validate(command);
  });
}

fsi_status fsi_run(const fsi_config* config, const char* command, int* exit_code) {
  return guard([&] {
    require(config, "config");
    require(command, "command");
    require(exit_code, "exit_code");
    *exit_code = fsi::run(config->cfg, command, std::cout, std::cerr);
    std::cout.flush();
  });
}

fsi_status fsi_converge(const fsi_config* config, fsi_report** out) {
  return guard([&] {
    require(config, "config");
    require(out, "out");
    *out = nullptr;
    config->cfg.validate("converge");
    const fsi::StudyOptions opt = config->cfg.study_options();
    const fsi::ManufacturedCase mc = fsi::manufactured_case(opt.lambda, opt.rho);
    auto rep = std::make_unique<fsi_report>();
    rep->report = empty_report(config->cfg);
    for (int level : opt.levels) rep->report.levels.push_back(fsi::run_level(mc, level, opt).record);
    rep->rates = rep->report.rates();
    *out = rep.release();
  });
}

fsi_status fsi_solve_level(const fsi_config* config, int level, fsi_report** out) {
  return guard([&] {
    require(config, "config");
    require(out, "out");
    *out = nullptr;
    fsi::RunConfig cfg = config->cfg;
    cfg.level = level;
    cfg.validate("solve");
    const fsi::StudyOptions opt = cfg.study_options();
    auto rep = std::make_unique<fsi_report>();
    rep->report = empty_report(cfg);
    rep->report.levels.push_back(fsi::run_level(fsi::manufactured_case(cfg.lambda, cfg.rho), level, opt).record);
    *out = rep.release();
  });
}

void fsi_report_destroy(fsi_report* report) { delete report; }

fsi_status fsi_report_num_levels(const fsi_report* report, size_t* out) {
  return guard([&] {
    require(report, "report");
    require(out, "out");
    *out = report->report.levels.size();
  });
}

fsi_status fsi_report_level(const fsi_report* report, size_t index, fsi_level_record* out) {
  return guard([&] {
    require(report, "report");
    require(out, "out");
    if (index >= report->report.levels.size()) throw fsi::InvalidArgument("level index out of range");
    *out = to_c(report->report.levels[index]);
  });
}

fsi_status fsi_report_num_rates(const fsi_report* report, size_t* out) {
  return guard([&] {
    require(report, "report");
    require(out, "out");
    *out = report->rates.size();
  });
}

fsi_status fsi_report_rate(const fsi_report* report, size_t index, fsi_rate_row* out) {
  return guard([&] {
    require(report, "report");
    require(out, "out");
    if (index >= report->rates.size()) throw fsi::InvalidArgument("rate index out of range");
    const fsi::RateRow& r = report->rates[index];
    *out = fsi_rate_row{r.from, r.to, r.plate_h2, r.plate_h1, r.plate_l2, r.fluid_l2, r.fluid_h1, r.pressure};
  });
}

fsi_status fsi_report_write_csv(const fsi_report* report, const char* path) {
  return guard([&] {
    require(report, "report");
    require(path, "path");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw fsi::IoError(std::string("cannot open '") + path + "' for writing");
    fsi::write_report_csv(report->report, out);
    if (!out) throw fsi::IoError(std::string("write to '") + path + "' failed");
  });
}

fsi_status fsi_report_write_table(const fsi_report* report, const char* path) {
  return guard([&] {
    require(report, "report");
    require(path, "path");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw fsi::IoError(std::string("cannot open '") + path + "' for writing");
    fsi::write_rate_table(report->report, out);
    if (!out) throw fsi::IoError(std::string("write to '") + path + "' failed");
  });
}

fsi_status fsi_infsup(int level, double* beta, double* integral) {
  return guard([&] {
    require(beta, "beta");
    if (level < 1) throw fsi::InvalidArgument("level must be positive");
    const fsi::ArgyrisSpace space(fsi::build_square_mesh(level));
    const fsi::PlateField xi = fsi::solve_xi(space);
    *beta = fsi::discrete_infsup_constant(space);
    if (integral) *integral = fsi::integrate(xi);
  });
}

fsi_status fsi_mesh_counts(int level, int dim, int64_t* vertices, int64_t* edges, int64_t* elements) {
  return guard([&] {
    if (dim == 2) {
      const fsi::Mesh2 m = fsi::build_square_mesh(level);
      if (vertices) *vertices = m.num_vertices();
      if (edges) *edges = m.num_edges();
      if (elements) *elements = m.num_triangles();
    } else if (dim == 3) {
      const fsi::Mesh3 m = fsi::build_cube_mesh(level);
      if (vertices) *vertices = m.num_vertices();
      if (edges) *edges = m.num_edges();
      if (elements) *elements = m.num_tets();
    } else {
      throw fsi::InvalidArgument("dim must be 2 or 3");
    }
  });
}

fsi_status fsi_mesh_dump(int level, int dim, const char* vtk_path) {
  return guard([&] {
    require(vtk_path, "vtk_path");
    if (dim == 2) fsi::write_vtk_mesh(vtk_path, fsi::build_square_mesh(level));
    else if (dim == 3) fsi::write_vtk_mesh(vtk_path, fsi::build_cube_mesh(level));
    else throw fsi::InvalidArgument("dim must be 2 or 3");
  });
}

}  // extern "C"
