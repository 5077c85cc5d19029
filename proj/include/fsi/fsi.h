/*
  This file is part of fsi-resolvent, a mixed finite element solver for a
  Stokes fluid coupled to a clamped plate.

  Licensed under the Apache License, Version 2.0 (the "License"); you may
  not use this file except in compliance with the License.  You may obtain
  a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0
*/

/* C interface to the fsi-resolvent library. All objects are opaque handles
   created and released through this header. Every function that can fail
   returns an fsi_status; the message of the most recent failure on the
   calling thread is available from fsi_last_error(). */

#ifndef FSI_FSI_H
#define FSI_FSI_H

#include <stddef.h>
#include <stdint.h>

#if defined(FSI_BUILDING_LIBRARY)
#define FSI_API __attribute__((visibility("default")))
#else
#define FSI_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fsi_status {
  FSI_OK = 0,
  FSI_ERR_INVALID_ARGUMENT = 1,
  FSI_ERR_SOLVER = 2,
  FSI_ERR_SINGULAR = 3,
  FSI_ERR_IO = 4,
  FSI_ERR_INTERNAL = 5
} fsi_status;

typedef struct fsi_config fsi_config;
typedef struct fsi_report fsi_report;

typedef struct fsi_level_record {
  int32_t level;
  int32_t plate_elements;
  int32_t fluid_elements;
  int32_t plate_dofs;
  int32_t fluid_unknowns;
  int32_t trace_nodes;
  double char_length;
  double fluid_char_length;
  double plate_h2, plate_h1, plate_l2;
  double fluid_l2, fluid_h1, pressure_l2;
  double energy_residual, energy_relative;
  double c_tilde;
  double w1_integral;
  double trace_mismatch;
  double wall_velocity;
  double schur_mismatch;
  double mu_divergence;
  double mu_mean_pressure;
} fsi_level_record;

typedef struct fsi_rate_row {
  int32_t coarse_level, fine_level;
  double plate_h2, plate_h1, plate_l2;
  double fluid_l2, fluid_h1, pressure_l2;
} fsi_rate_row;

FSI_API const char* fsi_version(void);
FSI_API const char* fsi_last_error(void);
FSI_API const char* fsi_status_string(fsi_status status);

FSI_API fsi_status fsi_config_create(fsi_config** out);
FSI_API void fsi_config_destroy(fsi_config* config);
/* Keys: case, levels, level, lambda, rho, plate_load_degree,
   fluid_load_degree, plate_error_degree, fluid_error_degree,
   fluid_level_offset, solver_tolerance, out, export, grid_resolution, deep,
   quiet, h2_norm, reference_level. */
FSI_API fsi_status fsi_config_set(fsi_config* config, const char* key, const char* value);
FSI_API fsi_status fsi_config_load(fsi_config* config, const char* path);
FSI_API fsi_status fsi_config_validate(const fsi_config* config, const char* command);

/* Runs a command (converge, solve, infsup, mesh-dump) with output on
   stdout/stderr. *exit_code receives the process exit status to use. */
FSI_API fsi_status fsi_run(const fsi_config* config, const char* command, int* exit_code);

/* Convergence study over the configured levels. */
FSI_API fsi_status fsi_converge(const fsi_config* config, fsi_report** out);
/* Single-level coupled solve; the report then holds one level and no rates. */
FSI_API fsi_status fsi_solve_level(const fsi_config* config, int level, fsi_report** out);
FSI_API void fsi_report_destroy(fsi_report* report);
FSI_API fsi_status fsi_report_num_levels(const fsi_report* report, size_t* out);
FSI_API fsi_status fsi_report_level(const fsi_report* report, size_t index, fsi_level_record* out);
FSI_API fsi_status fsi_report_num_rates(const fsi_report* report, size_t* out);
FSI_API fsi_status fsi_report_rate(const fsi_report* report, size_t index, fsi_rate_row* out);
FSI_API fsi_status fsi_report_write_csv(const fsi_report* report, const char* path);
FSI_API fsi_status fsi_report_write_table(const fsi_report* report, const char* path);

/* beta_h at one level and the integral of the witness xi_h. */
FSI_API fsi_status fsi_infsup(int level, double* beta, double* integral);

/* dim 2: square mesh, dim 3: cube mesh. */
FSI_API fsi_status fsi_mesh_counts(int level, int dim, int64_t* vertices, int64_t* edges, int64_t* elements);
FSI_API fsi_status fsi_mesh_dump(int level, int dim, const char* vtk_path);

#ifdef __cplusplus
}
#endif

#endif
