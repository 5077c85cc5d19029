/*
  This file is part of fsi-resolvent, a mixed finite element solver for a
  Stokes fluid coupled to a clamped plate.

  Licensed under the Apache License, Version 2.0 (the "License"); you may
  not use this file except in compliance with the License.  You may obtain
  a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0
*/

// Exercises the shared library strictly through its C header.

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>

#include "fsi/fsi.h"

TEST_CASE("configuration handles report errors through status codes") {
  fsi_config* cfg = nullptr;
  REQUIRE(fsi_config_create(&cfg) == FSI_OK);
  CHECK(fsi_config_set(cfg, "levels", "1,2") == FSI_OK);
  CHECK(fsi_config_set(cfg, "bogus", "1") == FSI_ERR_INVALID_ARGUMENT);
  CHECK(std::string(fsi_last_error()).find("bogus") != std::string::npos);
  CHECK(fsi_config_set(cfg, "lambda", "-2") == FSI_OK);
  CHECK(fsi_config_validate(cfg, "converge") == FSI_ERR_INVALID_ARGUMENT);
  CHECK(fsi_config_set(cfg, "lambda", "1") == FSI_OK);
  CHECK(fsi_config_validate(cfg, "converge") == FSI_OK);
  CHECK(fsi_config_load(cfg, "/nonexistent/file.cfg") == FSI_ERR_IO);
  CHECK(fsi_config_set(nullptr, "lambda", "1") == FSI_ERR_INVALID_ARGUMENT);
  CHECK(fsi_config_create(nullptr) == FSI_ERR_INVALID_ARGUMENT);
  CHECK(std::string(fsi_status_string(FSI_ERR_SINGULAR)) == "singular matrix");
  fsi_config_destroy(cfg);
  fsi_config_destroy(nullptr);
}

TEST_CASE("mesh queries") {
  int64_t v = 0, e = 0, t = 0;
  REQUIRE(fsi_mesh_counts(1, 2, &v, &e, &t) == FSI_OK);
  CHECK(v == 5);
  CHECK(e == 8);
  CHECK(t == 4);
  REQUIRE(fsi_mesh_counts(2, 3, nullptr, nullptr, &t) == FSI_OK);
  CHECK(t == 192);
  CHECK(fsi_mesh_counts(1, 4, &v, &e, &t) == FSI_ERR_INVALID_ARGUMENT);
  CHECK(fsi_mesh_counts(0, 2, &v, &e, &t) == FSI_ERR_INVALID_ARGUMENT);
  const std::string path = (std::filesystem::temp_directory_path() / "fsi_capi_mesh.vtk").string();
  CHECK(fsi_mesh_dump(1, 3, path.c_str()) == FSI_OK);
  CHECK(std::filesystem::exists(path));
}

TEST_CASE("convergence study through opaque report handles") {
  fsi_config* cfg = nullptr;
  REQUIRE(fsi_config_create(&cfg) == FSI_OK);
  REQUIRE(fsi_config_set(cfg, "levels", "1,2") == FSI_OK);
  REQUIRE(fsi_config_set(cfg, "quiet", "true") == FSI_OK);
  fsi_report* rep = nullptr;
  REQUIRE(fsi_converge(cfg, &rep) == FSI_OK);
  size_t n = 0;
  REQUIRE(fsi_report_num_levels(rep, &n) == FSI_OK);
  CHECK(n == 2);
  fsi_level_record r{};
  REQUIRE(fsi_report_level(rep, 1, &r) == FSI_OK);
  CHECK(r.level == 2);
  CHECK(r.plate_elements == 16);
  CHECK(r.fluid_elements == 192);
  CHECK(r.plate_h2 > 0.0);
  CHECK(fsi_report_level(rep, 2, &r) == FSI_ERR_INVALID_ARGUMENT);
  REQUIRE(fsi_report_num_rates(rep, &n) == FSI_OK);
  CHECK(n == 1);
  fsi_rate_row row{};
  REQUIRE(fsi_report_rate(rep, 0, &row) == FSI_OK);
  CHECK(row.coarse_level == 1);
  CHECK(row.fine_level == 2);
  CHECK(std::isfinite(row.plate_h2));
  const std::string csv = (std::filesystem::temp_directory_path() / "fsi_capi_report.csv").string();
  CHECK(fsi_report_write_csv(rep, csv.c_str()) == FSI_OK);
  CHECK(fsi_report_write_table(rep, "/proc/none/table.txt") == FSI_ERR_IO);
  fsi_report_destroy(rep);

  fsi_report* single = nullptr;
  REQUIRE(fsi_solve_level(cfg, 1, &single) == FSI_OK);
  REQUIRE(fsi_report_num_rates(single, &n) == FSI_OK);
  CHECK(n == 0);
  fsi_report_destroy(single);
  fsi_config_destroy(cfg);
}

TEST_CASE("inf-sup witness") {
  double beta = 0.0, integral = 0.0;
  REQUIRE(fsi_infsup(2, &beta, &integral) == FSI_OK);
  CHECK(beta > 0.0);
  CHECK(std::abs(integral - beta * beta) <= 1e-9 * beta * beta);
  CHECK(fsi_infsup(0, &beta, nullptr) == FSI_ERR_INVALID_ARGUMENT);
}
