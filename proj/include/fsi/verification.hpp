/*
  This file is part of fsi-resolvent, a mixed finite element solver for a
  Stokes fluid coupled to a clamped plate.

  Licensed under the Apache License, Version 2.0 (the "License"); you may
  not use this file except in compliance with the License.  You may obtain
  a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0
*/

#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fsi/argyris.hpp"
#include "fsi/coupled.hpp"
#include "fsi/manufactured.hpp"
#include "fsi/taylor_hood.hpp"

namespace fsi {

// Which seminorm the "H2" plate error column reports.
enum class H2Norm { Hessian, Laplacian };

struct PlateErrors {
  double h2 = 0.0;
  double h1 = 0.0;
  double l2 = 0.0;
};

PlateErrors plate_error_norms(const PlateField& w1h, const PlateFunction& exact, H2Norm norm = H2Norm::Hessian,
                              int degree = 12);

struct FluidErrors {
  double l2 = 0.0;  // velocity
  double h1 = 0.0;  // velocity gradient
  double p = 0.0;   // pressure
};

// Exact velocity value and Jacobian (row = component) at a point.
using VelocityJet = std::function<void(const Eigen::Vector3d&, Eigen::Vector3d&, Eigen::Matrix3d&)>;

FluidErrors fluid_error_norms(const FluidField& uh, const PressureField& ph, const VelocityJet& u,
                              const std::function<double(const Eigen::Vector3d&)>& p, int degree = 6);

// lambda |x_h|^2 + |grad u_h|^2 against the pairing (x*, x_h), both in the
// energy inner product of the coupled state space.
struct EnergyBalance {
  double state_norm2 = 0.0;  // |x_h|^2
  double dissipation = 0.0;  // |grad u_h|^2
  double pairing = 0.0;      // (x*, x_h)
  double residual = 0.0;     // |lambda |x_h|^2 + |grad u_h|^2 - pairing|
  double relative = 0.0;     // residual / (lambda |x_h|^2)
};
EnergyBalance energy_balance(const CoupledSolution& sol, const ResolventData& data, int plate_degree = 12,
                             int fluid_degree = 6);

struct LevelRecord {
  int level = 0;
  Index plate_elements = 0;
  double char_length = 0.0;
  Index fluid_elements = 0;
  double fluid_char_length = 0.0;
  Index plate_dofs = 0;       // free Argyris DOFs
  Index fluid_unknowns = 0;   // Stokes saddle size
  Index trace_nodes = 0;
  PlateErrors plate;
  FluidErrors fluid;
  EnergyBalance energy;
  double c_tilde = 0.0;
  double w1_integral = 0.0;       // |int w1h| / |w1h|_H2
  double trace_mismatch = 0.0;    // max |u_h - (0, 0, w2h)| over plate nodes
  double wall_velocity = 0.0;     // max |u_h| over wall nodes
  double schur_mismatch = 0.0;
  double mu_divergence = 0.0;     // max |B mu_h|
  double mu_mean_pressure = 0.0;  // |int q_h|
};

struct RateRow {
  int from = 0, to = 0;
  double plate_h2 = 0, plate_h1 = 0, plate_l2 = 0;
  double fluid_l2 = 0, fluid_h1 = 0, pressure = 0;
};

struct ConvergenceReport {
  std::string case_name;
  double lambda = 1.0;
  double rho = 0.0;
  H2Norm h2_norm = H2Norm::Hessian;
  std::vector<LevelRecord> levels;

  std::vector<RateRow> rates() const;
};

// log(e_coarse / e_fine) / log 2
double convergence_rate(double e_coarse, double e_fine);

struct StudyOptions {
  std::vector<int> levels{1, 2, 4, 8};
  double lambda = 1.0;
  double rho = 0.0;
  H2Norm h2_norm = H2Norm::Hessian;
  // Fluid mesh level relative to the plate level (fluid = plate * 2^offset
  // for offset >= 0). Zero ties the two meshes as in the reference tables.
  int fluid_level_offset = 0;
  int plate_error_degree = 12;
  int fluid_error_degree = 6;
  CoupledOptions coupled;
  std::function<void(const std::string&)> progress;
};

// One manufactured-solution solve with everything needed for export.
struct LevelRun {
  std::unique_ptr<ArgyrisSpace> plate;
  std::unique_ptr<TaylorHoodSpace> fluid;
  std::unique_ptr<CoupledSolver> solver;
  std::optional<CoupledSolution> solution;
  LevelRecord record;
};

LevelRun run_level(const ManufacturedCase& mc, int level, const StudyOptions& options);

// Throws InvalidArgument for fewer than two or non-increasing levels; solver
// errors are rethrown with the failing level in the message.
ConvergenceReport convergence_study(const StudyOptions& options);

struct InfSupRecord {
  int level = 0;
  double beta = 0.0;             // |lap xi_h|
  double integral = 0.0;         // int xi_h
  double identity_error = 0.0;   // |int xi_h - beta^2| / beta^2
  double error = 0.0;            // |lap (xi_ref - xi_h)|
  double order = 0.0;            // from the previous level, NaN for the first
};

// beta_h per level against a reference computed on level `reference_level`.
std::vector<InfSupRecord> infsup_study(const std::vector<int>& levels, int reference_level);

void write_report_csv(const ConvergenceReport& report, std::ostream& out);
void write_rate_table(const ConvergenceReport& report, std::ostream& out);
void write_infsup_table(const std::vector<InfSupRecord>& rows, std::ostream& out);

}  // namespace fsi
