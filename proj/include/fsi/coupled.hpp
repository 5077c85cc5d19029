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
#include <memory>
#include <vector>

#include <Eigen/Core>

#include "fsi/argyris.hpp"
#include "fsi/sparse.hpp"
#include "fsi/taylor_hood.hpp"

namespace fsi {

// Right-hand side [w1*, w2*, u*] of the resolvent equation.
struct ResolventData {
  double lambda = 1.0;
  double rho = 0.0;
  PlateFunction w1_star;
  PlateFunction w2_star;
  VectorFunction3 u_star;
  // Optional strong form of P_rho (lambda w1* + w2*). When set it replaces
  // the weak pairing (g, phi) + rho (grad g, grad phi), g = lambda w1* + w2*.
  PlateFunction plate_load;
  // Optional strong form of P_rho w2*, used by the energy balance.
  PlateFunction p_w2_star;

  // Throws InvalidArgument on lambda <= 0, rho < 0 or missing functions.
  void validate() const;
  static ResolventData zero(double lambda, double rho = 0.0);
};

struct CoupledOptions {
  // Drop every fluid contribution to the plate system (diagnostic).
  bool include_fluid = true;
  int plate_load_degree = 10;
  int fluid_load_degree = 6;
};

// Fluid response to each plate node on z = 0, computed with one Stokes
// factorization. A discrete fluid map depends on plate data only through
// their values at those nodes, so f_h(phi) = L (T phi) for phi in X_h.
class FluidCache {
 public:
  FluidCache(const ArgyrisSpace& plate, const TaylorHoodSpace& fluid, double lambda);

  const ArgyrisSpace& plate() const noexcept { return *plate_; }
  const TaylorHoodSpace& fluid() const noexcept { return *fluid_; }
  const StokesSolver& solver() const noexcept { return solver_; }

  // Rows: plate-region fluid nodes. Columns: free plate DOFs.
  const Eigen::MatrixXd& trace() const noexcept { return trace_; }
  // Velocity (columns of L) and pressure responses to unit nodal traces.
  const Eigen::MatrixXd& velocity_response() const noexcept { return velocity_; }
  const Eigen::MatrixXd& pressure_response() const noexcept { return pressure_; }
  // L^T A~ L.
  const Eigen::MatrixXd& energy() const noexcept { return energy_; }
  double lambda() const noexcept { return solver_.lambda(); }

  // Velocity f_h(phi) from the values of phi at the plate-region nodes.
  std::vector<double> map_velocity(const Eigen::VectorXd& nodal) const;

 private:
  const ArgyrisSpace* plate_;
  const TaylorHoodSpace* fluid_;
  StokesSolver solver_;
  Eigen::MatrixXd trace_;
  Eigen::MatrixXd velocity_;
  Eigen::MatrixXd pressure_;
  Eigen::MatrixXd energy_;
};

// Data-dependent pieces shared by the load vector and the recovery.
struct DataCache {
  Eigen::VectorXd w1_star_free;     // clamped Argyris interpolant of w1*
  std::vector<double> f_w1_star;    // f_h(w1*) velocity
  StokesSolution mu;                // mu_h(u*), q_h(u*)
  std::vector<double> u_star_load;  // (u*, phi_i) over velocity DOFs
  Eigen::VectorXd fluid_pairing;    // A~ (f_h(w1*) - mu_h) + (u*, .)
  Eigen::VectorXd plate_pairing;    // (P_rho (lambda w1* + w2*), phi_i) over free DOFs
};

// [A B; B^T 0] [alpha; c] = [F; 0] with a dense symmetric A.
struct ReducedSystem {
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
  Eigen::VectorXd f;

  SaddleSystem to_saddle() const;
};

struct CoupledSolution {
  PlateField w1h, w2h;
  FluidField uh;
  PressureField ph;
  double c_tilde = 0.0;
  // |alpha_direct - alpha_schur|_inf / |alpha|_inf and the same for c.
  double schur_mismatch = 0.0;
};

class CoupledSolver {
 public:
  CoupledSolver(const ArgyrisSpace& plate, const TaylorHoodSpace& fluid, double lambda, double rho,
                CoupledOptions options = {});
  ~CoupledSolver();

  const ArgyrisSpace& plate() const noexcept { return *plate_; }
  const TaylorHoodSpace& fluid() const noexcept { return *fluid_; }
  const FluidCache& cache() const noexcept { return *cache_; }
  const CoupledOptions& options() const noexcept { return options_; }
  double lambda() const noexcept { return lambda_; }
  double rho() const noexcept { return rho_; }

  // Free-DOF plate matrices.
  const SparseMatrix& bending() const noexcept { return bending_; }
  const SparseMatrix& mass_rho() const noexcept { return mass_rho_; }

  DataCache prepare(const ResolventData& data) const;
  ReducedSystem assemble(const DataCache& dc) const;
  // The load functional applied to one plate function in X_h.
  double apply_F(const DataCache& dc, const PlateField& phi) const;
  CoupledSolution solve(const ResolventData& data) const;

 private:
  const ArgyrisSpace* plate_;
  const TaylorHoodSpace* fluid_;
  double lambda_;
  double rho_;
  CoupledOptions options_;
  std::unique_ptr<FluidCache> cache_;
  SparseMatrix bending_;
  SparseMatrix mass_rho_;
  Eigen::VectorXd integrals_;
};

ReducedSystem assemble_reduced_system(const CoupledSolver& solver, const ResolventData& data);
CoupledSolution solve_resolvent(const CoupledSolver& solver, const ResolventData& data);

}  // namespace fsi
