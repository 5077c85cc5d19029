/*
  This file is part of fsi-resolvent, a mixed finite element solver for a
  Stokes fluid coupled to a clamped plate.

  Licensed under the Apache License, Version 2.0 (the "License"); you may
  not use this file except in compliance with the License.  You may obtain
  a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0
*/

#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "fsi/mesh.hpp"
#include "fsi/sparse.hpp"

namespace fsi {

// Value, gradient and Hessian of a scalar function of (x, y).
struct Jet2 {
  double value = 0.0;
  Eigen::Vector2d grad = Eigen::Vector2d::Zero();
  Eigen::Matrix2d hess = Eigen::Matrix2d::Zero();
};

using PlateFunction = std::function<Jet2(const Eigen::Vector2d&)>;

// The 21 local basis functions of one triangle evaluated at a point.
struct ArgyrisBasisValues {
  using Vec = Eigen::Matrix<double, 21, 1>;
  Vec value, dx, dy, dxx, dxy, dyy;
};

// Per-vertex DOF slots.
enum ArgyrisVertexDof : int { kValue = 0, kDx = 1, kDy = 2, kDxx = 3, kDxy = 4, kDyy = 5 };

// Quintic C1 (Argyris) finite element space on a triangle mesh of the unit
// square, with clamped boundary conditions imposed by eliminating DOFs.
//
// Raw DOF numbering: vertex v owns ids 6v .. 6v+5 in ArgyrisVertexDof order;
// edge e owns id 6*num_vertices + e, the derivative at the edge midpoint in
// the direction of the edge's global normal. That normal is the
// counterclockwise rotation of (higher vertex - lower vertex).
//
// Local DOF order on a triangle: 6 slots for each of the 3 vertices, then the
// 3 edge DOFs, edge k being opposite local vertex k.
class ArgyrisSpace {
 public:
  static constexpr int kLocalDofs = 21;

  // Throws InvalidArgument when a triangle is degenerate.
  explicit ArgyrisSpace(Mesh2 mesh);

  const Mesh2& mesh() const noexcept { return mesh_; }

  Index num_raw_dofs() const noexcept { return num_raw_; }
  Index num_free_dofs() const noexcept { return static_cast<Index>(free_to_raw_.size()); }

  std::span<const Index> dofs(Index triangle) const { return dof_map_[triangle]; }
  // +1 when the edge's global normal points out of this triangle, else -1.
  std::span<const std::int8_t> normal_orientation(Index triangle) const {
    return normal_sign_[triangle];
  }
  Eigen::Vector2d edge_normal(Index edge) const { return edge_normal_[edge]; }

  bool constrained(Index raw) const { return constrained_[raw] != 0; }
  // Position in the free DOF vector, or -1 for a constrained DOF.
  std::span<const Index> raw_to_free() const noexcept { return raw_to_free_; }
  std::span<const Index> free_to_raw() const noexcept { return free_to_raw_; }

  void evaluate_basis(Index triangle, const Eigen::Vector2d& p, ArgyrisBasisValues& out) const;

  // The 21 DOF functionals of `triangle` applied to f.
  Eigen::Matrix<double, 21, 1> local_functionals(Index triangle, const PlateFunction& f) const;

  // Restriction of raw-indexed objects to the free DOFs and back.
  SparseMatrix reduce(const SparseMatrix& raw) const;
  std::vector<double> reduce(std::span<const double> raw) const;
  std::vector<double> expand(std::span<const double> free) const;

 private:
  Mesh2 mesh_;
  Index num_raw_ = 0;
  std::vector<std::array<Index, 21>> dof_map_;
  std::vector<std::array<std::int8_t, 3>> normal_sign_;
  std::vector<Eigen::Vector2d> edge_normal_;
  std::vector<Eigen::Matrix<double, 21, 21>> coeff_;
  std::vector<Eigen::Vector2d> center_;
  std::vector<double> scale_;
  std::vector<char> constrained_;
  std::vector<Index> raw_to_free_;
  std::vector<Index> free_to_raw_;
};

// A piecewise quintic field stored by raw DOF coefficients.
class PlateField {
 public:
  PlateField(const ArgyrisSpace& space, std::vector<double> raw_coeffs);
  static PlateField zero(const ArgyrisSpace& space);
  static PlateField from_free(const ArgyrisSpace& space, std::span<const double> free);

  const ArgyrisSpace& space() const noexcept { return *space_; }
  std::span<const double> coeffs() const noexcept { return coeffs_; }
  std::vector<double> free_coeffs() const { return space_->reduce(coeffs_); }

  // Throws InvalidArgument when p lies outside the square.
  Jet2 evaluate(const Eigen::Vector2d& p) const;
  Jet2 evaluate_in(Index triangle, const Eigen::Vector2d& p) const;

  // Largest |coefficient| over constrained DOFs.
  double constraint_violation() const;

 private:
  const ArgyrisSpace* space_;
  std::vector<double> coeffs_;
};

// Argyris interpolant: every raw DOF functional applied to f. With
// `clamp` set, constrained DOFs are zeroed afterwards.
PlateField interpolate(const ArgyrisSpace& space, const PlateFunction& f, bool clamp = true);

// Raw-indexed matrices of (lap u, lap v), (u, v) + rho (grad u, grad v).
SparseMatrix assemble_bending(const ArgyrisSpace& space);
SparseMatrix assemble_mass_rho(const ArgyrisSpace& space, double rho);

// Raw-indexed vector of (g, phi_i) + rho (grad g, grad phi_i).
std::vector<double> assemble_load(const ArgyrisSpace& space, const PlateFunction& g, double rho = 0.0,
                                  int degree = 10);
// Raw-indexed vector of the integrals of the basis functions.
std::vector<double> basis_integrals(const ArgyrisSpace& space);

// Integral of a field over the square.
double integrate(const PlateField& field);

// Clamped solution of lap^2 xi = 1, computed as the energy projection.
PlateField solve_xi(const ArgyrisSpace& space);
// |lap xi_h|_{L2}, the discrete inf-sup witness.
double discrete_infsup_constant(const ArgyrisSpace& space);

struct GridSample {
  double x, y, value;
};
// Values of the field on an (n+1) x (n+1) uniform grid, x-major.
std::vector<GridSample> sample_grid(const PlateField& field, int n);

}  // namespace fsi
