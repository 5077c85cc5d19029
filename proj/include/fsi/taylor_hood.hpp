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
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "fsi/mesh.hpp"
#include "fsi/sparse.hpp"

namespace fsi {

enum class NodeClass : std::uint8_t { Interior = 0, Omega = 1, S = 2 };

// Continuous P2 velocity / P1 pressure on a tetrahedral mesh of the cube.
//
// Velocity nodes are the mesh vertices (ids 0 .. nv-1) followed by the edge
// midpoints (id nv + edge). Velocity DOF 3*node + c is component c at that
// node. Pressure DOFs are the vertices.
class TaylorHoodSpace {
 public:
  explicit TaylorHoodSpace(Mesh3 mesh);

  const Mesh3& mesh() const noexcept { return mesh_; }
  Index num_nodes() const noexcept { return mesh_.num_vertices() + mesh_.num_edges(); }
  Index num_velocity_dofs() const noexcept { return 3 * num_nodes(); }
  Index num_pressure_dofs() const noexcept { return mesh_.num_vertices(); }

  Eigen::Vector3d node_position(Index node) const;
  NodeClass node_class(Index node) const { return node_class_[node]; }
  // Nodes in the open plate region z = 0, in increasing id order.
  std::span<const Index> omega_nodes() const noexcept { return omega_nodes_; }

  // Vertices 0..3 then edge nodes in the mesh's local edge order.
  std::array<Index, 10> element_nodes(Index tet) const;
  // Gradients of the four barycentric coordinates (rows).
  const Eigen::Matrix<double, 4, 3>& barycentric_gradients(Index tet) const { return grad_bary_[tet]; }

  // P2 shape values and gradients at a point given in barycentric form.
  void p2_basis(Index tet, const std::array<double, 4>& bary, Eigen::Matrix<double, 10, 1>& value,
                Eigen::Matrix<double, 10, 3>& grad) const;
  Eigen::Vector3d point(Index tet, const std::array<double, 4>& bary) const;

  double volume() const noexcept { return volume_; }

 private:
  Mesh3 mesh_;
  std::vector<NodeClass> node_class_;
  std::vector<Index> omega_nodes_;
  std::vector<Eigen::Matrix<double, 4, 3>> grad_bary_;
  double volume_ = 0.0;
};

class FluidField {
 public:
  FluidField(const TaylorHoodSpace& space, std::vector<double> coeffs);
  static FluidField zero(const TaylorHoodSpace& space);

  const TaylorHoodSpace& space() const noexcept { return *space_; }
  std::span<const double> coeffs() const noexcept { return coeffs_; }
  std::span<double> coeffs() noexcept { return coeffs_; }
  Eigen::Vector3d node_value(Index node) const;

  // Value and Jacobian (row = component) inside a tetrahedron.
  void evaluate(Index tet, const std::array<double, 4>& bary, Eigen::Vector3d& value,
                Eigen::Matrix3d& jacobian) const;

 private:
  const TaylorHoodSpace* space_;
  std::vector<double> coeffs_;
};

class PressureField {
 public:
  PressureField(const TaylorHoodSpace& space, std::vector<double> coeffs, bool mean_zero);

  const TaylorHoodSpace& space() const noexcept { return *space_; }
  std::span<const double> coeffs() const noexcept { return coeffs_; }
  bool mean_zero() const noexcept { return mean_zero_; }

  double integral() const;
  double evaluate(Index tet, const std::array<double, 4>& bary) const;
  void add_constant(double c);
  void project_mean_zero();

 private:
  const TaylorHoodSpace* space_;
  std::vector<double> coeffs_;
  bool mean_zero_;
};

struct StokesForms {
  SparseMatrix a;                 // lambda (u, v) + (grad u, grad v), all velocity DOFs
  SparseMatrix b;                 // -(div u, q), pressure rows by velocity columns
  std::vector<double> moments;    // integral of each pressure basis function
};

// Forms assembled with the degree-4 tetrahedral rule. Throws InvalidArgument
// unless lambda > 0.
StokesForms assemble_stokes_forms(const TaylorHoodSpace& space, double lambda);

// Velocity load vector (f, phi_i) for a volume force.
using VectorFunction3 = std::function<Eigen::Vector3d(const Eigen::Vector3d&)>;
std::vector<double> assemble_velocity_load(const TaylorHoodSpace& space, const VectorFunction3& f,
                                           int degree = 6);

struct StokesSolution {
  FluidField velocity;
  PressureField pressure;
  // Lagrange multiplier of the mean-zero pressure constraint.
  double multiplier = 0.0;
};

// Factorizes the Stokes saddle system with Dirichlet velocity on the whole
// boundary and a mean-zero pressure constraint, once per (space, lambda).
class StokesSolver {
 public:
  StokesSolver(const TaylorHoodSpace& space, double lambda);
  ~StokesSolver();
  StokesSolver(StokesSolver&&) noexcept;
  StokesSolver& operator=(StokesSolver&&) noexcept;

  const TaylorHoodSpace& space() const noexcept { return *space_; }
  double lambda() const noexcept { return lambda_; }
  const StokesForms& forms() const noexcept { return forms_; }
  Index num_unknowns() const noexcept;

  // Finds u with u = g on boundary nodes such that
  //   a(u, v) + b(v, p) = (load, v)      for interior test functions v,
  //   b(u, q) = -datum (1, q)            for all q, modulo the constant
  // mode absorbed by the multiplier, and p has zero mean. `boundary` and
  // `load` are velocity-sized; only boundary rows of `boundary` and
  // interior rows of `load` are read.
  StokesSolution solve(std::span<const double> boundary, std::span<const double> load, double datum) const;

 private:
  const TaylorHoodSpace* space_;
  double lambda_;
  StokesForms forms_;
  std::vector<Index> vel_to_free_;
  std::vector<Index> free_to_vel_;
  std::unique_ptr<SparseLu> lu_;
};

// Plate data seen by the fluid: pointwise values on z = 0 and the integral
// over the plate.
struct PlateTrace {
  std::function<double(double, double)> value;
  double integral = 0.0;
};

// Zero extension of [0, 0, phi] on the plate nodes.
FluidField lift_trace(const TaylorHoodSpace& space, const std::function<double(double, double)>& phi);

// Discrete solution map for trace data: velocity (lifting included) and
// mean-zero pressure.
StokesSolution solve_map_f(const StokesSolver& solver, const PlateTrace& phi);
// Discrete solution map for a volume force with homogeneous velocity data.
StokesSolution solve_map_mu(const StokesSolver& solver, const VectorFunction3& ustar);

}  // namespace fsi
