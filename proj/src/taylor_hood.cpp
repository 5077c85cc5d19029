/*
  This file is part of fsi-resolvent, a mixed finite element solver for a
  Stokes fluid coupled to a clamped plate.

  Licensed under the Apache License, Version 2.0 (the "License"); you may
  not use this file except in compliance with the License.  You may obtain
  a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0
*/

#include "fsi/taylor_hood.hpp"

#include <cmath>
#include <string>

#include <Eigen/LU>

#include "fsi/error.hpp"
#include "fsi/quadrature.hpp"

namespace fsi {
namespace {

constexpr int kEdgeEnds[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};

}  // namespace

TaylorHoodSpace::TaylorHoodSpace(Mesh3 mesh) : mesh_(std::move(mesh)) {
  const Index nv = mesh_.num_vertices();
  const Index nn = num_nodes();
  const int top = 4 * mesh_.level();

  // Node positions on the lattice of spacing 1/(4 level).
  auto node_lattice = [&](Index node) {
    std::array<int, 3> l{};
    if (node < nv) {
      for (int c = 0; c < 3; ++c) l[c] = 2 * mesh_.lattice()[node][c];
    } else {
      const auto [a, b] = mesh_.edges()[node - nv];
      for (int c = 0; c < 3; ++c) l[c] = mesh_.lattice()[a][c] + mesh_.lattice()[b][c];
    }
    return l;
  };

  node_class_.resize(nn);
  for (Index n = 0; n < nn; ++n) {
    const auto l = node_lattice(n);
    const bool boundary = l[0] == 0 || l[0] == top || l[1] == 0 || l[1] == top || l[2] == 0 || l[2] == top;
    if (!boundary) {
      node_class_[n] = NodeClass::Interior;
    } else if (l[2] == top && l[0] > 0 && l[0] < top && l[1] > 0 && l[1] < top) {
      node_class_[n] = NodeClass::Omega;
      omega_nodes_.push_back(n);
    } else {
      node_class_[n] = NodeClass::S;
    }
  }

  grad_bary_.resize(mesh_.num_tets());
  for (Index t = 0; t < mesh_.num_tets(); ++t) {
    const auto& tet = mesh_.tets()[t];
    const auto v = mesh_.vertices();
    Eigen::Matrix3d j;
    j.col(0) = v[tet[1]] - v[tet[0]];
    j.col(1) = v[tet[2]] - v[tet[0]];
    j.col(2) = v[tet[3]] - v[tet[0]];
    const double det = j.determinant();
    if (!(det > 0.0)) throw InvalidArgument("TaylorHoodSpace: tetrahedron " + std::to_string(t) + " is degenerate");
    const Eigen::Matrix3d inv = j.inverse();
    grad_bary_[t].row(1) = inv.row(0);
    grad_bary_[t].row(2) = inv.row(1);
    grad_bary_[t].row(3) = inv.row(2);
    grad_bary_[t].row(0) = -(inv.row(0) + inv.row(1) + inv.row(2));
    volume_ += det / 6.0;
  }
}

Eigen::Vector3d TaylorHoodSpace::node_position(Index node) const {
  const Index nv = mesh_.num_vertices();
  if (node < nv) return mesh_.vertices()[node];
  const auto [a, b] = mesh_.edges()[node - nv];
  return 0.5 * (mesh_.vertices()[a] + mesh_.vertices()[b]);
}

std::array<Index, 10> TaylorHoodSpace::element_nodes(Index t) const {
  std::array<Index, 10> out{};
  const auto& tet = mesh_.tets()[t];
  const auto& te = mesh_.tet_edges()[t];
  for (int k = 0; k < 4; ++k) out[k] = tet[k];
  for (int k = 0; k < 6; ++k) out[4 + k] = mesh_.num_vertices() + te[k];
  return out;
}

void TaylorHoodSpace::p2_basis(Index t, const std::array<double, 4>& l, Eigen::Matrix<double, 10, 1>& value,
                               Eigen::Matrix<double, 10, 3>& grad) const {
  const auto& g = grad_bary_[t];
  for (int k = 0; k < 4; ++k) {
    value[k] = l[k] * (2.0 * l[k] - 1.0);
    grad.row(k) = (4.0 * l[k] - 1.0) * g.row(k);
  }
  for (int k = 0; k < 6; ++k) {
    const int a = kEdgeEnds[k][0];
    const int b = kEdgeEnds[k][1];
    value[4 + k] = 4.0 * l[a] * l[b];
    grad.row(4 + k) = 4.0 * (l[a] * g.row(b) + l[b] * g.row(a));
  }
}

Eigen::Vector3d TaylorHoodSpace::point(Index t, const std::array<double, 4>& l) const {
  const auto& tet = mesh_.tets()[t];
  const auto v = mesh_.vertices();
  return l[0] * v[tet[0]] + l[1] * v[tet[1]] + l[2] * v[tet[2]] + l[3] * v[tet[3]];
}

// ---------------------------------------------------------------------------

FluidField::FluidField(const TaylorHoodSpace& space, std::vector<double> coeffs)
    : space_(&space), coeffs_(std::move(coeffs)) {
  if (static_cast<Index>(coeffs_.size()) != space.num_velocity_dofs())
    throw InvalidArgument("FluidField: coefficient vector has the wrong length");
}

FluidField FluidField::zero(const TaylorHoodSpace& space) {
  return FluidField(space, std::vector<double>(space.num_velocity_dofs(), 0.0));
}

Eigen::Vector3d FluidField::node_value(Index node) const {
  return {coeffs_[3 * node], coeffs_[3 * node + 1], coeffs_[3 * node + 2]};
}

void FluidField::evaluate(Index t, const std::array<double, 4>& bary, Eigen::Vector3d& value,
                          Eigen::Matrix3d& jacobian) const {
  Eigen::Matrix<double, 10, 1> phi;
  Eigen::Matrix<double, 10, 3> dphi;
  space_->p2_basis(t, bary, phi, dphi);
  const auto nodes = space_->element_nodes(t);
  Eigen::Matrix<double, 3, 10> c;
  for (int k = 0; k < 10; ++k) c.col(k) = node_value(nodes[k]);
  value = c * phi;
  jacobian = c * dphi;
}

PressureField::PressureField(const TaylorHoodSpace& space, std::vector<double> coeffs, bool mean_zero)
    : space_(&space), coeffs_(std::move(coeffs)), mean_zero_(mean_zero) {
  if (static_cast<Index>(coeffs_.size()) != space.num_pressure_dofs())
    throw InvalidArgument("PressureField: coefficient vector has the wrong length");
}

double PressureField::integral() const {
  const Mesh3& m = space_->mesh();
  double s = 0.0;
  for (Index t = 0; t < m.num_tets(); ++t) {
    const auto& tet = m.tets()[t];
    s += 0.25 * m.volume(t) * (coeffs_[tet[0]] + coeffs_[tet[1]] + coeffs_[tet[2]] + coeffs_[tet[3]]);
  }
  return s;
}

double PressureField::evaluate(Index t, const std::array<double, 4>& bary) const {
  const auto& tet = space_->mesh().tets()[t];
  return bary[0] * coeffs_[tet[0]] + bary[1] * coeffs_[tet[1]] + bary[2] * coeffs_[tet[2]] +
         bary[3] * coeffs_[tet[3]];
}

void PressureField::add_constant(double c) {
  for (double& v : coeffs_) v += c;
  mean_zero_ = false;
}

void PressureField::project_mean_zero() {
  const double mean = integral() / space_->volume();
  for (double& v : coeffs_) v -= mean;
  mean_zero_ = true;
}

// ---------------------------------------------------------------------------

StokesForms assemble_stokes_forms(const TaylorHoodSpace& space, double lambda) {
  if (!(lambda > 0.0)) throw InvalidArgument("assemble_stokes_forms: lambda must be positive");
  const Mesh3& mesh = space.mesh();
  const QuadratureRule rule = quadrature_tet(4);
  const Index nvel = space.num_velocity_dofs();
  const Index np = space.num_pressure_dofs();

  std::vector<Triplet> ta, tb;
  ta.reserve(static_cast<std::size_t>(mesh.num_tets()) * 300);
  tb.reserve(static_cast<std::size_t>(mesh.num_tets()) * 120);
  StokesForms out;
  out.moments.assign(np, 0.0);

  Eigen::Matrix<double, 10, 1> phi;
  Eigen::Matrix<double, 10, 3> dphi;
  for (Index t = 0; t < mesh.num_tets(); ++t) {
    const double jac = 6.0 * mesh.volume(t);
    Eigen::Matrix<double, 10, 10> local = Eigen::Matrix<double, 10, 10>::Zero();
    // div coupling: rows pressure vertex, columns (node, component)
    Eigen::Matrix<double, 4, 30> lb = Eigen::Matrix<double, 4, 30>::Zero();
    for (std::size_t q = 0; q < rule.size(); ++q) {
      space.p2_basis(t, rule.barycentric[q], phi, dphi);
      const double w = rule.weights[q] * jac;
      local.noalias() += w * (lambda * phi * phi.transpose() + dphi * dphi.transpose());
      for (int a = 0; a < 4; ++a) {
        const double psi = rule.barycentric[q][a];
        for (int k = 0; k < 10; ++k)
          for (int c = 0; c < 3; ++c) lb(a, 3 * k + c) -= w * psi * dphi(k, c);
      }
    }
    const auto nodes = space.element_nodes(t);
    const auto& tet = mesh.tets()[t];
    for (int i = 0; i < 10; ++i)
      for (int j = 0; j < 10; ++j)
        for (int c = 0; c < 3; ++c) ta.push_back({3 * nodes[i] + c, 3 * nodes[j] + c, local(i, j)});
    for (int a = 0; a < 4; ++a) {
      out.moments[tet[a]] += 0.25 * mesh.volume(t);
      for (int k = 0; k < 10; ++k)
        for (int c = 0; c < 3; ++c) tb.push_back({tet[a], 3 * nodes[k] + c, lb(a, 3 * k + c)});
    }
  }
  out.a = SparseMatrix::from_triplets(nvel, nvel, ta, true);
  out.b = SparseMatrix::from_triplets(np, nvel, tb, false);
  return out;
}

std::vector<double> assemble_velocity_load(const TaylorHoodSpace& space, const VectorFunction3& f, int degree) {
  const Mesh3& mesh = space.mesh();
  const QuadratureRule rule = quadrature_tet(degree);
  std::vector<double> out(space.num_velocity_dofs(), 0.0);
  Eigen::Matrix<double, 10, 1> phi;
  Eigen::Matrix<double, 10, 3> dphi;
  for (Index t = 0; t < mesh.num_tets(); ++t) {
    const double jac = 6.0 * mesh.volume(t);
    Eigen::Matrix<double, 10, 3> local = Eigen::Matrix<double, 10, 3>::Zero();
    for (std::size_t q = 0; q < rule.size(); ++q) {
      space.p2_basis(t, rule.barycentric[q], phi, dphi);
      const Eigen::Vector3d v = f(space.point(t, rule.barycentric[q]));
      local.noalias() += (rule.weights[q] * jac) * phi * v.transpose();
    }
    const auto nodes = space.element_nodes(t);
    for (int k = 0; k < 10; ++k)
      for (int c = 0; c < 3; ++c) out[3 * nodes[k] + c] += local(k, c);
  }
  return out;
}

// ---------------------------------------------------------------------------

StokesSolver::StokesSolver(const TaylorHoodSpace& space, double lambda)
    : space_(&space), lambda_(lambda), forms_(assemble_stokes_forms(space, lambda)) {
  const Index nvel = space.num_velocity_dofs();
  const Index np = space.num_pressure_dofs();
  vel_to_free_.assign(nvel, -1);
  for (Index n = 0; n < space.num_nodes(); ++n)
    if (space.node_class(n) == NodeClass::Interior)
      for (int c = 0; c < 3; ++c) {
        vel_to_free_[3 * n + c] = static_cast<Index>(free_to_vel_.size());
        free_to_vel_.push_back(3 * n + c);
      }
  const Index nf = static_cast<Index>(free_to_vel_.size());

  std::vector<Triplet> t;
  t.reserve(forms_.a.nnz() + 2 * forms_.b.nnz() + 2 * np);
  const SparseMatrix& a = forms_.a;
  for (Index i = 0; i < nvel; ++i) {
    const Index fi = vel_to_free_[i];
    if (fi < 0) continue;
    for (Index k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k) {
      const Index fj = vel_to_free_[a.col_idx()[k]];
      if (fj >= 0) t.push_back({fi, fj, a.values()[k]});
    }
  }
  const SparseMatrix& b = forms_.b;
  for (Index r = 0; r < np; ++r) {
    for (Index k = b.row_ptr()[r]; k < b.row_ptr()[r + 1]; ++k) {
      const Index fj = vel_to_free_[b.col_idx()[k]];
      if (fj < 0) continue;
      t.push_back({nf + r, fj, b.values()[k]});
      t.push_back({fj, nf + r, b.values()[k]});
    }
    t.push_back({nf + r, nf + np, forms_.moments[r]});
    t.push_back({nf + np, nf + r, forms_.moments[r]});
  }
  const Index n = nf + np + 1;
  lu_ = std::make_unique<SparseLu>(SparseMatrix::from_triplets(n, n, t, true));
}

StokesSolver::~StokesSolver() = default;
StokesSolver::StokesSolver(StokesSolver&&) noexcept = default;
StokesSolver& StokesSolver::operator=(StokesSolver&&) noexcept = default;

Index StokesSolver::num_unknowns() const noexcept { return lu_->size(); }

StokesSolution StokesSolver::solve(std::span<const double> boundary, std::span<const double> load,
                                   double datum) const {
  const Index nvel = space_->num_velocity_dofs();
  const Index np = space_->num_pressure_dofs();
  const Index nf = static_cast<Index>(free_to_vel_.size());
  if (static_cast<Index>(boundary.size()) != nvel || static_cast<Index>(load.size()) != nvel)
    throw InvalidArgument("StokesSolver::solve: velocity-sized vectors expected");

  std::vector<double> g(nvel, 0.0);
  for (Index i = 0; i < nvel; ++i)
    if (vel_to_free_[i] < 0) g[i] = boundary[i];
  const std::vector<double> ag = forms_.a.multiply(g);
  const std::vector<double> bg = forms_.b.multiply(g);

  std::vector<double> rhs(nf + np + 1, 0.0);
  for (Index k = 0; k < nf; ++k) rhs[k] = load[free_to_vel_[k]] - ag[free_to_vel_[k]];
  for (Index r = 0; r < np; ++r) rhs[nf + r] = -datum * forms_.moments[r] - bg[r];

  const std::vector<double> x = lu_->solve(rhs);
  for (Index k = 0; k < nf; ++k) g[free_to_vel_[k]] = x[k];
  std::vector<double> p(x.begin() + nf, x.begin() + nf + np);
  return StokesSolution{FluidField(*space_, std::move(g)), PressureField(*space_, std::move(p), true), x[nf + np]};
}

FluidField lift_trace(const TaylorHoodSpace& space, const std::function<double(double, double)>& phi) {
  FluidField u = FluidField::zero(space);
  for (Index n : space.omega_nodes()) {
    const Eigen::Vector3d x = space.node_position(n);
    u.coeffs()[3 * n + 2] = phi(x.x(), x.y());
  }
  return u;
}

StokesSolution solve_map_f(const StokesSolver& solver, const PlateTrace& phi) {
  const TaylorHoodSpace& space = solver.space();
  const FluidField lift = lift_trace(space, phi.value);
  const std::vector<double> zero(space.num_velocity_dofs(), 0.0);
  return solver.solve(lift.coeffs(), zero, phi.integral / space.volume());
}

StokesSolution solve_map_mu(const StokesSolver& solver, const VectorFunction3& ustar) {
  const TaylorHoodSpace& space = solver.space();
  const std::vector<double> load = assemble_velocity_load(space, ustar, 6);
  const std::vector<double> zero(space.num_velocity_dofs(), 0.0);
  return solver.solve(zero, load, 0.0);
}

}  // namespace fsi
