/*
  This file is part of fsi-resolvent, a mixed finite element solver for a
  Stokes fluid coupled to a clamped plate.

  Licensed under the Apache License, Version 2.0 (the "License"); you may
  not use this file except in compliance with the License.  You may obtain
  a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0
*/

#include "fsi/coupled.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <Eigen/SparseCore>

#include "fsi/error.hpp"

namespace fsi {
namespace {

Eigen::Map<const Eigen::VectorXd> view(std::span<const double> v) {
  return {v.data(), static_cast<Eigen::Index>(v.size())};
}

Jet2 zero_jet(const Eigen::Vector2d&) { return Jet2{}; }

}  // namespace

void ResolventData::validate() const {
  if (!(lambda > 0.0)) throw InvalidArgument("ResolventData: lambda must be positive");
  if (!(rho >= 0.0)) throw InvalidArgument("ResolventData: rho must be nonnegative");
  if (!w1_star || !u_star) throw InvalidArgument("ResolventData: w1_star and u_star are required");
  if (!w2_star && !plate_load) throw InvalidArgument("ResolventData: either w2_star or plate_load is required");
}

ResolventData ResolventData::zero(double lambda, double rho) {
  ResolventData d;
  d.lambda = lambda;
  d.rho = rho;
  d.w1_star = zero_jet;
  d.w2_star = zero_jet;
  d.u_star = [](const Eigen::Vector3d&) { return Eigen::Vector3d::Zero().eval(); };
  return d;
}

SaddleSystem ReducedSystem::to_saddle() const {
  const Index n = static_cast<Index>(a.rows());
  std::vector<Triplet> ta, tb;
  ta.reserve(static_cast<std::size_t>(n) * n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (a(i, j) != 0.0) ta.push_back({i, j, a(i, j)});
  for (Index i = 0; i < n; ++i)
    if (b[i] != 0.0) tb.push_back({0, i, b[i]});
  SaddleSystem s;
  s.a = SparseMatrix::from_triplets(n, n, ta, true);
  s.b = SparseMatrix::from_triplets(1, n, tb, false);
  s.rhs_f.assign(f.data(), f.data() + n);
  s.rhs_g = {0.0};
  return s;
}

// ---------------------------------------------------------------------------

FluidCache::FluidCache(const ArgyrisSpace& plate, const TaylorHoodSpace& fluid, double lambda)
    : plate_(&plate), fluid_(&fluid), solver_(fluid, lambda) {
  const auto nodes = fluid.omega_nodes();
  const Index nt = static_cast<Index>(nodes.size());
  const Index nvel = fluid.num_velocity_dofs();
  const Index np = fluid.num_pressure_dofs();

  trace_ = Eigen::MatrixXd::Zero(nt, plate.num_free_dofs());
  ArgyrisBasisValues bv;
  const auto r2f = plate.raw_to_free();
  for (Index k = 0; k < nt; ++k) {
    const Eigen::Vector3d x = fluid.node_position(nodes[k]);
    const Eigen::Vector2d p(x.x(), x.y());
    const auto loc = plate.mesh().locate(p);
    if (!loc) throw InvalidArgument("FluidCache: plate node outside the plate mesh");
    plate.evaluate_basis(loc->triangle, p, bv);
    const auto dofs = plate.dofs(loc->triangle);
    for (int i = 0; i < ArgyrisSpace::kLocalDofs; ++i)
      if (r2f[dofs[i]] >= 0) trace_(k, r2f[dofs[i]]) += bv.value[i];
  }

  // A unit trace has no meaningful plate integral; the divergence datum only
  // moves the mean-zero multiplier, so it is left at zero here.
  velocity_.resize(nvel, nt);
  pressure_.resize(np, nt);
  std::vector<double> g(nvel, 0.0);
  const std::vector<double> zero(nvel, 0.0);
  for (Index k = 0; k < nt; ++k) {
    g[3 * nodes[k] + 2] = 1.0;
    const StokesSolution s = solver_.solve(g, zero, 0.0);
    g[3 * nodes[k] + 2] = 0.0;
    velocity_.col(k) = view(s.velocity.coeffs());
    pressure_.col(k) = view(s.pressure.coeffs());
  }

  const Eigen::SparseMatrix<double> a = solver_.forms().a.to_eigen();
  energy_.resize(nt, nt);
  constexpr Index kBlock = 64;
  for (Index c0 = 0; c0 < nt; c0 += kBlock) {
    const Index w = std::min(kBlock, nt - c0);
    const Eigen::MatrixXd y = a * velocity_.middleCols(c0, w);
    energy_.middleCols(c0, w).noalias() = velocity_.transpose() * y;
  }
  energy_ = 0.5 * (energy_ + energy_.transpose()).eval();
}

std::vector<double> FluidCache::map_velocity(const Eigen::VectorXd& nodal) const {
  if (nodal.size() != velocity_.cols()) throw InvalidArgument("FluidCache::map_velocity: wrong number of nodal values");
  const Eigen::VectorXd u = velocity_ * nodal;
  return {u.data(), u.data() + u.size()};
}

// ---------------------------------------------------------------------------

CoupledSolver::CoupledSolver(const ArgyrisSpace& plate, const TaylorHoodSpace& fluid, double lambda, double rho,
                             CoupledOptions options)
    : plate_(&plate), fluid_(&fluid), lambda_(lambda), rho_(rho), options_(options) {
  if (!(lambda > 0.0)) throw InvalidArgument("CoupledSolver: lambda must be positive");
  if (!(rho >= 0.0)) throw InvalidArgument("CoupledSolver: rho must be nonnegative");
  cache_ = std::make_unique<FluidCache>(plate, fluid, lambda);
  bending_ = plate.reduce(assemble_bending(plate));
  mass_rho_ = plate.reduce(assemble_mass_rho(plate, rho));
  const std::vector<double> integrals = plate.reduce(basis_integrals(plate));
  integrals_ = view(integrals);
}

CoupledSolver::~CoupledSolver() = default;

DataCache CoupledSolver::prepare(const ResolventData& data) const {
  data.validate();
  if (data.lambda != lambda_ || data.rho != rho_)
    throw InvalidArgument("CoupledSolver: data were built for a different lambda or rho");
  const TaylorHoodSpace& fluid = *fluid_;
  const Index nvel = fluid.num_velocity_dofs();

  const PlateField w1s = interpolate(*plate_, data.w1_star, true);
  const std::vector<double> w1s_free = w1s.free_coeffs();
  const Eigen::VectorXd w1_star_free = view(w1s_free);
  std::vector<double> f_w1 = cache_->map_velocity(cache_->trace() * w1_star_free);

  std::vector<double> load = assemble_velocity_load(fluid, data.u_star, options_.fluid_load_degree);
  const std::vector<double> zero(nvel, 0.0);
  StokesSolution mu = cache_->solver().solve(zero, load, 0.0);

  std::vector<double> diff(nvel);
  for (Index i = 0; i < nvel; ++i) diff[i] = f_w1[i] - mu.velocity.coeffs()[i];
  const std::vector<double> adiff = cache_->solver().forms().a.multiply(diff);
  Eigen::VectorXd fluid_pairing = view(adiff) + view(load);

  std::vector<double> pl;
  if (data.plate_load) {
    pl = assemble_load(*plate_, data.plate_load, 0.0, options_.plate_load_degree);
  } else {
    const double lam = data.lambda;
    const PlateFunction g = [&data, lam](const Eigen::Vector2d& p) {
      const Jet2 a = data.w1_star(p);
      const Jet2 b = data.w2_star(p);
      return Jet2{lam * a.value + b.value, lam * a.grad + b.grad, lam * a.hess + b.hess};
    };
    pl = assemble_load(*plate_, g, data.rho, options_.plate_load_degree);
  }
  const std::vector<double> pl_free = plate_->reduce(pl);
  return DataCache{w1_star_free, std::move(f_w1), std::move(mu), std::move(load), std::move(fluid_pairing),
                   view(pl_free)};
}

ReducedSystem CoupledSolver::assemble(const DataCache& dc) const {
  ReducedSystem rs;
  const double l2 = lambda_ * lambda_;
  rs.a = l2 * mass_rho_.to_dense() + bending_.to_dense();
  rs.b = -integrals_;
  rs.f = dc.plate_pairing;
  if (options_.include_fluid) {
    const Eigen::MatrixXd& t = cache_->trace();
    rs.a.noalias() += lambda_ * (t.transpose() * (cache_->energy() * t));
    rs.f.noalias() += t.transpose() * (cache_->velocity_response().transpose() * dc.fluid_pairing);
  }
  rs.a = 0.5 * (rs.a + rs.a.transpose()).eval();
  return rs;
}

double CoupledSolver::apply_F(const DataCache& dc, const PlateField& phi) const {
  const std::vector<double> free = phi.free_coeffs();
  const Eigen::VectorXd c = view(free);
  double value = c.dot(dc.plate_pairing);
  if (options_.include_fluid) {
    const std::vector<double> v = cache_->map_velocity(cache_->trace() * c);
    value += view(v).dot(dc.fluid_pairing);
  }
  return value;
}

CoupledSolution CoupledSolver::solve(const ResolventData& data) const {
  const DataCache dc = prepare(data);
  const ReducedSystem rs = assemble(dc);
  const Eigen::Index n = rs.a.rows();

  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n + 1, n + 1);
  k.topLeftCorner(n, n) = rs.a;
  k.topRightCorner(n, 1) = rs.b;
  k.bottomLeftCorner(1, n) = rs.b.transpose();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
  rhs.head(n) = rs.f;
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(k);
  const Eigen::VectorXd x = lu.solve(rhs);
  if (!x.allFinite()) throw SingularMatrix("solve_resolvent: reduced saddle system is singular", -1);

  // Elimination of the scalar multiplier through a Cholesky factor of A.
  const Eigen::LLT<Eigen::MatrixXd> llt(rs.a);
  if (llt.info() != Eigen::Success) throw SolverError("solve_resolvent: reduced plate matrix is not positive definite");
  const Eigen::VectorXd yf = llt.solve(rs.f);
  const Eigen::VectorXd yb = llt.solve(rs.b);
  const double c_schur = rs.b.dot(yf) / rs.b.dot(yb);
  Eigen::VectorXd xs(n + 1);
  xs.head(n) = yf - c_schur * yb;
  xs[n] = c_schur;

  const Eigen::VectorXd alpha = x.head(n);
  const double c = x[n];
  const double scale = std::max(x.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());

  const Eigen::VectorXd w2 = lambda_ * alpha - dc.w1_star_free;
  const Eigen::VectorXd nodal = cache_->trace() * w2;
  std::vector<double> u = cache_->map_velocity(nodal);
  for (std::size_t i = 0; i < u.size(); ++i) u[i] += dc.mu.velocity.coeffs()[i];
  const Eigen::VectorXd p = cache_->pressure_response() * nodal + view(dc.mu.pressure.coeffs());
  std::vector<double> pv(p.data(), p.data() + p.size());
  PressureField ph(*fluid_, std::move(pv), true);
  ph.add_constant(c);

  const std::vector<double> a(alpha.data(), alpha.data() + n);
  const std::vector<double> b(w2.data(), w2.data() + n);
  return CoupledSolution{PlateField::from_free(*plate_, a), PlateField::from_free(*plate_, b),
                         FluidField(*fluid_, std::move(u)), std::move(ph), c, (x - xs).cwiseAbs().maxCoeff() / scale};
}

ReducedSystem assemble_reduced_system(const CoupledSolver& solver, const ResolventData& data) {
  return solver.assemble(solver.prepare(data));
}

CoupledSolution solve_resolvent(const CoupledSolver& solver, const ResolventData& data) { return solver.solve(data); }

}  // namespace fsi
