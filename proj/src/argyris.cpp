/*
  This file is part of fsi-resolvent, a mixed finite element solver for a
  Stokes fluid coupled to a clamped plate.

  Licensed under the Apache License, Version 2.0 (the "License"); you may
  not use this file except in compliance with the License.  You may obtain
  a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0
*/

#include "fsi/argyris.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/LU>

#include "fsi/error.hpp"
#include "fsi/quadrature.hpp"

namespace fsi {
namespace {

using Vec21 = Eigen::Matrix<double, 21, 1>;

struct Exponents {
  std::array<std::array<int, 2>, 21> ab{};
  Exponents() {
    int k = 0;
    for (int deg = 0; deg <= 5; ++deg)
      for (int a = deg; a >= 0; --a) ab[k++] = {a, deg - a};
  }
};
const Exponents kExp;

// Scaled monomials s^a t^b and their derivatives with respect to s and t.
struct MonomialJet {
  Vec21 v, ds, dt, dss, dst, dtt;
};

void monomial_jet(double s, double t, MonomialJet& m) {
  double ps[6], pt[6];
  ps[0] = pt[0] = 1.0;
  for (int k = 1; k < 6; ++k) {
    ps[k] = ps[k - 1] * s;
    pt[k] = pt[k - 1] * t;
  }
  auto pw = [](const double* p, int e) { return e < 0 ? 0.0 : p[e]; };
  for (int k = 0; k < 21; ++k) {
    const int a = kExp.ab[k][0];
    const int b = kExp.ab[k][1];
    m.v[k] = ps[a] * pt[b];
    m.ds[k] = a * pw(ps, a - 1) * pt[b];
    m.dt[k] = b * ps[a] * pw(pt, b - 1);
    m.dss[k] = a * (a - 1) * pw(ps, a - 2) * pt[b];
    m.dst[k] = a * b * pw(ps, a - 1) * pw(pt, b - 1);
    m.dtt[k] = b * (b - 1) * ps[a] * pw(pt, b - 2);
  }
}

Eigen::Vector2d point_of(const Mesh2& mesh, Index t, const std::array<double, 4>& bary) {
  const auto& tri = mesh.triangles()[t];
  const auto v = mesh.vertices();
  return bary[0] * v[tri[0]] + bary[1] * v[tri[1]] + bary[2] * v[tri[2]];
}

}  // namespace

ArgyrisSpace::ArgyrisSpace(Mesh2 mesh) : mesh_(std::move(mesh)) {
  const Index nv = mesh_.num_vertices();
  const Index ne = mesh_.num_edges();
  const Index nt = mesh_.num_triangles();
  const auto verts = mesh_.vertices();
  num_raw_ = 6 * nv + ne;

  edge_normal_.resize(ne);
  for (Index e = 0; e < ne; ++e) {
    const auto [a, b] = mesh_.edges()[e];
    const Eigen::Vector2d d = verts[std::max(a, b)] - verts[std::min(a, b)];
    edge_normal_[e] = Eigen::Vector2d(-d.y(), d.x()).normalized();
  }

  dof_map_.resize(nt);
  normal_sign_.resize(nt);
  coeff_.resize(nt);
  center_.resize(nt);
  scale_.resize(nt);
  for (Index t = 0; t < nt; ++t) {
    const auto& tri = mesh_.triangles()[t];
    const double area = mesh_.signed_area(t);
    const Eigen::Vector2d p[3] = {verts[tri[0]], verts[tri[1]], verts[tri[2]]};
    double h = 0.0;
    for (int k = 0; k < 3; ++k) h = std::max(h, (p[(k + 1) % 3] - p[k]).norm());
    if (!(area > 1e-14 * h * h))
      throw InvalidArgument("ArgyrisSpace: triangle " + std::to_string(t) + " is degenerate or inverted");
    center_[t] = (p[0] + p[1] + p[2]) / 3.0;
    scale_[t] = h;

    for (int k = 0; k < 3; ++k) {
      for (int s = 0; s < 6; ++s) dof_map_[t][6 * k + s] = 6 * tri[k] + s;
      const Index e = mesh_.triangle_edges()[t][k];
      dof_map_[t][18 + k] = 6 * nv + e;
      const Eigen::Vector2d d = p[(k + 2) % 3] - p[(k + 1) % 3];
      const Eigen::Vector2d outward(d.y(), -d.x());
      normal_sign_[t][k] = outward.dot(edge_normal_[e]) > 0 ? 1 : -1;
    }

    // Rows: DOF functionals. Columns: scaled monomials.
    Eigen::Matrix<double, 21, 21> vdm;
    MonomialJet m;
    const double ih = 1.0 / h;
    for (int k = 0; k < 3; ++k) {
      const Eigen::Vector2d q = (p[k] - center_[t]) * ih;
      monomial_jet(q.x(), q.y(), m);
      vdm.row(6 * k + kValue) = m.v.transpose();
      vdm.row(6 * k + kDx) = m.ds.transpose() * ih;
      vdm.row(6 * k + kDy) = m.dt.transpose() * ih;
      vdm.row(6 * k + kDxx) = m.dss.transpose() * ih * ih;
      vdm.row(6 * k + kDxy) = m.dst.transpose() * ih * ih;
      vdm.row(6 * k + kDyy) = m.dtt.transpose() * ih * ih;
    }
    for (int k = 0; k < 3; ++k) {
      const Eigen::Vector2d mid = 0.5 * (p[(k + 1) % 3] + p[(k + 2) % 3]);
      const Eigen::Vector2d q = (mid - center_[t]) * ih;
      const Eigen::Vector2d n = edge_normal_[mesh_.triangle_edges()[t][k]];
      monomial_jet(q.x(), q.y(), m);
      vdm.row(18 + k) = (n.x() * m.ds + n.y() * m.dt).transpose() * ih;
    }
    coeff_[t] = vdm.fullPivLu().inverse();
  }

  // Clamped constraints: along a straight boundary line w = dw/dn = 0 forces
  // the value, the gradient, d_tt and d_tn to vanish at its vertices.
  constrained_.assign(num_raw_, 0);
  const int top = 2 * mesh_.level();
  for (Index v = 0; v < nv; ++v) {
    const auto [i, j] = mesh_.lattice()[v];
    const bool on_x_side = (i == 0 || i == top);
    const bool on_y_side = (j == 0 || j == top);
    if (!on_x_side && !on_y_side) continue;
    constrained_[6 * v + kValue] = constrained_[6 * v + kDx] = constrained_[6 * v + kDy] = 1;
    constrained_[6 * v + kDxy] = 1;
    if (on_x_side) constrained_[6 * v + kDyy] = 1;
    if (on_y_side) constrained_[6 * v + kDxx] = 1;
  }
  for (Index e = 0; e < ne; ++e)
    if (mesh_.boundary_edge(e)) constrained_[6 * nv + e] = 1;

  raw_to_free_.assign(num_raw_, -1);
  for (Index r = 0; r < num_raw_; ++r)
    if (!constrained_[r]) {
      raw_to_free_[r] = static_cast<Index>(free_to_raw_.size());
      free_to_raw_.push_back(r);
    }
}

void ArgyrisSpace::evaluate_basis(Index t, const Eigen::Vector2d& p, ArgyrisBasisValues& out) const {
  const double ih = 1.0 / scale_[t];
  const Eigen::Vector2d q = (p - center_[t]) * ih;
  MonomialJet m;
  monomial_jet(q.x(), q.y(), m);
  const auto& c = coeff_[t];
  out.value.noalias() = c.transpose() * m.v;
  out.dx.noalias() = (c.transpose() * m.ds) * ih;
  out.dy.noalias() = (c.transpose() * m.dt) * ih;
  out.dxx.noalias() = (c.transpose() * m.dss) * (ih * ih);
  out.dxy.noalias() = (c.transpose() * m.dst) * (ih * ih);
  out.dyy.noalias() = (c.transpose() * m.dtt) * (ih * ih);
}

Eigen::Matrix<double, 21, 1> ArgyrisSpace::local_functionals(Index t, const PlateFunction& f) const {
  const auto& tri = mesh_.triangles()[t];
  const auto verts = mesh_.vertices();
  Vec21 out;
  for (int k = 0; k < 3; ++k) {
    const Jet2 j = f(verts[tri[k]]);
    out[6 * k + kValue] = j.value;
    out[6 * k + kDx] = j.grad.x();
    out[6 * k + kDy] = j.grad.y();
    out[6 * k + kDxx] = j.hess(0, 0);
    out[6 * k + kDxy] = j.hess(0, 1);
    out[6 * k + kDyy] = j.hess(1, 1);
  }
  for (int k = 0; k < 3; ++k) {
    const Eigen::Vector2d mid = 0.5 * (verts[tri[(k + 1) % 3]] + verts[tri[(k + 2) % 3]]);
    out[18 + k] = f(mid).grad.dot(edge_normal_[mesh_.triangle_edges()[t][k]]);
  }
  return out;
}

SparseMatrix ArgyrisSpace::reduce(const SparseMatrix& raw) const {
  if (raw.rows() != num_raw_ || raw.cols() != num_raw_)
    throw InvalidArgument("ArgyrisSpace::reduce: matrix is not raw-sized");
  return raw.extract(raw_to_free_, num_free_dofs(), raw_to_free_, num_free_dofs());
}

std::vector<double> ArgyrisSpace::reduce(std::span<const double> raw) const {
  if (static_cast<Index>(raw.size()) != num_raw_) throw InvalidArgument("ArgyrisSpace::reduce: vector is not raw-sized");
  std::vector<double> out(free_to_raw_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = raw[free_to_raw_[i]];
  return out;
}

std::vector<double> ArgyrisSpace::expand(std::span<const double> free) const {
  if (free.size() != free_to_raw_.size()) throw InvalidArgument("ArgyrisSpace::expand: vector is not free-sized");
  std::vector<double> out(num_raw_, 0.0);
  for (std::size_t i = 0; i < free.size(); ++i) out[free_to_raw_[i]] = free[i];
  return out;
}

// ---------------------------------------------------------------------------

PlateField::PlateField(const ArgyrisSpace& space, std::vector<double> raw_coeffs)
    : space_(&space), coeffs_(std::move(raw_coeffs)) {
  if (static_cast<Index>(coeffs_.size()) != space.num_raw_dofs())
    throw InvalidArgument("PlateField: coefficient vector has the wrong length");
}

PlateField PlateField::zero(const ArgyrisSpace& space) {
  return PlateField(space, std::vector<double>(space.num_raw_dofs(), 0.0));
}

PlateField PlateField::from_free(const ArgyrisSpace& space, std::span<const double> free) {
  return PlateField(space, space.expand(free));
}

Jet2 PlateField::evaluate_in(Index t, const Eigen::Vector2d& p) const {
  ArgyrisBasisValues b;
  space_->evaluate_basis(t, p, b);
  Vec21 c;
  const auto dofs = space_->dofs(t);
  for (int k = 0; k < 21; ++k) c[k] = coeffs_[dofs[k]];
  Jet2 j;
  j.value = c.dot(b.value);
  j.grad = {c.dot(b.dx), c.dot(b.dy)};
  const double xy = c.dot(b.dxy);
  j.hess << c.dot(b.dxx), xy, xy, c.dot(b.dyy);
  return j;
}

Jet2 PlateField::evaluate(const Eigen::Vector2d& p) const {
  const auto loc = space_->mesh().locate(p);
  if (!loc) throw InvalidArgument("PlateField::evaluate: point lies outside the plate");
  return evaluate_in(loc->triangle, p);
}

double PlateField::constraint_violation() const {
  double m = 0.0;
  for (Index r = 0; r < space_->num_raw_dofs(); ++r)
    if (space_->constrained(r)) m = std::max(m, std::abs(coeffs_[r]));
  return m;
}

PlateField interpolate(const ArgyrisSpace& space, const PlateFunction& f, bool clamp) {
  const Mesh2& mesh = space.mesh();
  const Index nv = mesh.num_vertices();
  std::vector<double> c(space.num_raw_dofs(), 0.0);
  for (Index v = 0; v < nv; ++v) {
    const Jet2 j = f(mesh.vertices()[v]);
    c[6 * v + kValue] = j.value;
    c[6 * v + kDx] = j.grad.x();
    c[6 * v + kDy] = j.grad.y();
    c[6 * v + kDxx] = j.hess(0, 0);
    c[6 * v + kDxy] = 0.5 * (j.hess(0, 1) + j.hess(1, 0));
    c[6 * v + kDyy] = j.hess(1, 1);
  }
  for (Index e = 0; e < mesh.num_edges(); ++e) {
    const auto [a, b] = mesh.edges()[e];
    const Eigen::Vector2d mid = 0.5 * (mesh.vertices()[a] + mesh.vertices()[b]);
    c[6 * nv + e] = f(mid).grad.dot(space.edge_normal(e));
  }
  if (clamp)
    for (Index r = 0; r < space.num_raw_dofs(); ++r)
      if (space.constrained(r)) c[r] = 0.0;
  return PlateField(space, std::move(c));
}

namespace {

// Accumulates an element matrix built from basis values at every quadrature
// point of every triangle.
template <class Kernel>
SparseMatrix assemble_matrix(const ArgyrisSpace& space, int degree, Kernel kernel) {
  const Mesh2& mesh = space.mesh();
  const QuadratureRule rule = quadrature_triangle(degree);
  std::vector<Triplet> trip;
  trip.reserve(static_cast<std::size_t>(mesh.num_triangles()) * 441);
  ArgyrisBasisValues b;
  for (Index t = 0; t < mesh.num_triangles(); ++t) {
    const double jac = 2.0 * mesh.signed_area(t);
    Eigen::Matrix<double, 21, 21> local = Eigen::Matrix<double, 21, 21>::Zero();
    for (std::size_t q = 0; q < rule.size(); ++q) {
      space.evaluate_basis(t, point_of(mesh, t, rule.barycentric[q]), b);
      kernel(b, rule.weights[q] * jac, local);
    }
    const auto dofs = space.dofs(t);
    for (int i = 0; i < 21; ++i)
      for (int j = 0; j < 21; ++j) trip.push_back({dofs[i], dofs[j], local(i, j)});
  }
  return SparseMatrix::from_triplets(space.num_raw_dofs(), space.num_raw_dofs(), trip, true);
}

}  // namespace

SparseMatrix assemble_bending(const ArgyrisSpace& space) {
  return assemble_matrix(space, 6, [](const ArgyrisBasisValues& b, double w, auto& local) {
    const Vec21 lap = b.dxx + b.dyy;
    local.noalias() += w * lap * lap.transpose();
  });
}

SparseMatrix assemble_mass_rho(const ArgyrisSpace& space, double rho) {
  if (!(rho >= 0.0)) throw InvalidArgument("assemble_mass_rho: rho must be nonnegative");
  return assemble_matrix(space, 10, [rho](const ArgyrisBasisValues& b, double w, auto& local) {
    local.noalias() += w * b.value * b.value.transpose();
    if (rho > 0.0) local.noalias() += (w * rho) * (b.dx * b.dx.transpose() + b.dy * b.dy.transpose());
  });
}

std::vector<double> assemble_load(const ArgyrisSpace& space, const PlateFunction& g, double rho, int degree) {
  if (!(rho >= 0.0)) throw InvalidArgument("assemble_load: rho must be nonnegative");
  const Mesh2& mesh = space.mesh();
  const QuadratureRule rule = quadrature_triangle(degree);
  std::vector<double> out(space.num_raw_dofs(), 0.0);
  ArgyrisBasisValues b;
  for (Index t = 0; t < mesh.num_triangles(); ++t) {
    const double jac = 2.0 * mesh.signed_area(t);
    Vec21 local = Vec21::Zero();
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Eigen::Vector2d x = point_of(mesh, t, rule.barycentric[q]);
      space.evaluate_basis(t, x, b);
      const Jet2 gj = g(x);
      const double w = rule.weights[q] * jac;
      local += (w * gj.value) * b.value;
      if (rho > 0.0) local += (w * rho) * (gj.grad.x() * b.dx + gj.grad.y() * b.dy);
    }
    const auto dofs = space.dofs(t);
    for (int i = 0; i < 21; ++i) out[dofs[i]] += local[i];
  }
  return out;
}

std::vector<double> basis_integrals(const ArgyrisSpace& space) {
  return assemble_load(space, [](const Eigen::Vector2d&) { return Jet2{1.0, {0, 0}, Eigen::Matrix2d::Zero()}; },
                       0.0, 5);
}

double integrate(const PlateField& field) {
  const std::vector<double> l = basis_integrals(field.space());
  double s = 0.0;
  for (std::size_t i = 0; i < l.size(); ++i) s += l[i] * field.coeffs()[i];
  return s;
}

namespace {

std::vector<double> xi_free(const ArgyrisSpace& space, double* energy) {
  const SparseMatrix k = space.reduce(assemble_bending(space));
  const std::vector<double> l = space.reduce(basis_integrals(space));
  const std::vector<double> xi = SparseCholesky(k).solve(l);
  if (energy) {
    const std::vector<double> kx = k.multiply(xi);
    double e = 0.0;
    for (std::size_t i = 0; i < xi.size(); ++i) e += xi[i] * kx[i];
    *energy = e;
  }
  return xi;
}

}  // namespace

PlateField solve_xi(const ArgyrisSpace& space) { return PlateField::from_free(space, xi_free(space, nullptr)); }

double discrete_infsup_constant(const ArgyrisSpace& space) {
  double e = 0.0;
  xi_free(space, &e);
  return std::sqrt(std::max(e, 0.0));
}

std::vector<GridSample> sample_grid(const PlateField& field, int n) {
  if (n < 1) throw InvalidArgument("sample_grid: n must be positive");
  std::vector<GridSample> out;
  out.reserve(static_cast<std::size_t>(n + 1) * (n + 1));
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) {
      const double x = static_cast<double>(i) / n;
      const double y = static_cast<double>(j) / n;
      out.push_back({x, y, field.evaluate({x, y}).value});
    }
  return out;
}

}  // namespace fsi
