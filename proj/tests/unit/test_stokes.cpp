/*
  This file is part of fsi-resolvent, a mixed finite element solver for a
  Stokes fluid coupled to a clamped plate.

  Licensed under the Apache License, Version 2.0 (the "License"); you may
  not use this file except in compliance with the License.  You may obtain
  a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0
*/

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "fsi/error.hpp"
#include "fsi/manufactured.hpp"
#include "fsi/quadrature.hpp"
#include "fsi/taylor_hood.hpp"

using namespace fsi;

namespace {

std::array<double, 4> node_bary(int k) {
  static const int edge[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  std::array<double, 4> b{0, 0, 0, 0};
  if (k < 4) {
    b[k] = 1.0;
  } else {
    b[edge[k - 4][0]] = 0.5;
    b[edge[k - 4][1]] = 0.5;
  }
  return b;
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Integral of div u_h over the cube by tetrahedral quadrature.
double integrate_divergence(const FluidField& u) {
  const QuadratureRule r = quadrature_tet(2);
  const Mesh3& m = u.space().mesh();
  double s = 0.0;
  for (Index t = 0; t < m.num_tets(); ++t)
    for (std::size_t q = 0; q < r.size(); ++q) {
      Eigen::Vector3d v;
      Eigen::Matrix3d j;
      u.evaluate(t, r.barycentric[q], v, j);
      s += r.weights[q] * 6.0 * m.volume(t) * j.trace();
    }
  return s;
}

}  // namespace

TEST_SUITE("stokes") {
  TEST_CASE("DOF counts and node classes") {
    const TaylorHoodSpace s(build_cube_mesh(2));
    const Mesh3& m = s.mesh();
    CHECK(s.num_velocity_dofs() == 3 * (m.num_vertices() + m.num_edges()));
    CHECK(s.num_pressure_dofs() == m.num_vertices());
    for (Index n = 0; n < s.num_nodes(); ++n) {
      const Eigen::Vector3d x = s.node_position(n);
      const bool on_top = std::abs(x.z()) < 1e-14;
      const bool on_wall = x.x() < 1e-14 || x.x() > 1 - 1e-14 || x.y() < 1e-14 || x.y() > 1 - 1e-14 ||
                           x.z() < -1 + 1e-14;
      const NodeClass expected = on_wall ? NodeClass::S : on_top ? NodeClass::Omega : NodeClass::Interior;
      CHECK(s.node_class(n) == expected);
    }
  }

  TEST_CASE("P2 nodal basis is a Kronecker delta at the element nodes") {
    const TaylorHoodSpace s(build_cube_mesh(1));
    double worst = 0.0;
    for (Index t = 0; t < s.mesh().num_tets(); ++t)
      for (int k = 0; k < 10; ++k) {
        Eigen::Matrix<double, 10, 1> v;
        Eigen::Matrix<double, 10, 3> g;
        s.p2_basis(t, node_bary(k), v, g);
        for (int j = 0; j < 10; ++j) worst = std::max(worst, std::abs(v[j] - (j == k ? 1.0 : 0.0)));
        const auto nodes = s.element_nodes(t);
        CHECK((s.point(t, node_bary(k)) - s.node_position(nodes[k])).norm() <= 1e-14);
      }
    CHECK(worst <= 1e-12);
  }

  TEST_CASE("constant velocity sees only the lambda mass term") {
    const TaylorHoodSpace s(build_cube_mesh(2));
    const StokesForms f1 = assemble_stokes_forms(s, 1.0);
    const StokesForms f2 = assemble_stokes_forms(s, 2.0);
    const std::vector<double> c(s.num_velocity_dofs(), 1.0);
    const auto a1 = f1.a.multiply(c), a2 = f2.a.multiply(c);
    double stiff = 0.0, mass = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
      stiff = std::max(stiff, std::abs(2.0 * a1[i] - a2[i]));
      mass += a2[i] - a1[i];
    }
    CHECK(stiff <= 1e-12);
    CHECK(mass == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(f1.a.symmetry_error() <= 1e-14 * f1.a.max_abs());
    CHECK_THROWS_AS(assemble_stokes_forms(s, 0.0), InvalidArgument);
  }

  TEST_CASE("divergence form against an independent quadrature") {
    // u = (x^2, 0, 0) is reproduced by P2, so (B u)_i = -int 2x q_i.
    const TaylorHoodSpace s(build_cube_mesh(2));
    const StokesForms f = assemble_stokes_forms(s, 1.0);
    std::vector<double> u(s.num_velocity_dofs(), 0.0);
    for (Index n = 0; n < s.num_nodes(); ++n) u[3 * n] = std::pow(s.node_position(n).x(), 2);
    const auto bu = f.b.multiply(u);
    std::vector<double> oracle(s.num_pressure_dofs(), 0.0);
    const QuadratureRule r = quadrature_tet(4);
    const Mesh3& m = s.mesh();
    for (Index t = 0; t < m.num_tets(); ++t)
      for (std::size_t q = 0; q < r.size(); ++q) {
        const double x = s.point(t, r.barycentric[q]).x();
        for (int k = 0; k < 4; ++k)
          oracle[m.tets()[t][k]] -= r.weights[q] * 6.0 * m.volume(t) * 2.0 * x * r.barycentric[q][k];
      }
    for (Index i = 0; i < s.num_pressure_dofs(); ++i) CHECK(bu[i] == doctest::Approx(oracle[i]).epsilon(1e-12));
    double total = 0.0;
    for (double v : f.moments) total += v;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-13));
  }

  TEST_CASE("level 1 solve agrees with a dense saddle solve") {
    const TaylorHoodSpace s(build_cube_mesh(1));
    const StokesSolver solver(s, 1.5);
    const StokesForms& f = solver.forms();
    std::mt19937 gen(4);
    std::normal_distribution<double> g;
    std::vector<double> load(s.num_velocity_dofs()), zero(s.num_velocity_dofs(), 0.0);
    for (double& v : load) v = g(gen);
    const StokesSolution sol = solver.solve(zero, load, 0.0);

    std::vector<Index> interior;
    for (Index n = 0; n < s.num_nodes(); ++n)
      if (s.node_class(n) == NodeClass::Interior)
        for (int c = 0; c < 3; ++c) interior.push_back(3 * n + c);
    const Eigen::Index ni = static_cast<Eigen::Index>(interior.size()), np = s.num_pressure_dofs();
    const Eigen::MatrixXd a = f.a.to_dense(), b = f.b.to_dense();
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(ni + np + 1, ni + np + 1);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(ni + np + 1);
    for (Eigen::Index i = 0; i < ni; ++i) {
      rhs[i] = load[interior[i]];
      for (Eigen::Index j = 0; j < ni; ++j) k(i, j) = a(interior[i], interior[j]);
      for (Eigen::Index p = 0; p < np; ++p) k(i, ni + p) = k(ni + p, i) = b(p, interior[i]);
    }
    for (Eigen::Index p = 0; p < np; ++p) k(ni + p, ni + np) = k(ni + np, ni + p) = f.moments[p];
    const Eigen::VectorXd x = k.fullPivLu().solve(rhs);
    for (Eigen::Index i = 0; i < ni; ++i) CHECK(sol.velocity.coeffs()[interior[i]] == doctest::Approx(x[i]).epsilon(1e-10));
    for (Eigen::Index p = 0; p < np; ++p) CHECK(sol.pressure.coeffs()[p] == doctest::Approx(x[ni + p]).epsilon(1e-10));
    CHECK(max_abs(f.b.multiply(sol.velocity.coeffs())) <= 1e-10);
  }

  TEST_CASE("one factorization, one hundred right-hand sides") {
    const TaylorHoodSpace s(build_cube_mesh(1));
    const StokesSolver solver(s, 1.0);
    const StokesForms& f = solver.forms();
    std::mt19937 gen(8);
    std::normal_distribution<double> g;
    const std::vector<double> zero(s.num_velocity_dofs(), 0.0);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
      std::vector<double> load(s.num_velocity_dofs());
      for (double& v : load) v = g(gen);
      const StokesSolution sol = solver.solve(zero, load, 0.0);
      std::vector<double> r = f.a.multiply(sol.velocity.coeffs());
      f.b.multiply_transpose_add(sol.pressure.coeffs(), r);
      for (Index n = 0; n < s.num_nodes(); ++n)
        if (s.node_class(n) == NodeClass::Interior)
          for (int c = 0; c < 3; ++c) worst = std::max(worst, std::abs(r[3 * n + c] - load[3 * n + c]));
      worst = std::max(worst, max_abs(f.b.multiply(sol.velocity.coeffs())));
      CHECK(std::abs(sol.pressure.integral()) <= 1e-12);
    }
    CHECK(worst <= 1e-10);
  }

  TEST_CASE("pressure gauge: constants do not act on interior velocities") {
    const TaylorHoodSpace s(build_cube_mesh(2));
    const StokesForms f = assemble_stokes_forms(s, 1.0);
    const std::vector<double> ones(s.num_pressure_dofs(), 1.0);
    std::vector<double> bt(s.num_velocity_dofs(), 0.0);
    f.b.multiply_transpose_add(ones, bt);
    for (Index n = 0; n < s.num_nodes(); ++n)
      if (s.node_class(n) == NodeClass::Interior)
        for (int c = 0; c < 3; ++c) CHECK(std::abs(bt[3 * n + c]) <= 1e-13);
    PressureField p(s, std::vector<double>(s.num_pressure_dofs(), 2.0), false);
    CHECK(p.integral() == doctest::Approx(2.0).epsilon(1e-13));
    p.project_mean_zero();
    CHECK(std::abs(p.integral()) <= 1e-14);
    p.add_constant(0.5);
    CHECK(p.integral() == doctest::Approx(0.5).epsilon(1e-13));
  }

  TEST_CASE("trace lifting") {
    const TaylorHoodSpace s(build_cube_mesh(2));
    const FluidField zero = lift_trace(s, [](double, double) { return 0.0; });
    CHECK(max_abs(zero.coeffs()) == 0.0);
    const ManufacturedCase mc = manufactured_case(1.0);
    const FluidField u = lift_trace(s, [&mc](double x, double y) { return mc.w2(x, y); });
    for (Index n = 0; n < s.num_nodes(); ++n) {
      const Eigen::Vector3d v = u.node_value(n);
      const Eigen::Vector3d x = s.node_position(n);
      if (s.node_class(n) == NodeClass::Omega) {
        CHECK(v.x() == 0.0);
        CHECK(v.y() == 0.0);
        CHECK(v.z() == doctest::Approx(mc.w2(x.x(), x.y())).epsilon(1e-14));
      } else {
        CHECK(v.norm() == 0.0);
      }
    }
  }

  TEST_CASE("trace solution map") {
    const TaylorHoodSpace s(build_cube_mesh(2));
    const StokesSolver solver(s, 1.0);
    const StokesSolution z = solve_map_f(solver, PlateTrace{[](double, double) { return 0.0; }, 0.0});
    CHECK(max_abs(z.velocity.coeffs()) == 0.0);
    CHECK(max_abs(z.pressure.coeffs()) == 0.0);

    const double pi = std::numbers::pi;
    const PlateTrace phi{[pi](double x, double y) { return std::sin(pi * x) * std::sin(pi * y); }, 4.0 / (pi * pi)};
    const StokesSolution sol = solve_map_f(solver, phi);
    const auto bu = solver.forms().b.multiply(sol.velocity.coeffs());
    const auto& m = solver.forms().moments;
    // The discrete divergence is constant: B u = kappa * moments.
    const double kappa = dot(bu, m) / dot(m, m);
    double dev = 0.0;
    for (std::size_t i = 0; i < bu.size(); ++i) dev = std::max(dev, std::abs(bu[i] - kappa * m[i]));
    CHECK(dev <= 1e-12);
    const double div = integrate_divergence(sol.velocity);
    double sum = 0.0;
    for (double v : bu) sum += v;
    CHECK(sum == doctest::Approx(-div).epsilon(1e-11));
    // Divergence theorem: the outflow through the plate matches the datum.
    CHECK(std::abs(div - phi.integral) <= 2e-2 * phi.integral);
    CHECK(std::abs(sol.pressure.integral()) <= 1e-12);
  }

  TEST_CASE("volume-force solution map") {
    const TaylorHoodSpace s(build_cube_mesh(2));
    const StokesSolver solver(s, 1.0);
    const StokesSolution z = solve_map_mu(solver, [](const Eigen::Vector3d&) { return Eigen::Vector3d::Zero(); });
    CHECK(max_abs(z.velocity.coeffs()) == 0.0);

    const ManufacturedCase mc = manufactured_case(1.0);
    const VectorFunction3 ustar = [&mc](const Eigen::Vector3d& p) {
      return Eigen::Vector3d(mc.u_star[0](p), mc.u_star[1](p), mc.u_star[2](p));
    };
    const StokesSolution mu = solve_map_mu(solver, ustar);
    CHECK(max_abs(solver.forms().b.multiply(mu.velocity.coeffs())) <= 1e-9);
    CHECK(std::abs(mu.pressure.integral()) <= 1e-10);
    for (Index n = 0; n < s.num_nodes(); ++n)
      if (s.node_class(n) != NodeClass::Interior) CHECK(mu.velocity.node_value(n).norm() == 0.0);
  }

  TEST_CASE("volume-force map is bounded uniformly in h") {
    const ManufacturedCase mc = manufactured_case(1.0);
    const VectorFunction3 ustar = [&mc](const Eigen::Vector3d& p) {
      return Eigen::Vector3d(mc.u_star[0](p), mc.u_star[1](p), mc.u_star[2](p));
    };
    std::vector<double> ratio;
    for (int n : {1, 2, 4}) {
      const TaylorHoodSpace s(build_cube_mesh(n));
      const StokesSolver solver(s, 1.0);
      const StokesSolution mu = solve_map_mu(solver, ustar);
      const double energy = dot(mu.velocity.coeffs(), solver.forms().a.multiply(mu.velocity.coeffs()));
      const auto load = assemble_velocity_load(s, ustar);
      // (u*, mu) = a(mu, mu) for the Galerkin solution.
      CHECK(dot(load, mu.velocity.coeffs()) == doctest::Approx(energy).epsilon(1e-9));
      const QuadratureRule r = quadrature_tet(6);
      double l2 = 0.0;
      for (Index t = 0; t < s.mesh().num_tets(); ++t)
        for (std::size_t q = 0; q < r.size(); ++q)
          l2 += r.weights[q] * 6.0 * s.mesh().volume(t) * ustar(s.point(t, r.barycentric[q])).squaredNorm();
      ratio.push_back(std::sqrt(energy / l2));
    }
    for (double v : ratio) CHECK(v < 1.0);  // a(mu, mu) <= |u*| |mu| <= |u*| a(mu, mu)^(1/2) / sqrt(lambda)
    CHECK(ratio[2] <= 1.5 * ratio[1]);
  }
}
