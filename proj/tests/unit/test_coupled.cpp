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
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "fsi/coupled.hpp"
#include "fsi/error.hpp"
#include "fsi/manufactured.hpp"
#include "fsi/quadrature.hpp"
#include "fsi/verification.hpp"

using namespace fsi;

namespace {

struct Setup {
  ArgyrisSpace plate;
  TaylorHoodSpace fluid;
  Setup(int n) : plate(build_square_mesh(n)), fluid(build_cube_mesh(n)) {}
};

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double min_eigenvalue(const Eigen::MatrixXd& a) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(a, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
}

}  // namespace

TEST_SUITE("coupled") {
  TEST_CASE("reduced plate matrix is symmetric positive definite") {
    const Setup s(2);
    const ManufacturedCase mc = manufactured_case(1.0);
    const CoupledSolver solver(s.plate, s.fluid, 1.0, 0.0);
    const ReducedSystem rs = assemble_reduced_system(solver, mc.data());
    const double scale = rs.a.cwiseAbs().maxCoeff();
    CHECK((rs.a - rs.a.transpose()).cwiseAbs().maxCoeff() <= 1e-10 * scale);
    CHECK(Eigen::LLT<Eigen::MatrixXd>(rs.a).info() == Eigen::Success);
    CHECK(rs.b.size() == s.plate.num_free_dofs());
    CHECK(rs.b.cwiseAbs().maxCoeff() > 0.0);
    const SaddleSystem sys = rs.to_saddle();
    CHECK_NOTHROW(sys.validate());
  }

  TEST_CASE("fluid coupling adds a positive semidefinite term") {
    const Setup s(1);
    const ResolventData zero = ResolventData::zero(1.0);
    const CoupledSolver with(s.plate, s.fluid, 1.0, 0.0);
    CoupledOptions off;
    off.include_fluid = false;
    const CoupledSolver without(s.plate, s.fluid, 1.0, 0.0, off);
    const Eigen::MatrixXd d = assemble_reduced_system(with, zero).a - assemble_reduced_system(without, zero).a;
    CHECK(min_eigenvalue(d) >= -1e-12 * d.cwiseAbs().maxCoeff());
    CHECK(d.cwiseAbs().maxCoeff() > 0.0);
  }

  TEST_CASE("diagnostic mode approaches the bending matrix as lambda shrinks") {
    const Setup s(2);
    CoupledOptions off;
    off.include_fluid = false;
    double previous = 1e300;
    for (double lambda : {1e-1, 1e-2, 1e-3}) {
      const CoupledSolver solver(s.plate, s.fluid, lambda, 0.0, off);
      const Eigen::MatrixXd a = assemble_reduced_system(solver, ResolventData::zero(lambda)).a;
      const Eigen::MatrixXd k = solver.bending().to_dense();
      const double gap = (a - k).cwiseAbs().maxCoeff() / k.cwiseAbs().maxCoeff();
      CHECK(gap < previous);
      previous = gap;
    }
    CHECK(previous <= 1e-6);
  }

  TEST_CASE("zero data give the zero solution") {
    const Setup s(1);
    const CoupledSolver solver(s.plate, s.fluid, 1.0, 0.0);
    const CoupledSolution sol = solver.solve(ResolventData::zero(1.0));
    for (double v : sol.w1h.coeffs()) CHECK(v == 0.0);
    for (double v : sol.w2h.coeffs()) CHECK(v == 0.0);
    for (double v : sol.uh.coeffs()) CHECK(v == 0.0);
    for (double v : sol.ph.coeffs()) CHECK(v == 0.0);
    CHECK(sol.c_tilde == 0.0);
    const DataCache dc = solver.prepare(ResolventData::zero(1.0));
    CHECK(solver.apply_F(dc, interpolate(s.plate, [](const Eigen::Vector2d& p) {
            Jet2 j;
            j.value = p.x() * p.y();
            return j;
          })) == 0.0);
  }

  TEST_CASE("load functional against an independent quadrature") {
    const Setup s(1);
    const double lambda = 1.0;
    const ManufacturedCase mc = manufactured_case(lambda);
    const ResolventData data = mc.data();
    const CoupledSolver solver(s.plate, s.fluid, lambda, 0.0);
    const DataCache dc = solver.prepare(data);

    std::vector<double> raw(s.plate.num_raw_dofs(), 0.0);
    raw[s.plate.free_to_raw()[0]] = 1.0;
    const PlateField phi(s.plate, raw);

    // Plate term: (lambda w1* + w2*, phi) with rho = 0.
    const QuadratureRule r = quadrature_triangle(12);
    const Mesh2& m = s.plate.mesh();
    double plate_term = 0.0;
    for (Index t = 0; t < m.num_triangles(); ++t) {
      const auto& tri = m.triangles()[t];
      for (std::size_t q = 0; q < r.size(); ++q) {
        Eigen::Vector2d p = Eigen::Vector2d::Zero();
        for (int k = 0; k < 3; ++k) p += r.barycentric[q][k] * m.vertices()[tri[k]];
        const double g = lambda * data.w1_star(p).value + data.w2_star(p).value;
        plate_term += r.weights[q] * 2.0 * m.signed_area(t) * g * phi.evaluate_in(t, p).value;
      }
    }

    // Fluid terms through separately factorized solution maps.
    const StokesSolver stokes(s.fluid, lambda);
    const PlateField w1s = interpolate(s.plate, data.w1_star, true);
    const auto trace_of = [](const PlateField& f) {
      return PlateTrace{[&f](double x, double y) { return f.evaluate({x, y}).value; }, integrate(f)};
    };
    const StokesSolution fw = solve_map_f(stokes, trace_of(w1s));
    const StokesSolution fphi = solve_map_f(stokes, trace_of(phi));
    const StokesSolution mu = solve_map_mu(stokes, data.u_star);
    std::vector<double> diff(s.fluid.num_velocity_dofs());
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = fw.velocity.coeffs()[i] - mu.velocity.coeffs()[i];
    const double a_term = dot(stokes.forms().a.multiply(diff), fphi.velocity.coeffs());
    const double u_term = dot(assemble_velocity_load(s.fluid, data.u_star), fphi.velocity.coeffs());

    const double oracle = plate_term + a_term + u_term;
    CHECK(solver.apply_F(dc, phi) == doctest::Approx(oracle).epsilon(1e-9));
    const ReducedSystem rs = solver.assemble(dc);
    CHECK(rs.f[0] == doctest::Approx(oracle).epsilon(1e-9));
  }

  TEST_CASE("manufactured solve satisfies the Galerkin system and the constraints") {
    const Setup s(2);
    const ManufacturedCase mc = manufactured_case(1.0);
    const ResolventData data = mc.data();
    const CoupledSolver solver(s.plate, s.fluid, 1.0, 0.0);
    const CoupledSolution sol = solver.solve(data);
    const ReducedSystem rs = assemble_reduced_system(solver, data);
    const std::vector<double> af = sol.w1h.free_coeffs();
    const Eigen::VectorXd alpha = Eigen::Map<const Eigen::VectorXd>(af.data(), static_cast<Eigen::Index>(af.size()));
    const Eigen::VectorXd res = rs.a * alpha + rs.b * sol.c_tilde - rs.f;
    std::mt19937 gen(77);
    std::normal_distribution<double> g;
    for (int k = 0; k < 20; ++k) {
      Eigen::VectorXd v(alpha.size());
      for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = g(gen);
      CHECK(std::abs(v.dot(res)) <= 1e-10 * v.norm() * rs.f.norm());
    }
    CHECK(std::abs(rs.b.dot(alpha)) <= 1e-12 * rs.b.norm() * alpha.norm());
    CHECK(std::abs(integrate(sol.w1h)) <= 1e-10 * alpha.norm());
    CHECK(sol.schur_mismatch <= 1e-8);
    CHECK(std::abs(sol.ph.integral()) <= 1e-10);

    for (Index n = 0; n < s.fluid.num_nodes(); ++n) {
      const Eigen::Vector3d u = sol.uh.node_value(n);
      if (s.fluid.node_class(n) == NodeClass::S) {
        CHECK(u.norm() == 0.0);
      } else if (s.fluid.node_class(n) == NodeClass::Omega) {
        const Eigen::Vector3d x = s.fluid.node_position(n);
        CHECK(u.x() == 0.0);
        CHECK(u.y() == 0.0);
        CHECK(std::abs(u.z() - sol.w2h.evaluate({x.x(), x.y()}).value) <= 1e-12);
      }
    }
  }

  TEST_CASE("errors decrease under refinement for rho = 0 and rho > 0") {
    for (double rho : {0.0, 0.5}) {
      const ManufacturedCase mc = manufactured_case(1.0, rho);
      std::vector<double> h2;
      for (int n : {1, 2}) {
        const Setup s(n);
        const CoupledSolver solver(s.plate, s.fluid, 1.0, rho);
        const CoupledSolution sol = solver.solve(mc.data());
        h2.push_back(plate_error_norms(sol.w1h, [&mc](const Eigen::Vector2d& p) { return mc.w1.jet2(p); }).h2);
        CHECK(std::abs(integrate(sol.w1h)) <= 1e-12);
      }
      CHECK(h2[1] < h2[0] / 2.0);
    }
  }

  TEST_CASE("data built for other parameters are rejected") {
    const Setup s(1);
    const CoupledSolver solver(s.plate, s.fluid, 1.0, 0.0);
    CHECK_THROWS_AS(solver.prepare(ResolventData::zero(2.0)), InvalidArgument);
    CHECK_THROWS_AS(solver.prepare(ResolventData::zero(1.0, 0.3)), InvalidArgument);
    ResolventData bad = ResolventData::zero(1.0);
    bad.u_star = nullptr;
    CHECK_THROWS_AS(solver.prepare(bad), InvalidArgument);
    CHECK_THROWS_AS(CoupledSolver(s.plate, s.fluid, -1.0, 0.0), InvalidArgument);
  }
}
