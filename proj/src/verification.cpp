/*
  This file is part of fsi-resolvent, a mixed finite element solver for a
  Stokes fluid coupled to a clamped plate.

  Licensed under the Apache License, Version 2.0 (the "License"); you may
  not use this file except in compliance with the License.  You may obtain
  a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0
*/

#include "fsi/verification.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <new>
#include <ostream>
#include <string>

#include "fsi/error.hpp"
#include "fsi/quadrature.hpp"

namespace fsi {
namespace {

Eigen::Vector2d triangle_point(const Mesh2& mesh, Index t, const std::array<double, 4>& b) {
  const auto& tri = mesh.triangles()[t];
  const auto v = mesh.vertices();
  return b[0] * v[tri[0]] + b[1] * v[tri[1]] + b[2] * v[tri[2]];
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

std::string format_rate(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

PlateErrors plate_error_norms(const PlateField& w1h, const PlateFunction& exact, H2Norm norm, int degree) {
  const Mesh2& mesh = w1h.space().mesh();
  const QuadratureRule rule = quadrature_triangle(degree);
  double s2 = 0.0, s1 = 0.0, s0 = 0.0;
  for (Index t = 0; t < mesh.num_triangles(); ++t) {
    const double jac = 2.0 * mesh.signed_area(t);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Eigen::Vector2d x = triangle_point(mesh, t, rule.barycentric[q]);
      const Jet2 a = w1h.evaluate_in(t, x);
      const Jet2 b = exact(x);
      const double w = rule.weights[q] * jac;
      const Eigen::Matrix2d dh = a.hess - b.hess;
      s2 += w * (norm == H2Norm::Hessian ? dh.squaredNorm() : dh.trace() * dh.trace());
      s1 += w * (a.grad - b.grad).squaredNorm();
      s0 += w * (a.value - b.value) * (a.value - b.value);
    }
  }
  return {std::sqrt(s2), std::sqrt(s1), std::sqrt(s0)};
}

FluidErrors fluid_error_norms(const FluidField& uh, const PressureField& ph, const VelocityJet& u,
                              const std::function<double(const Eigen::Vector3d&)>& p, int degree) {
  const TaylorHoodSpace& space = uh.space();
  const Mesh3& mesh = space.mesh();
  const QuadratureRule rule = quadrature_tet(degree);
  double s0 = 0.0, s1 = 0.0, sp = 0.0;
  Eigen::Vector3d vh, ve;
  Eigen::Matrix3d jh, je;
  for (Index t = 0; t < mesh.num_tets(); ++t) {
    const double jac = 6.0 * mesh.volume(t);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto& b = rule.barycentric[q];
      const Eigen::Vector3d x = space.point(t, b);
      uh.evaluate(t, b, vh, jh);
      u(x, ve, je);
      const double w = rule.weights[q] * jac;
      s0 += w * (vh - ve).squaredNorm();
      s1 += w * (jh - je).squaredNorm();
      const double dp = ph.evaluate(t, b) - p(x);
      sp += w * dp * dp;
    }
  }
  return {std::sqrt(s0), std::sqrt(s1), std::sqrt(sp)};
}

EnergyBalance energy_balance(const CoupledSolution& sol, const ResolventData& data, int plate_degree,
                             int fluid_degree) {
  const double lambda = data.lambda;
  const double rho = data.rho;
  const ArgyrisSpace& plate = sol.w1h.space();
  const Mesh2& m2 = plate.mesh();
  const QuadratureRule r2 = quadrature_triangle(plate_degree);

  double lap_w1 = 0.0, w2_norm = 0.0, pair_plate = 0.0;
  for (Index t = 0; t < m2.num_triangles(); ++t) {
    const double jac = 2.0 * m2.signed_area(t);
    for (std::size_t q = 0; q < r2.size(); ++q) {
      const Eigen::Vector2d x = triangle_point(m2, t, r2.barycentric[q]);
      const double w = r2.weights[q] * jac;
      const Jet2 a = sol.w1h.evaluate_in(t, x);
      const Jet2 b = sol.w2h.evaluate_in(t, x);
      const double la = a.hess.trace();
      lap_w1 += w * la * la;
      w2_norm += w * (b.value * b.value + rho * b.grad.squaredNorm());
      pair_plate += w * data.w1_star(x).hess.trace() * la;
      if (data.p_w2_star) {
        pair_plate += w * data.p_w2_star(x).value * b.value;
      } else {
        const Jet2 s = data.w2_star(x);
        pair_plate += w * (s.value * b.value + rho * s.grad.dot(b.grad));
      }
    }
  }

  const TaylorHoodSpace& fluid = sol.uh.space();
  const Mesh3& m3 = fluid.mesh();
  const QuadratureRule r3 = quadrature_tet(fluid_degree);
  double u_norm = 0.0, grad_norm = 0.0, pair_fluid = 0.0;
  Eigen::Vector3d v;
  Eigen::Matrix3d jv;
  for (Index t = 0; t < m3.num_tets(); ++t) {
    const double jac = 6.0 * m3.volume(t);
    for (std::size_t q = 0; q < r3.size(); ++q) {
      const auto& b = r3.barycentric[q];
      sol.uh.evaluate(t, b, v, jv);
      const double w = r3.weights[q] * jac;
      u_norm += w * v.squaredNorm();
      grad_norm += w * jv.squaredNorm();
      pair_fluid += w * data.u_star(fluid.point(t, b)).dot(v);
    }
  }

  EnergyBalance e;
  e.state_norm2 = lap_w1 + w2_norm + u_norm;
  e.dissipation = grad_norm;
  e.pairing = pair_plate + pair_fluid;
  e.residual = std::abs(lambda * e.state_norm2 + e.dissipation - e.pairing);
  e.relative = e.residual / (lambda * e.state_norm2);
  return e;
}

double convergence_rate(double e_coarse, double e_fine) { return std::log(e_coarse / e_fine) / std::log(2.0); }

std::vector<RateRow> ConvergenceReport::rates() const {
  std::vector<RateRow> out;
  for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
    const LevelRecord& a = levels[i];
    const LevelRecord& b = levels[i + 1];
    out.push_back({a.level, b.level, convergence_rate(a.plate.h2, b.plate.h2), convergence_rate(a.plate.h1, b.plate.h1),
                   convergence_rate(a.plate.l2, b.plate.l2), convergence_rate(a.fluid.l2, b.fluid.l2),
                   convergence_rate(a.fluid.h1, b.fluid.h1), convergence_rate(a.fluid.p, b.fluid.p)});
  }
  return out;
}

namespace {

// Runs `fn` and rethrows any library error with the level and module
// prefixed, keeping the exception type so callers can still dispatch on it.
template <class Fn>
auto in_phase(int level, const char* module, Fn&& fn) -> decltype(fn()) {
  const std::string ctx = "level " + std::to_string(level) + " [" + module + "]: ";
  try {
    return fn();
  } catch (const SingularMatrix& e) {
    throw SingularMatrix(ctx + e.what(), e.pivot());
  } catch (const InvalidArgument& e) {
    throw InvalidArgument(ctx + e.what());
  } catch (const IoError& e) {
    throw IoError(ctx + e.what());
  } catch (const Error& e) {
    throw SolverError(ctx + e.what());
  } catch (const std::bad_alloc&) {
    throw SolverError(ctx + "out of memory");
  }
}

}  // namespace

LevelRun run_level(const ManufacturedCase& mc, int level, const StudyOptions& options) {
  if (options.fluid_level_offset < 0 || options.fluid_level_offset > 4)
    throw InvalidArgument("fluid_level_offset must lie in [0, 4]");
  const int fluid_level = level << options.fluid_level_offset;
  auto say = [&](const std::string& s) {
    if (options.progress) options.progress("level " + std::to_string(level) + ": " + s);
  };

  LevelRun run;
  in_phase(level, "mesh", [&] {
    run.plate = std::make_unique<ArgyrisSpace>(build_square_mesh(level));
    run.fluid = std::make_unique<TaylorHoodSpace>(build_cube_mesh(fluid_level));
  });
  say("factorizing fluid system and computing " + std::to_string(run.fluid->omega_nodes().size()) +
      " plate-node responses");
  in_phase(level, "stokes_fem", [&] {
    run.solver = std::make_unique<CoupledSolver>(*run.plate, *run.fluid, mc.lambda, mc.rho, options.coupled);
  });
  const ResolventData data = mc.data();
  say("solving reduced plate system with " + std::to_string(run.plate->num_free_dofs()) + " unknowns");
  in_phase(level, "coupled_solver", [&] { run.solution = run.solver->solve(data); });
  const CoupledSolution& sol = *run.solution;

  LevelRecord& r = run.record;
  r.level = level;
  r.plate_elements = run.plate->mesh().num_triangles();
  r.char_length = run.plate->mesh().characteristic_length();
  r.fluid_elements = run.fluid->mesh().num_tets();
  r.fluid_char_length = run.fluid->mesh().characteristic_length();
  r.plate_dofs = run.plate->num_free_dofs();
  r.fluid_unknowns = run.solver->cache().solver().num_unknowns();
  r.trace_nodes = static_cast<Index>(run.fluid->omega_nodes().size());

  const ManufacturedCase* m = &mc;
  in_phase(level, "verification", [&] {
    r.plate = plate_error_norms(sol.w1h, [m](const Eigen::Vector2d& p) { return m->w1.jet2(p); }, options.h2_norm,
                                options.plate_error_degree);
    const VelocityJet u = [m](const Eigen::Vector3d& p, Eigen::Vector3d& v, Eigen::Matrix3d& j) {
      for (int c = 0; c < 3; ++c) {
        v[c] = m->u[c](p);
        j.row(c) = m->u[c].gradient(p).transpose();
      }
    };
    r.fluid = fluid_error_norms(sol.uh, sol.ph, u, [](const Eigen::Vector3d&) { return 0.0; }, options.fluid_error_degree);
    r.energy = energy_balance(sol, data, options.plate_error_degree, options.fluid_error_degree);
    r.c_tilde = sol.c_tilde;

    const SparseMatrix& k = run.solver->bending();
    const std::vector<double> a = sol.w1h.free_coeffs();
    const std::vector<double> ka = k.multiply(a);
    double h2 = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) h2 += a[i] * ka[i];
    r.w1_integral = std::abs(integrate(sol.w1h)) / std::sqrt(h2);

    for (Index n = 0; n < run.fluid->num_nodes(); ++n) {
      const Eigen::Vector3d uv = sol.uh.node_value(n);
      const NodeClass c = run.fluid->node_class(n);
      if (c == NodeClass::S) {
        r.wall_velocity = std::max(r.wall_velocity, uv.cwiseAbs().maxCoeff());
      } else if (c == NodeClass::Omega) {
        const Eigen::Vector3d x = run.fluid->node_position(n);
        const double w2 = sol.w2h.evaluate({x.x(), x.y()}).value;
        r.trace_mismatch = std::max({r.trace_mismatch, std::abs(uv.x()), std::abs(uv.y()), std::abs(uv.z() - w2)});
      }
    }
    r.schur_mismatch = sol.schur_mismatch;

    // The cached mu_h(u*) of this data set.
    const DataCache dc = run.solver->prepare(data);
    const std::vector<double> bmu = run.solver->cache().solver().forms().b.multiply(dc.mu.velocity.coeffs());
    for (double v : bmu) r.mu_divergence = std::max(r.mu_divergence, std::abs(v));
    r.mu_mean_pressure = std::abs(dc.mu.pressure.integral());
  });
  say("done");
  return run;
}

ConvergenceReport convergence_study(const StudyOptions& options) {
  if (options.levels.size() < 2) throw InvalidArgument("convergence_study: at least two levels are required");
  for (std::size_t i = 1; i < options.levels.size(); ++i)
    if (options.levels[i] <= options.levels[i - 1])
      throw InvalidArgument("convergence_study: levels must be strictly increasing");
  const ManufacturedCase mc = manufactured_case(options.lambda, options.rho);
  ConvergenceReport report;
  report.case_name = options.rho == 0.0 ? "paper-rho0" : "manufactured-rho";
  report.lambda = options.lambda;
  report.rho = options.rho;
  report.h2_norm = options.h2_norm;
  for (int level : options.levels) {
    report.levels.push_back(run_level(mc, level, options).record);
  }
  return report;
}

std::vector<InfSupRecord> infsup_study(const std::vector<int>& levels, int reference_level) {
  if (levels.empty()) throw InvalidArgument("infsup_study: no levels given");
  const double beta_ref = discrete_infsup_constant(ArgyrisSpace(build_square_mesh(reference_level)));
  std::vector<InfSupRecord> out;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const ArgyrisSpace space(build_square_mesh(levels[i]));
    const PlateField xi = solve_xi(space);
    InfSupRecord r;
    r.level = levels[i];
    r.beta = discrete_infsup_constant(space);
    r.integral = integrate(xi);
    r.identity_error = std::abs(r.integral - r.beta * r.beta) / (r.beta * r.beta);
    r.error = std::sqrt(std::max(beta_ref * beta_ref - r.beta * r.beta, 0.0));
    r.order = std::numeric_limits<double>::quiet_NaN();
    if (i > 0)
      r.order = std::log(out.back().error / r.error) / std::log(static_cast<double>(levels[i]) / levels[i - 1]);
    out.push_back(r);
  }
  return out;
}

// ---------------------------------------------------------------------------

void write_report_csv(const ConvergenceReport& report, std::ostream& out) {
  const char* norm = report.h2_norm == H2Norm::Hessian ? "hessian" : "laplacian";
  out << "kind,level,level_to,plate_elements,char_length,fluid_elements,plate_h2,plate_h1,plate_l2,"
         "velocity_l2,velocity_h1,pressure_l2,energy_relative,c_tilde,h2_norm,lambda,rho\r\n";
  for (const LevelRecord& r : report.levels) {
    out << "error," << r.level << ",," << r.plate_elements << ',' << format_double(r.char_length) << ','
        << r.fluid_elements << ',' << format_double(r.plate.h2) << ',' << format_double(r.plate.h1) << ','
        << format_double(r.plate.l2) << ',' << format_double(r.fluid.l2) << ',' << format_double(r.fluid.h1) << ','
        << format_double(r.fluid.p) << ',' << format_double(r.energy.relative) << ',' << format_double(r.c_tilde)
        << ',' << norm << ',' << format_double(report.lambda) << ',' << format_double(report.rho) << "\r\n";
  }
  for (const RateRow& r : report.rates()) {
    out << "rate," << r.from << ',' << r.to << ",,,," << format_rate(r.plate_h2) << ',' << format_rate(r.plate_h1)
        << ',' << format_rate(r.plate_l2) << ',' << format_rate(r.fluid_l2) << ',' << format_rate(r.fluid_h1) << ','
        << format_rate(r.pressure) << ",,," << norm << ',' << format_double(report.lambda) << ','
        << format_double(report.rho) << "\r\n";
  }
}

void write_rate_table(const ConvergenceReport& report, std::ostream& out) {
  char line[256];
  const char* h2 = report.h2_norm == H2Norm::Hessian ? "|w1-w1h|_H2" : "|lap(w1-w1h)|";
  out << "Structure errors (lambda = " << report.lambda << ", rho = " << report.rho << ")\n";
  std::snprintf(line, sizeof line, "%12s %12s %14s %14s %14s\n", "elements", "char.length", h2, "|w1-w1h|_H1",
                "||w1-w1h||_L2");
  out << line;
  for (const LevelRecord& r : report.levels) {
    std::snprintf(line, sizeof line, "%12d %12.4g %14.3e %14.3e %14.3e\n", r.plate_elements, r.char_length, r.plate.h2,
                  r.plate.h1, r.plate.l2);
    out << line;
  }
  out << "\nStructure rates k in O(h^k)\n";
  std::snprintf(line, sizeof line, "%14s %8s %8s %8s\n", "meshes", "H2", "H1", "L2");
  out << line;
  const auto rates = report.rates();
  for (const RateRow& r : rates) {
    const std::string pair = std::to_string(r.from) + " / " + std::to_string(r.to);
    std::snprintf(line, sizeof line, "%14s %8.2f %8.2f %8.2f\n", pair.c_str(), r.plate_h2, r.plate_h1, r.plate_l2);
    out << line;
  }
  out << "\nFluid errors\n";
  std::snprintf(line, sizeof line, "%12s %12s %14s %14s %14s\n", "elements", "char.length", "||u-uh||_L2",
                "|u-uh|_H1", "||p-ph||_L2");
  out << line;
  for (const LevelRecord& r : report.levels) {
    std::snprintf(line, sizeof line, "%12d %12.4g %14.3e %14.3e %14.3e\n", r.fluid_elements,
                  r.fluid_char_length, r.fluid.l2, r.fluid.h1, r.fluid.p);
    out << line;
  }
  out << "\nFluid rates k in O(h^k)\n";
  std::snprintf(line, sizeof line, "%14s %8s %8s %8s\n", "meshes", "L2", "H1", "L2(p)");
  out << line;
  for (const RateRow& r : rates) {
    const std::string pair = std::to_string(r.from) + " / " + std::to_string(r.to);
    std::snprintf(line, sizeof line, "%14s %8.2f %8.2f %8.2f\n", pair.c_str(), r.fluid_l2, r.fluid_h1, r.pressure);
    out << line;
  }
}

void write_infsup_table(const std::vector<InfSupRecord>& rows, std::ostream& out) {
  char line[256];
  std::snprintf(line, sizeof line, "%6s %16s %16s %12s %14s %8s\n", "level", "beta_h", "int xi_h", "identity",
                "|lap(xi-xi_h)|", "order");
  out << line;
  for (const InfSupRecord& r : rows) {
    std::snprintf(line, sizeof line, "%6d %16.10e %16.10e %12.3e %14.4e %8.2f\n", r.level, r.beta, r.integral,
                  r.identity_error, r.error, r.order);
    out << line;
  }
}

}  // namespace fsi
