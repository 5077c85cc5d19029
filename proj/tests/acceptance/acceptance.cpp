/*
  This file is part of fsi-resolvent, a mixed finite element solver for a
  Stokes fluid coupled to a clamped plate.

  Licensed under the Apache License, Version 2.0 (the "License"); you may
  not use this file except in compliance with the License.  You may obtain
  a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0
*/

// Acceptance run: the manufactured plate/fluid study at levels 1, 2, 4, 8
// with lambda = 1 and rho = 0, followed by one PASS or FAIL line per
// criterion. The exit status is nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "fsi/argyris.hpp"
#include "fsi/manufactured.hpp"
#include "fsi/verification.hpp"

using namespace fsi;

namespace {

int failures = 0;

void verdict(int id, bool ok, const std::string& detail) {
  std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

// Largest deviation of the local DOF/basis pairing from the identity, and of
// a random quintic from its interpolant, over all triangles of a level.
void argyris_properties(int level, double& duality, double& reproduction) {
  const ArgyrisSpace s(build_square_mesh(level));
  std::mt19937 gen(2024);
  std::uniform_real_distribution<double> u(-1.0, 1.0), unit(0.0, 1.0);
  double c[6][6] = {};
  for (int a = 0; a <= 5; ++a)
    for (int b = 0; a + b <= 5; ++b) c[a][b] = u(gen);
  auto dp = [](double x, int a, int d) {
    if (d > a) return 0.0;
    double f = 1.0;
    for (int k = 0; k < d; ++k) f *= a - k;
    return f * std::pow(x, a - d);
  };
  auto q = [&](const Eigen::Vector2d& p) {
    auto der = [&](int dx, int dy) {
      double v = 0.0;
      for (int a = 0; a <= 5; ++a)
        for (int b = 0; a + b <= 5; ++b) v += c[a][b] * dp(p.x(), a, dx) * dp(p.y(), b, dy);
      return v;
    };
    Jet2 j;
    j.value = der(0, 0);
    j.grad = {der(1, 0), der(0, 1)};
    j.hess << der(2, 0), der(1, 1), der(1, 1), der(0, 2);
    return j;
  };
  const PlateField f = interpolate(s, q, false);
  duality = reproduction = 0.0;
  for (Index t = 0; t < s.mesh().num_triangles(); ++t) {
    for (int j = 0; j < 21; ++j) {
      const auto phi = [&s, t, j](const Eigen::Vector2d& p) {
        ArgyrisBasisValues b;
        s.evaluate_basis(t, p, b);
        Jet2 r;
        r.value = b.value[j];
        r.grad = {b.dx[j], b.dy[j]};
        r.hess << b.dxx[j], b.dxy[j], b.dxy[j], b.dyy[j];
        return r;
      };
      const auto col = s.local_functionals(t, phi);
      for (int i = 0; i < 21; ++i) duality = std::max(duality, std::abs(col[i] - (i == j ? 1.0 : 0.0)));
    }
    const auto& tri = s.mesh().triangles()[t];
    for (int k = 0; k < 50; ++k) {
      double a = unit(gen), b = unit(gen);
      if (a + b > 1.0) a = 1.0 - a, b = 1.0 - b;
      const Eigen::Vector2d p = (1 - a - b) * s.mesh().vertices()[tri[0]] + a * s.mesh().vertices()[tri[1]] +
                                b * s.mesh().vertices()[tri[2]];
      const Jet2 e = q(p), h = f.evaluate_in(t, p);
      reproduction = std::max({reproduction, std::abs(e.value - h.value), (e.grad - h.grad).cwiseAbs().maxCoeff(),
                               (e.hess - h.hess).cwiseAbs().maxCoeff()});
    }
  }
}

}  // namespace

int main() {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();

  StudyOptions opt;
  opt.levels = {1, 2, 4, 8};
  opt.lambda = 1.0;
  opt.rho = 0.0;
  opt.progress = [start](const std::string& msg) {
    const double s = std::chrono::duration<double>(clock::now() - start).count();
    std::fprintf(stderr, "[%7.1f s] %s\n", s, msg.c_str());
  };
  const ManufacturedCase mc = manufactured_case(opt.lambda, opt.rho);

  ConvergenceReport report;
  report.case_name = "paper-rho0";
  report.lambda = opt.lambda;
  report.rho = opt.rho;
  std::vector<double> pressure_mean;
  for (int level : opt.levels) {
    LevelRun run = run_level(mc, level, opt);
    pressure_mean.push_back(std::abs(run.solution->ph.integral()));
    report.levels.push_back(run.record);
  }
  const double study_seconds = std::chrono::duration<double>(clock::now() - start).count();
  write_rate_table(report, std::cout);
  {
    std::ofstream csv("acceptance_report.csv", std::ios::binary);
    write_report_csv(report, csv);
  }
  const auto rates = report.rates();
  const RateRow& last = rates.back();
  const LevelRecord& l1 = report.levels.front();
  const LevelRecord& l8 = report.levels.back();

  verdict(1, last.plate_h2 >= 3.5 && last.plate_h2 <= 4.5 && study_seconds <= 600.0,
          fmt("plate H2 rate 4->8 = %.3f (target [3.5, 4.5]), study time %.0f s (target <= 600 s)", last.plate_h2,
              study_seconds));

  const double ratio = l1.plate.h2 / 7.132e-5;
  verdict(2, ratio >= 1.0 / 3.0 && ratio <= 3.0,
          fmt("level 1 plate H2 error %.4e, ratio to 7.132e-5 = %.3f (target [1/3, 3])", l1.plate.h2, ratio));

  const bool l2_ok = last.fluid_l2 >= 2.5 && last.fluid_l2 <= 3.5;
  const bool h1_ok = last.fluid_h1 >= 1.6 && last.fluid_h1 <= 2.4;
  const bool p_ok = last.pressure >= 1.5 && last.pressure <= 3.0;
  verdict(3, l2_ok && h1_ok && p_ok,
          fmt("fluid rates 4->8: velocity L2 %.3f [2.5, 3.5], velocity H1 %.3f [1.6, 2.4], pressure L2 %.3f [1.5, 3.0]",
              last.fluid_l2, last.fluid_h1, last.pressure));

  const std::vector<InfSupRecord> inf = infsup_study({1, 2, 4, 8, 16}, 32);
  bool positive = true, decreasing = true, identity = true;
  double worst_identity = 0.0;
  for (std::size_t i = 0; i < inf.size(); ++i) {
    positive = positive && inf[i].beta > 0.0;
    if (i > 0) decreasing = decreasing && inf[i].error < inf[i - 1].error;
    worst_identity = std::max(worst_identity, inf[i].identity_error);
    identity = identity && inf[i].identity_error <= 1e-9;
  }
  write_infsup_table(inf, std::cout);
  const double order = inf[inf.size() - 2].order;  // 4 -> 8, well inside the reference resolution
  verdict(4, positive && decreasing && order >= 1.8,
          fmt("beta_h > 0 at levels 1..16, error toward level 32 decreasing, observed order 4->8 = %.2f (target >= 1.8)",
              order));
  verdict(5, identity, fmt("max |int xi_h - beta_h^2| / beta_h^2 = %.2e over levels 1..16 (target 1e-9)", worst_identity));

  bool monotone = true;
  for (std::size_t i = 1; i < report.levels.size(); ++i)
    monotone = monotone && report.levels[i].energy.residual < report.levels[i - 1].energy.residual;
  std::string residuals;
  for (const auto& r : report.levels) residuals += fmt(" %.2e", r.energy.residual);
  verdict(6, monotone && l8.energy.relative < 0.01,
          "energy residual by level" + residuals + fmt(", level 8 relative %.3e (target < 1e-2)", l8.energy.relative));

  double duality = 0.0, reproduction = 0.0;
  argyris_properties(4, duality, reproduction);
  double mu_div = 0.0, mu_mean = 0.0, w1_mean = 0.0, p_mean = 0.0;
  for (std::size_t i = 0; i < report.levels.size(); ++i) {
    const auto& r = report.levels[i];
    mu_div = std::max(mu_div, r.mu_divergence);
    mu_mean = std::max(mu_mean, r.mu_mean_pressure);
    w1_mean = std::max(w1_mean, r.w1_integral);
    p_mean = std::max(p_mean, pressure_mean[i]);
  }
  const ManufacturedChecks mcheck = check_manufactured(mc, 1000);
  const double consistency = std::max({mcheck.divergence, mcheck.wall_trace, mcheck.plate_trace, mcheck.normal_stress});
  const bool ok7 = duality <= 1e-9 && reproduction <= 1e-9 && mu_div <= 1e-9 && mu_mean <= 1e-10 && p_mean <= 1e-10 &&
                   w1_mean <= 1e-10 && consistency <= 1e-12;
  verdict(7, ok7,
          fmt("Argyris duality %.1e, reproduction %.1e; mu_h divergence %.1e; ", duality, reproduction, mu_div) +
              fmt("mean pressure %.1e, relative mean w1h %.1e; manufactured consistency %.1e", std::max(mu_mean, p_mean),
                  w1_mean, consistency));

  std::printf("%d of 7 criteria passed\n", 7 - failures);
  return failures == 0 ? 0 : 1;
}
