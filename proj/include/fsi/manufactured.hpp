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
#include <initializer_list>
#include <vector>

#include <Eigen/Core>

#include "fsi/argyris.hpp"
#include "fsi/coupled.hpp"

namespace fsi {

// Dense univariate polynomial, c[k] multiplies x^k.
class Polynomial1 {
 public:
  Polynomial1() = default;
  Polynomial1(std::initializer_list<double> c) : c_(c) { trim(); }
  explicit Polynomial1(std::vector<double> c) : c_(std::move(c)) { trim(); }
  static Polynomial1 constant(double v) { return Polynomial1({v}); }
  static Polynomial1 monomial(int k);

  int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
  const std::vector<double>& coeffs() const noexcept { return c_; }

  double operator()(double x) const;
  Polynomial1 derivative(int order = 1) const;
  Polynomial1 pow(int e) const;

  friend Polynomial1 operator+(const Polynomial1& a, const Polynomial1& b);
  friend Polynomial1 operator-(const Polynomial1& a, const Polynomial1& b);
  friend Polynomial1 operator*(const Polynomial1& a, const Polynomial1& b);
  friend Polynomial1 operator*(double s, const Polynomial1& a);

 private:
  void trim();
  std::vector<double> c_;
};

// Sum of products coef * P(x) Q(y) R(z). Differentiation is exact.
class SeparablePolynomial {
 public:
  struct Term {
    double coef;
    std::array<Polynomial1, 3> factor;
  };

  SeparablePolynomial() = default;
  SeparablePolynomial(double coef, Polynomial1 px, Polynomial1 py, Polynomial1 pz = Polynomial1::constant(1.0));

  const std::vector<Term>& terms() const noexcept { return terms_; }

  double operator()(const Eigen::Vector3d& p) const;
  double operator()(double x, double y, double z = 0.0) const { return (*this)({x, y, z}); }

  SeparablePolynomial derivative(int axis, int order = 1) const;
  // Laplacian in the first `dims` variables (2 for plate fields, 3 for fluid).
  SeparablePolynomial laplacian(int dims) const;
  // Restriction to z = z0, as a function of (x, y).
  SeparablePolynomial restrict_z(double z0) const;

  Jet2 jet2(const Eigen::Vector2d& p) const;
  Eigen::Vector3d gradient(const Eigen::Vector3d& p) const;

  friend SeparablePolynomial operator+(SeparablePolynomial a, const SeparablePolynomial& b);
  friend SeparablePolynomial operator-(SeparablePolynomial a, const SeparablePolynomial& b);
  friend SeparablePolynomial operator*(double s, SeparablePolynomial a);

 private:
  std::vector<Term> terms_;
};

// Closed-form coupled plate/fluid solution with zero pressure, and the
// resolvent data it satisfies for a given lambda and rho.
struct ManufacturedCase {
  double lambda = 1.0;
  double rho = 0.0;
  SeparablePolynomial w1, w2;
  std::array<SeparablePolynomial, 3> u;
  SeparablePolynomial w1_star, w2_star;
  std::array<SeparablePolynomial, 3> u_star;
  // P_rho (lambda w1* + w2*) and P_rho w2*, both in strong form.
  SeparablePolynomial plate_load, p_w2_star;

  // For rho = 0 the data are passed literally; for rho > 0 the plate terms
  // go through the strong forms above.
  ResolventData data() const;
};

// Throws InvalidArgument unless lambda > 0 and rho >= 0.
ManufacturedCase manufactured_case(double lambda, double rho = 0.0);

// Largest deviations found at `samples` pseudo-random points (fixed seed).
struct ManufacturedChecks {
  double divergence = 0.0;       // |div u| in the cube
  double wall_trace = 0.0;       // |u| on the five walls
  double plate_trace = 0.0;      // |u - (0, 0, w2)| on z = 0
  double normal_stress = 0.0;    // |lap^2 w1 + (lap u) . nu| on z = 0
  double wall_forcing = 0.0;     // |u* . nu| on the walls
  double finite_difference = 0.0;  // relative mismatch of hand derivatives against central differences
};
ManufacturedChecks check_manufactured(const ManufacturedCase& mc, int samples, unsigned seed = 12345);

}  // namespace fsi
