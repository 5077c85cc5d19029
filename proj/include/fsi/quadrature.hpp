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
#include <vector>

namespace fsi {

// Points are stored as barycentric coordinates; for a triangle only the
// first three entries are used. Weights sum to the measure of the reference
// element (1/2 for the triangle, 1/6 for the tetrahedron), so mapping to a
// physical element multiplies them by |det J|.
struct QuadratureRule {
  int dim = 0;
  int exact_degree = 0;
  std::vector<std::array<double, 4>> barycentric;
  std::vector<double> weights;

  std::size_t size() const noexcept { return weights.size(); }
};

inline constexpr int kMaxTriangleDegree = 14;
inline constexpr int kMaxTetDegree = 8;

// Collapsed (Duffy) Gauss-Jacobi product rules. Throws InvalidArgument for
// degrees outside [0, kMax*Degree].
QuadratureRule quadrature_triangle(int degree);
QuadratureRule quadrature_tet(int degree);

// m-point Gauss-Jacobi rule on [0,1] for the weight (1-t)^alpha, exact for
// polynomials of degree 2m-1.
void gauss_jacobi(int m, double alpha, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace fsi
