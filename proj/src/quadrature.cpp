/*
  This file is part of fsi-resolvent, a mixed finite element solver for a
  Stokes fluid coupled to a clamped plate.

  Licensed under the Apache License, Version 2.0 (the "License"); you may
  not use this file except in compliance with the License.  You may obtain
  a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0
*/

#include "fsi/quadrature.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "fsi/error.hpp"

namespace fsi {

// Golub-Welsch on the monic Jacobi recurrence for (1-x)^a (1+x)^b on
// [-1,1] with b = 0, then mapped to [0,1].
void gauss_jacobi(int m, double alpha, std::vector<double>& nodes, std::vector<double>& weights) {
  if (m < 1) throw InvalidArgument("gauss_jacobi: need at least one point");
  const double a = alpha;
  const double b = 0.0;
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(m, m);
  for (int k = 0; k < m; ++k) {
    const double s = 2.0 * k + a + b;
    J(k, k) = (k == 0) ? (b - a) / (a + b + 2.0) : (b * b - a * a) / (s * (s + 2.0));
    if (k + 1 < m) {
      const double k1 = k + 1.0;
      const double s1 = 2.0 * k1 + a + b;
      const double beta = 4.0 * k1 * (k1 + a) * (k1 + b) * (k1 + a + b) /
                          (s1 * s1 * (s1 + 1.0) * (s1 - 1.0));
      J(k, k + 1) = J(k + 1, k) = std::sqrt(beta);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(J);
  // mu0 = int_{-1}^{1} (1-x)^a dx = 2^{a+1}/(a+1)
  const double mu0 = std::pow(2.0, a + 1.0) / (a + 1.0);
  const double to_unit = 1.0 / std::pow(2.0, a + 1.0);
  nodes.resize(m);
  weights.resize(m);
  for (int k = 0; k < m; ++k) {
    const double v0 = eig.eigenvectors()(0, k);
    nodes[k] = 0.5 * (1.0 + eig.eigenvalues()(k));
    weights[k] = mu0 * v0 * v0 * to_unit;
  }
}

namespace {
int points_for(int degree) { return degree / 2 + 1; }
}  // namespace

QuadratureRule quadrature_triangle(int degree) {
  if (degree < 0 || degree > kMaxTriangleDegree)
    throw InvalidArgument("quadrature_triangle: unsupported degree " + std::to_string(degree));
  QuadratureRule rule;
  rule.dim = 2;
  if (degree <= 1) {
    rule.exact_degree = 1;
    rule.barycentric.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 0.0});
    rule.weights.push_back(0.5);
    return rule;
  }
  const int m = points_for(degree);
  rule.exact_degree = 2 * m - 1;
  std::vector<double> u, wu, v, wv;
  gauss_jacobi(m, 1.0, u, wu);
  gauss_jacobi(m, 0.0, v, wv);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const double x = u[i];
      const double y = v[j] * (1.0 - u[i]);
      rule.barycentric.push_back({1.0 - x - y, x, y, 0.0});
      rule.weights.push_back(wu[i] * wv[j]);
    }
  return rule;
}

QuadratureRule quadrature_tet(int degree) {
  if (degree < 0 || degree > kMaxTetDegree)
    throw InvalidArgument("quadrature_tet: unsupported degree " + std::to_string(degree));
  QuadratureRule rule;
  rule.dim = 3;
  if (degree <= 1) {
    rule.exact_degree = 1;
    rule.barycentric.push_back({0.25, 0.25, 0.25, 0.25});
    rule.weights.push_back(1.0 / 6.0);
    return rule;
  }
  const int m = points_for(degree);
  rule.exact_degree = 2 * m - 1;
  std::vector<double> u, wu, v, wv, w, ww;
  gauss_jacobi(m, 2.0, u, wu);
  gauss_jacobi(m, 1.0, v, wv);
  gauss_jacobi(m, 0.0, w, ww);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        const double x = u[i];
        const double y = v[j] * (1.0 - u[i]);
        const double z = w[k] * (1.0 - u[i]) * (1.0 - v[j]);
        rule.barycentric.push_back({1.0 - x - y - z, x, y, z});
        rule.weights.push_back(wu[i] * wv[j] * ww[k]);
      }
  return rule;
}

}  // namespace fsi
