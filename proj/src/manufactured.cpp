/*
  This file is part of fsi-resolvent, a mixed finite element solver for a
  Stokes fluid coupled to a clamped plate.

  Licensed under the Apache License, Version 2.0 (the "License"); you may
  not use this file except in compliance with the License.  You may obtain
  a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0
*/

#include "fsi/manufactured.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>

#include "fsi/error.hpp"

namespace fsi {

Polynomial1 Polynomial1::monomial(int k) {
  std::vector<double> c(static_cast<std::size_t>(k) + 1, 0.0);
  c[k] = 1.0;
  return Polynomial1(std::move(c));
}

void Polynomial1::trim() {
  while (c_.size() > 1 && c_.back() == 0.0) c_.pop_back();
  if (c_.empty()) c_.push_back(0.0);
}

double Polynomial1::operator()(double x) const {
  double v = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) v = v * x + *it;
  return v;
}

Polynomial1 Polynomial1::derivative(int order) const {
  std::vector<double> c = c_;
  for (int o = 0; o < order; ++o) {
    if (c.size() <= 1) return constant(0.0);
    std::vector<double> d(c.size() - 1);
    for (std::size_t k = 1; k < c.size(); ++k) d[k - 1] = static_cast<double>(k) * c[k];
    c = std::move(d);
  }
  return Polynomial1(std::move(c));
}

Polynomial1 Polynomial1::pow(int e) const {
  Polynomial1 r = constant(1.0);
  for (int k = 0; k < e; ++k) r = r * *this;
  return r;
}

Polynomial1 operator+(const Polynomial1& a, const Polynomial1& b) {
  std::vector<double> c(std::max(a.c_.size(), b.c_.size()), 0.0);
  for (std::size_t k = 0; k < a.c_.size(); ++k) c[k] += a.c_[k];
  for (std::size_t k = 0; k < b.c_.size(); ++k) c[k] += b.c_[k];
  return Polynomial1(std::move(c));
}

Polynomial1 operator-(const Polynomial1& a, const Polynomial1& b) { return a + (-1.0) * b; }

Polynomial1 operator*(const Polynomial1& a, const Polynomial1& b) {
  std::vector<double> c(a.c_.size() + b.c_.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
  return Polynomial1(std::move(c));
}

Polynomial1 operator*(double s, const Polynomial1& a) {
  std::vector<double> c = a.c_;
  for (double& v : c) v *= s;
  return Polynomial1(std::move(c));
}

// ---------------------------------------------------------------------------

SeparablePolynomial::SeparablePolynomial(double coef, Polynomial1 px, Polynomial1 py, Polynomial1 pz) {
  terms_.push_back({coef, {std::move(px), std::move(py), std::move(pz)}});
}

double SeparablePolynomial::operator()(const Eigen::Vector3d& p) const {
  double s = 0.0;
  for (const auto& t : terms_) s += t.coef * t.factor[0](p.x()) * t.factor[1](p.y()) * t.factor[2](p.z());
  return s;
}

SeparablePolynomial SeparablePolynomial::derivative(int axis, int order) const {
  SeparablePolynomial out;
  for (const auto& t : terms_) {
    Term d = t;
    d.factor[axis] = t.factor[axis].derivative(order);
    if (d.factor[axis].degree() == 0 && d.factor[axis].coeffs()[0] == 0.0) continue;
    out.terms_.push_back(std::move(d));
  }
  return out;
}

SeparablePolynomial SeparablePolynomial::laplacian(int dims) const {
  SeparablePolynomial out;
  for (int a = 0; a < dims; ++a) out = out + derivative(a, 2);
  return out;
}

SeparablePolynomial SeparablePolynomial::restrict_z(double z0) const {
  SeparablePolynomial out;
  for (const auto& t : terms_) {
    Term r = t;
    r.coef *= t.factor[2](z0);
    r.factor[2] = Polynomial1::constant(1.0);
    if (r.coef != 0.0) out.terms_.push_back(std::move(r));
  }
  return out;
}

Jet2 SeparablePolynomial::jet2(const Eigen::Vector2d& p) const {
  Jet2 j;
  for (const auto& t : terms_) {
    const auto& fx = t.factor[0];
    const auto& fy = t.factor[1];
    const double cz = t.coef * t.factor[2](0.0);
    const double x0 = fx(p.x()), x1 = fx.derivative(1)(p.x()), x2 = fx.derivative(2)(p.x());
    const double y0 = fy(p.y()), y1 = fy.derivative(1)(p.y()), y2 = fy.derivative(2)(p.y());
    j.value += cz * x0 * y0;
    j.grad += cz * Eigen::Vector2d(x1 * y0, x0 * y1);
    j.hess(0, 0) += cz * x2 * y0;
    j.hess(0, 1) += cz * x1 * y1;
    j.hess(1, 1) += cz * x0 * y2;
  }
  j.hess(1, 0) = j.hess(0, 1);
  return j;
}

Eigen::Vector3d SeparablePolynomial::gradient(const Eigen::Vector3d& p) const {
  Eigen::Vector3d g = Eigen::Vector3d::Zero();
  for (const auto& t : terms_) {
    const double v[3] = {t.factor[0](p.x()), t.factor[1](p.y()), t.factor[2](p.z())};
    const double d[3] = {t.factor[0].derivative(1)(p.x()), t.factor[1].derivative(1)(p.y()),
                         t.factor[2].derivative(1)(p.z())};
    g += t.coef * Eigen::Vector3d(d[0] * v[1] * v[2], v[0] * d[1] * v[2], v[0] * v[1] * d[2]);
  }
  return g;
}

SeparablePolynomial operator+(SeparablePolynomial a, const SeparablePolynomial& b) {
  a.terms_.insert(a.terms_.end(), b.terms_.begin(), b.terms_.end());
  return a;
}

SeparablePolynomial operator-(SeparablePolynomial a, const SeparablePolynomial& b) {
  return std::move(a) + (-1.0) * b;
}

SeparablePolynomial operator*(double s, SeparablePolynomial a) {
  for (auto& t : a.terms_) t.coef *= s;
  return a;
}

// ---------------------------------------------------------------------------

ManufacturedCase manufactured_case(double lambda, double rho) {
  if (!(lambda > 0.0)) throw InvalidArgument("manufactured_case: lambda must be positive");
  if (!(rho >= 0.0)) throw InvalidArgument("manufactured_case: rho must be nonnegative");
  using P = Polynomial1;
  const P x = P::monomial(1);
  const P xm1 = P({-1.0, 1.0});
  const P one = P::constant(1.0);
  const P x4 = x.pow(4) * xm1.pow(4);        // x^4 (x-1)^4
  const P x2 = x.pow(2) * xm1.pow(2);        // x^2 (x-1)^2
  const P odd = P({-1.0, 2.0});              // 2x - 1
  const P q14 = P({3.0, -14.0, 14.0});       // 14x^2 - 14x + 3
  const P q6 = P({1.0, -6.0, 6.0});          // 6x^2 - 6x + 1
  const P q9 = P({2.0, -9.0, 9.0});          // 9x^2 - 9x + 2
  const P z1 = P({0.0, 0.0, -30.0, -60.0, -30.0});
  const P z3 = P({-1.0, 0.0, 0.0, -10.0, -15.0, -6.0});

  ManufacturedCase mc;
  mc.lambda = lambda;
  mc.rho = rho;
  mc.w1 = SeparablePolynomial(-1.0, x4 * odd, x4, one);
  mc.w2 = -1.0 * mc.w1.laplacian(2);
  mc.u[0] = SeparablePolynomial(2.0, x.pow(3) * xm1.pow(3) * q9, x4, z1) +
            SeparablePolynomial(0.8, x.pow(5) * xm1.pow(5), x2 * q14, z1);
  mc.u[1] = SeparablePolynomial();
  mc.u[2] = SeparablePolynomial(-12.0, x2 * odd * q6, x4, z3) + SeparablePolynomial(-4.0, x4 * odd, x2 * q14, z3);

  const SeparablePolynomial bih = mc.w1.laplacian(2).laplacian(2);
  mc.w1_star = lambda * mc.w1 - mc.w2;
  mc.w2_star = lambda * mc.w2 + bih;
  for (int c = 0; c < 3; ++c) mc.u_star[c] = lambda * mc.u[c] - mc.u[c].laplacian(3);
  mc.plate_load = (lambda * lambda) * (mc.w1 - rho * mc.w1.laplacian(2)) + bih;
  mc.p_w2_star = lambda * (mc.w2 - rho * mc.w2.laplacian(2)) + bih;
  return mc;
}

ResolventData ManufacturedCase::data() const {
  auto self = std::make_shared<const ManufacturedCase>(*this);
  ResolventData d;
  d.lambda = lambda;
  d.rho = rho;
  d.w1_star = [self](const Eigen::Vector2d& p) { return self->w1_star.jet2(p); };
  d.u_star = [self](const Eigen::Vector3d& p) {
    return Eigen::Vector3d(self->u_star[0](p), self->u_star[1](p), self->u_star[2](p));
  };
  d.p_w2_star = [self](const Eigen::Vector2d& p) { return self->p_w2_star.jet2(p); };
  if (rho == 0.0) {
    d.w2_star = [self](const Eigen::Vector2d& p) { return self->w2_star.jet2(p); };
  } else {
    d.plate_load = [self](const Eigen::Vector2d& p) { return self->plate_load.jet2(p); };
  }
  return d;
}

ManufacturedChecks check_manufactured(const ManufacturedCase& mc, int samples, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  ManufacturedChecks out;

  std::array<SeparablePolynomial, 3> lap_u;
  for (int c = 0; c < 3; ++c) lap_u[c] = mc.u[c].laplacian(3);
  const SeparablePolynomial div = mc.u[0].derivative(0) + mc.u[1].derivative(1) + mc.u[2].derivative(2);
  const SeparablePolynomial bih = mc.w1.laplacian(2).laplacian(2);

  auto wall_point = [&](int face) {
    Eigen::Vector3d p(unit(rng), unit(rng), -unit(rng));
    Eigen::Vector3d n = Eigen::Vector3d::Zero();
    switch (face) {
      case 0: p.x() = 0.0; n.x() = -1.0; break;
      case 1: p.x() = 1.0; n.x() = 1.0; break;
      case 2: p.y() = 0.0; n.y() = -1.0; break;
      case 3: p.y() = 1.0; n.y() = 1.0; break;
      default: p.z() = -1.0; n.z() = -1.0; break;
    }
    return std::pair{p, n};
  };

  for (int s = 0; s < samples; ++s) {
    const Eigen::Vector3d p(unit(rng), unit(rng), -unit(rng));
    out.divergence = std::max(out.divergence, std::abs(div(p)));

    const auto [w, n] = wall_point(s % 5);
    for (int c = 0; c < 3; ++c) out.wall_trace = std::max(out.wall_trace, std::abs(mc.u[c](w)));
    double ustar_n = 0.0;
    for (int c = 0; c < 3; ++c) ustar_n += mc.u_star[c](w) * n[c];
    out.wall_forcing = std::max(out.wall_forcing, std::abs(ustar_n));

    const Eigen::Vector3d top(unit(rng), unit(rng), 0.0);
    out.plate_trace = std::max({out.plate_trace, std::abs(mc.u[0](top)), std::abs(mc.u[1](top)),
                                std::abs(mc.u[2](top) - mc.w2(top))});
    out.normal_stress = std::max(out.normal_stress, std::abs(bih(top) + lap_u[2](top)));
  }

  // Central differences of hand-derived lower-order derivatives.
  const double h = 1e-5;
  std::vector<const SeparablePolynomial*> fields = {&mc.w1, &mc.w2, &mc.u[0], &mc.u[2], &lap_u[0], &lap_u[2]};
  const SeparablePolynomial lap_w1 = mc.w1.laplacian(2);
  const SeparablePolynomial lap_w2 = mc.w2.laplacian(2);
  fields.push_back(&lap_w1);
  fields.push_back(&lap_w2);
  for (const SeparablePolynomial* f : fields) {
    std::vector<std::array<double, 2>> pairs, lap_pairs;
    double scale = 0.0, lap_scale = 0.0;
    const SeparablePolynomial lap = f->laplacian(3);
    for (int s = 0; s < 20; ++s) {
      const Eigen::Vector3d p(unit(rng), unit(rng), -unit(rng));
      const Eigen::Vector3d g = f->gradient(p);
      double lap_fd = 0.0;
      for (int a = 0; a < 3; ++a) {
        Eigen::Vector3d e = Eigen::Vector3d::Zero();
        e[a] = h;
        pairs.push_back({g[a], ((*f)(p + e) - (*f)(p - e)) / (2.0 * h)});
        scale = std::max(scale, std::abs(g[a]));
        lap_fd += (f->gradient(p + e)[a] - f->gradient(p - e)[a]) / (2.0 * h);
      }
      lap_pairs.push_back({lap(p), lap_fd});
      lap_scale = std::max(lap_scale, std::abs(lap(p)));
    }
    if (lap_scale > 0.0)
      for (const auto& [exact, fd] : lap_pairs)
        out.finite_difference = std::max(out.finite_difference, std::abs(exact - fd) / lap_scale);
    if (scale == 0.0) continue;
    for (const auto& [exact, fd] : pairs)
      out.finite_difference = std::max(out.finite_difference, std::abs(exact - fd) / scale);
  }
  return out;
}

}  // namespace fsi
