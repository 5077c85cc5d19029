/*
  This file is part of fsi-resolvent, a mixed finite element solver for a
  Stokes fluid coupled to a clamped plate.

  Licensed under the Apache License, Version 2.0 (the "License"); you may
  not use this file except in compliance with the License.  You may obtain
  a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0
*/

#include "fsi/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

#include <Eigen/SparseCholesky>
#include <umfpack.h>

#include "fsi/error.hpp"

namespace fsi {

SparseMatrix SparseMatrix::from_triplets(Index rows, Index cols, std::span<const Triplet> entries,
                                         bool symmetric) {
  if (rows < 0 || cols < 0) throw InvalidArgument("SparseMatrix: negative shape");
  SparseMatrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.symmetric_ = symmetric;

  std::vector<Index> count(static_cast<std::size_t>(rows) + 1, 0);
  for (const auto& t : entries) {
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols)
      throw InvalidArgument("SparseMatrix: triplet (" + std::to_string(t.row) + ", " +
                            std::to_string(t.col) + ") outside the matrix shape");
    ++count[t.row + 1];
  }
  std::partial_sum(count.begin(), count.end(), count.begin());

  std::vector<std::pair<Index, double>> slots(entries.size());
  std::vector<Index> fill(count.begin(), count.end() - 1);
  for (const auto& t : entries) slots[fill[t.row]++] = {t.col, t.value};

  m.row_ptr_.assign(static_cast<std::size_t>(rows) + 1, 0);
  m.col_idx_.reserve(entries.size());
  m.values_.reserve(entries.size());
  for (Index r = 0; r < rows; ++r) {
    auto first = slots.begin() + count[r];
    auto last = slots.begin() + count[r + 1];
    std::sort(first, last, [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto it = first; it != last; ++it) {
      if (!m.col_idx_.empty() && static_cast<Index>(m.col_idx_.size()) > m.row_ptr_[r] &&
          m.col_idx_.back() == it->first) {
        m.values_.back() += it->second;
      } else {
        m.col_idx_.push_back(it->first);
        m.values_.push_back(it->second);
      }
    }
    m.row_ptr_[r + 1] = static_cast<Index>(m.col_idx_.size());
  }
  return m;
}

SparseMatrix SparseMatrix::identity(Index n) {
  std::vector<Triplet> t;
  t.reserve(n);
  for (Index i = 0; i < n; ++i) t.push_back({i, i, 1.0});
  return from_triplets(n, n, t, true);
}

double SparseMatrix::at(Index i, Index j) const {
  const auto first = col_idx_.begin() + row_ptr_[i];
  const auto last = col_idx_.begin() + row_ptr_[i + 1];
  const auto it = std::lower_bound(first, last, j);
  if (it == last || *it != j) return 0.0;
  return values_[it - col_idx_.begin()];
}

double SparseMatrix::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double SparseMatrix::symmetry_error() const {
  if (rows_ != cols_) return std::numeric_limits<double>::infinity();
  double err = 0.0;
  for (Index i = 0; i < rows_; ++i)
    for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      err = std::max(err, std::abs(values_[k] - at(col_idx_[k], i)));
  return err;
}

void SparseMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  if (static_cast<Index>(x.size()) != cols_ || static_cast<Index>(y.size()) != rows_)
    throw InvalidArgument("SparseMatrix::multiply: dimension mismatch");
  for (Index i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) s += values_[k] * x[col_idx_[k]];
    y[i] = s;
  }
}

std::vector<double> SparseMatrix::multiply(std::span<const double> x) const {
  std::vector<double> y(rows_);
  multiply(x, y);
  return y;
}

void SparseMatrix::multiply_transpose_add(std::span<const double> x, std::span<double> y) const {
  if (static_cast<Index>(x.size()) != rows_ || static_cast<Index>(y.size()) != cols_)
    throw InvalidArgument("SparseMatrix::multiply_transpose_add: dimension mismatch");
  for (Index i = 0; i < rows_; ++i)
    for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) y[col_idx_[k]] += values_[k] * x[i];
}

SparseMatrix SparseMatrix::transpose() const {
  std::vector<Triplet> t;
  t.reserve(values_.size());
  for (Index i = 0; i < rows_; ++i)
    for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) t.push_back({col_idx_[k], i, values_[k]});
  return from_triplets(cols_, rows_, t, symmetric_);
}

SparseMatrix SparseMatrix::scaled(double s) const {
  SparseMatrix m = *this;
  for (double& v : m.values_) v *= s;
  return m;
}

SparseMatrix SparseMatrix::extract(std::span<const Index> row_map, Index new_rows,
                                   std::span<const Index> col_map, Index new_cols) const {
  if (static_cast<Index>(row_map.size()) != rows_ || static_cast<Index>(col_map.size()) != cols_)
    throw InvalidArgument("SparseMatrix::extract: map size mismatch");
  std::vector<Triplet> t;
  for (Index i = 0; i < rows_; ++i) {
    if (row_map[i] < 0) continue;
    for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      const Index j = col_map[col_idx_[k]];
      if (j >= 0) t.push_back({row_map[i], j, values_[k]});
    }
  }
  return from_triplets(new_rows, new_cols, t, symmetric_ && row_map.data() == col_map.data());
}

Eigen::SparseMatrix<double, Eigen::ColMajor> SparseMatrix::to_eigen() const {
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(values_.size());
  for (Index i = 0; i < rows_; ++i)
    for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) t.emplace_back(i, col_idx_[k], values_[k]);
  Eigen::SparseMatrix<double, Eigen::ColMajor> m(rows_, cols_);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

Eigen::MatrixXd SparseMatrix::to_dense() const {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(rows_, cols_);
  for (Index i = 0; i < rows_; ++i)
    for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) d(i, col_idx_[k]) = values_[k];
  return d;
}

SparseMatrix add(const SparseMatrix& a, const SparseMatrix& b, double s) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw InvalidArgument("add: shape mismatch");
  std::vector<Triplet> t;
  t.reserve(a.nnz() + b.nnz());
  const std::pair<const SparseMatrix*, double> parts[2] = {{&a, 1.0}, {&b, s}};
  for (const auto& [m, f] : parts) {
    for (Index i = 0; i < m->rows(); ++i)
      for (Index k = m->row_ptr()[i]; k < m->row_ptr()[i + 1]; ++k)
        t.push_back({i, m->col_idx()[k], f * m->values()[k]});
  }
  return SparseMatrix::from_triplets(a.rows(), a.cols(), t, a.symmetric() && b.symmetric());
}

// ---------------------------------------------------------------------------
// UMFPACK reads column-compressed input. Handing it our row-compressed arrays
// describes A^T, so every solve uses the UMFPACK_At system to get A x = b.
struct SparseLu::Impl {
  SparseMatrix a;
  void* numeric = nullptr;
  double control[UMFPACK_CONTROL];
  double rcond = 0.0;

  ~Impl() {
    if (numeric) umfpack_di_free_numeric(&numeric);
  }
};

SparseLu::SparseLu(const SparseMatrix& a) : impl_(std::make_unique<Impl>()) {
  if (a.rows() != a.cols()) throw InvalidArgument("SparseLu: matrix must be square");
  impl_->a = a;
  umfpack_di_defaults(impl_->control);
  double info[UMFPACK_INFO];
  const Index n = a.rows();
  const int* ap = impl_->a.row_ptr().data();
  const int* ai = impl_->a.col_idx().data();
  const double* ax = impl_->a.values().data();

  void* symbolic = nullptr;
  int status = umfpack_di_symbolic(n, n, ap, ai, ax, &symbolic, impl_->control, info);
  if (status != UMFPACK_OK) {
    if (symbolic) umfpack_di_free_symbolic(&symbolic);
    throw SolverError("SparseLu: symbolic analysis failed (UMFPACK status " + std::to_string(status) + ")");
  }
  status = umfpack_di_numeric(ap, ai, ax, symbolic, &impl_->numeric, impl_->control, info);
  umfpack_di_free_symbolic(&symbolic);
  impl_->rcond = info[UMFPACK_RCOND];

  if (status == UMFPACK_WARNING_singular_matrix) {
    // Locate the first zero pivot and translate it to an original index.
    int lnz = 0, unz = 0, nrow = 0, ncol = 0, nz_udiag = 0;
    umfpack_di_get_lunz(&lnz, &unz, &nrow, &ncol, &nz_udiag, impl_->numeric);
    std::vector<int> q(ncol);
    std::vector<double> d(std::min(nrow, ncol));
    umfpack_di_get_numeric(nullptr, nullptr, nullptr, nullptr, nullptr, nullptr, nullptr, q.data(),
                           d.data(), nullptr, nullptr, impl_->numeric);
    std::int64_t pivot = -1;
    for (std::size_t k = 0; k < d.size(); ++k)
      if (d[k] == 0.0) {
        pivot = q[k];
        break;
      }
    throw SingularMatrix("SparseLu: matrix is singular, zero pivot at index " + std::to_string(pivot),
                         pivot);
  }
  if (status != UMFPACK_OK)
    throw SolverError("SparseLu: numeric factorization failed (UMFPACK status " + std::to_string(status) + ")");
}

SparseLu::~SparseLu() = default;
SparseLu::SparseLu(SparseLu&&) noexcept = default;
SparseLu& SparseLu::operator=(SparseLu&&) noexcept = default;

Index SparseLu::size() const noexcept { return impl_->a.rows(); }
double SparseLu::rcond() const noexcept { return impl_->rcond; }

void SparseLu::solve(std::span<const double> b, std::span<double> x) const {
  const Index n = size();
  if (static_cast<Index>(b.size()) != n || static_cast<Index>(x.size()) != n)
    throw InvalidArgument("SparseLu::solve: dimension mismatch");
  double info[UMFPACK_INFO];
  const int status = umfpack_di_solve(UMFPACK_At, impl_->a.row_ptr().data(), impl_->a.col_idx().data(),
                                      impl_->a.values().data(), x.data(), b.data(), impl_->numeric,
                                      impl_->control, info);
  if (status != UMFPACK_OK)
    throw SolverError("SparseLu::solve failed (UMFPACK status " + std::to_string(status) + ")");
}

std::vector<double> SparseLu::solve(std::span<const double> b) const {
  std::vector<double> x(b.size());
  solve(b, x);
  return x;
}

Eigen::MatrixXd SparseLu::solve(const Eigen::MatrixXd& b) const {
  Eigen::MatrixXd x(b.rows(), b.cols());
  for (Eigen::Index c = 0; c < b.cols(); ++c)
    solve(std::span<const double>(b.col(c).data(), b.rows()), std::span<double>(x.col(c).data(), b.rows()));
  return x;
}

// ---------------------------------------------------------------------------
struct SparseCholesky::Impl {
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>, Eigen::Lower, Eigen::AMDOrdering<int>> llt;
  Index n = 0;
};

SparseCholesky::SparseCholesky(const SparseMatrix& a) : impl_(std::make_unique<Impl>()) {
  if (a.rows() != a.cols()) throw InvalidArgument("SparseCholesky: matrix must be square");
  impl_->n = a.rows();
  impl_->llt.compute(a.to_eigen());
  if (impl_->llt.info() != Eigen::Success)
    throw SolverError("SparseCholesky: matrix is not positive definite");
}

SparseCholesky::~SparseCholesky() = default;
SparseCholesky::SparseCholesky(SparseCholesky&&) noexcept = default;
SparseCholesky& SparseCholesky::operator=(SparseCholesky&&) noexcept = default;

Index SparseCholesky::size() const noexcept { return impl_->n; }

std::vector<double> SparseCholesky::solve(std::span<const double> b) const {
  if (static_cast<Index>(b.size()) != impl_->n) throw InvalidArgument("SparseCholesky::solve: dimension mismatch");
  const Eigen::Map<const Eigen::VectorXd> rhs(b.data(), impl_->n);
  const Eigen::VectorXd x = impl_->llt.solve(rhs);
  return {x.data(), x.data() + x.size()};
}

// ---------------------------------------------------------------------------
void SaddleSystem::validate() const {
  if (a.rows() != a.cols()) throw InvalidArgument("SaddleSystem: A must be square");
  if (b.cols() != a.rows()) throw InvalidArgument("SaddleSystem: B must have as many columns as A");
  if (static_cast<Index>(rhs_f.size()) != a.rows() || static_cast<Index>(rhs_g.size()) != b.rows())
    throw InvalidArgument("SaddleSystem: right-hand side sizes do not match the blocks");
  if (!a.symmetric()) throw InvalidArgument("SaddleSystem: A must be flagged symmetric");
}

SparseMatrix SaddleSystem::block_matrix() const {
  validate();
  const Index n = a.rows();
  const Index m = b.rows();
  std::vector<Triplet> t;
  t.reserve(a.nnz() + 2 * b.nnz());
  for (Index i = 0; i < n; ++i)
    for (Index k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k) t.push_back({i, a.col_idx()[k], a.values()[k]});
  for (Index i = 0; i < m; ++i)
    for (Index k = b.row_ptr()[i]; k < b.row_ptr()[i + 1]; ++k) {
      t.push_back({n + i, b.col_idx()[k], b.values()[k]});
      t.push_back({b.col_idx()[k], n + i, b.values()[k]});
    }
  return SparseMatrix::from_triplets(n + m, n + m, t, true);
}

std::vector<double> solve_sparse(const SparseMatrix& a, std::span<const double> rhs) {
  return SparseLu(a).solve(rhs);
}

SaddleSolution solve_sparse(const SaddleSystem& system) {
  const SparseMatrix k = system.block_matrix();
  std::vector<double> rhs(system.rhs_f);
  rhs.insert(rhs.end(), system.rhs_g.begin(), system.rhs_g.end());
  const std::vector<double> sol = SparseLu(k).solve(rhs);
  const auto n = system.rhs_f.size();
  return {{sol.begin(), sol.begin() + n}, {sol.begin() + n, sol.end()}};
}

double residual_norm(const SparseMatrix& a, std::span<const double> x, std::span<const double> b) {
  const std::vector<double> ax = a.multiply(x);
  double s = 0.0;
  for (std::size_t i = 0; i < ax.size(); ++i) s += (ax[i] - b[i]) * (ax[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace fsi
