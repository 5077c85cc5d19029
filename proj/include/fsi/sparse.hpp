/*
  This file is part of fsi-resolvent, a mixed finite element solver for a
  Stokes fluid coupled to a clamped plate.

  Licensed under the Apache License, Version 2.0 (the "License"); you may
  not use this file except in compliance with the License.  You may obtain
  a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0
*/

#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "fsi/mesh.hpp"

namespace fsi {

struct Triplet {
  Index row;
  Index col;
  double value;
};

// Compressed row storage with sorted, unique column indices per row.
class SparseMatrix {
 public:
  SparseMatrix() = default;

  // Duplicate (row, col) entries are summed. `symmetric` only records the
  // caller's claim; check it with symmetry_error().
  static SparseMatrix from_triplets(Index rows, Index cols, std::span<const Triplet> entries,
                                    bool symmetric = false);
  static SparseMatrix identity(Index n);

  Index rows() const noexcept { return rows_; }
  Index cols() const noexcept { return cols_; }
  std::int64_t nnz() const noexcept { return static_cast<std::int64_t>(values_.size()); }
  bool symmetric() const noexcept { return symmetric_; }

  std::span<const Index> row_ptr() const noexcept { return row_ptr_; }
  std::span<const Index> col_idx() const noexcept { return col_idx_; }
  std::span<const double> values() const noexcept { return values_; }

  double at(Index i, Index j) const;
  double max_abs() const;
  // max |A - A^T|
  double symmetry_error() const;

  // y = A x
  void multiply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> multiply(std::span<const double> x) const;
  // y += A^T x
  void multiply_transpose_add(std::span<const double> x, std::span<double> y) const;

  SparseMatrix transpose() const;
  SparseMatrix scaled(double s) const;

  // Keeps rows/cols whose map entry is >= 0 and renumbers them to that value.
  SparseMatrix extract(std::span<const Index> row_map, Index new_rows,
                       std::span<const Index> col_map, Index new_cols) const;

  Eigen::SparseMatrix<double, Eigen::ColMajor> to_eigen() const;
  Eigen::MatrixXd to_dense() const;

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  bool symmetric_ = false;
  std::vector<Index> row_ptr_{0};
  std::vector<Index> col_idx_;
  std::vector<double> values_;
};

// A + s B for matrices of identical shape.
SparseMatrix add(const SparseMatrix& a, const SparseMatrix& b, double s = 1.0);

// Sparse LU with threshold partial pivoting (UMFPACK). Factor once, then
// solve any number of right-hand sides. Handles symmetric indefinite
// saddle-point matrices.
class SparseLu {
 public:
  explicit SparseLu(const SparseMatrix& a);
  ~SparseLu();
  SparseLu(SparseLu&&) noexcept;
  SparseLu& operator=(SparseLu&&) noexcept;
  SparseLu(const SparseLu&) = delete;
  SparseLu& operator=(const SparseLu&) = delete;

  Index size() const noexcept;
  // Reciprocal condition estimate reported by the factorization.
  double rcond() const noexcept;

  void solve(std::span<const double> b, std::span<double> x) const;
  std::vector<double> solve(std::span<const double> b) const;
  // Column-wise solve of A X = B.
  Eigen::MatrixXd solve(const Eigen::MatrixXd& b) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Sparse Cholesky for symmetric positive definite matrices. Throws
// SolverError when the matrix is not numerically positive definite.
class SparseCholesky {
 public:
  explicit SparseCholesky(const SparseMatrix& a);
  ~SparseCholesky();
  SparseCholesky(SparseCholesky&&) noexcept;
  SparseCholesky& operator=(SparseCholesky&&) noexcept;

  Index size() const noexcept;
  std::vector<double> solve(std::span<const double> b) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// [A  B^T] [x]   [f]
// [B   0 ] [y] = [g]
struct SaddleSystem {
  SparseMatrix a;
  SparseMatrix b;
  std::vector<double> rhs_f;
  std::vector<double> rhs_g;

  // Throws InvalidArgument on inconsistent block shapes.
  void validate() const;
  SparseMatrix block_matrix() const;
};

struct SaddleSolution {
  std::vector<double> x;
  std::vector<double> multiplier;
};

std::vector<double> solve_sparse(const SparseMatrix& a, std::span<const double> rhs);
SaddleSolution solve_sparse(const SaddleSystem& system);

// ||A x - b||_2
double residual_norm(const SparseMatrix& a, std::span<const double> x, std::span<const double> b);

}  // namespace fsi
