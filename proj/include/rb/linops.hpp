// SPDX-License-Identifier: Apache-2.0

#ifndef RB_LINOPS_HPP
#define RB_LINOPS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace rb {

using Vector = std::vector<double>;
using VectorSet = std::vector<Vector>;

/// Iterative solver gave up before reaching the requested residual.
class solver_failure : public std::runtime_error {
public:
  solver_failure(const std::string &what, double achieved_residual)
      : std::runtime_error(what), achieved_residual_(achieved_residual) {}

  /// Relative residual at the point the solver stopped.
  double achieved_residual() const noexcept { return achieved_residual_; }

private:
  double achieved_residual_;
};

/// A matrix that was assumed SPD turned out not to be (negative norm
/// square, nonpositive pivot, ...).
class numerical_breakdown : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// small vector helpers

double dot(const Vector &x, const Vector &y);
double norm2(const Vector &x);
/// y += a * x
void axpy(double a, const Vector &x, Vector &y);

// ---------------------------------------------------------------------------
// dense matrices (reduced systems, estimator data)

class DenseMatrix {
public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double value = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, value) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double &operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Vector multiply(const Vector &x) const;            // A x
  Vector multiply_transposed(const Vector &x) const; // A^T x

  /// Leading k x k block (requires k <= rows and k <= cols).
  DenseMatrix leading_block(std::size_t k) const;

  static DenseMatrix identity(std::size_t n);

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Solve a dense SPD system by Cholesky factorization.
/// Throws numerical_breakdown on a nonpositive pivot.
Vector cholesky_solve(DenseMatrix a, Vector b);

// ---------------------------------------------------------------------------
// sparse symmetric matrices (compressed row layout)

class SparseSpdMatrix {
public:
  SparseSpdMatrix() = default;

  static SparseSpdMatrix identity(std::size_t n);

  std::size_t size() const noexcept {
    return row_offsets_.empty() ? 0 : row_offsets_.size() - 1;
  }
  std::size_t nonzero_count() const noexcept { return values_.size(); }

  /// Stored value at (i, j), 0 for entries outside the pattern.
  double coeff(std::size_t i, std::size_t j) const;

  void multiply(const Vector &x, Vector &y) const; // y = M x
  Vector multiply(const Vector &x) const;

  Vector diagonal() const;

  bool same_pattern(const SparseSpdMatrix &other) const;

  /// sum_q weights[q] * terms[q]; all terms must share one pattern.
  static SparseSpdMatrix weighted_sum(const std::vector<SparseSpdMatrix> &terms,
                                      const std::vector<double> &weights);

  const std::vector<std::size_t> &row_offsets() const { return row_offsets_; }
  const std::vector<std::size_t> &column_indices() const { return column_indices_; }
  const std::vector<double> &values() const { return values_; }
  std::vector<double> &values() { return values_; }

private:
  std::vector<std::size_t> row_offsets_;
  std::vector<std::size_t> column_indices_;
  std::vector<double> values_;

  friend class CooBuilder;
};

/// Accumulates (row, col, value) triplets and compresses them into CSR.
/// Duplicate entries are summed in insertion order.
class CooBuilder {
public:
  explicit CooBuilder(std::size_t dim) : dim_(dim) {}

  void add(std::size_t row, std::size_t col, double value);

  /// Compress into CSR. With `pattern_of`, the result reuses that matrix's
  /// sparsity pattern (entries outside it must not have been added).
  SparseSpdMatrix build() const;
  SparseSpdMatrix build(const SparseSpdMatrix &pattern_of) const;

  std::size_t dim() const noexcept { return dim_; }

private:
  std::size_t dim_;
  std::vector<std::size_t> rows_, cols_;
  std::vector<double> values_;
};

// ---------------------------------------------------------------------------
// solver and inner products

struct SolverOptions {
  /// Relative residual (conjugate gradient recurrence) stopping threshold.
  double rel_tol = 1e-14;
  /// 0 selects the default cap of 50 * sqrt(N) + 1000 iterations.
  std::size_t max_iterations = 0;
};

/// Solve M x = b for SPD M with Jacobi-preconditioned conjugate gradients.
/// Throws solver_failure when the iteration cap is hit first.
Vector spd_solve(const SparseSpdMatrix &m, const Vector &b,
                 const SolverOptions &opts = {});

/// x^T M y
double v_inner(const SparseSpdMatrix &m, const Vector &x, const Vector &y);

/// sqrt(x^T M x)
double v_norm(const SparseSpdMatrix &m, const Vector &x);

// ---------------------------------------------------------------------------
// orthonormalization

struct GramSchmidtResult {
  /// M-orthonormal vectors spanning the input set.
  VectorSet vectors;
  /// Indices of the inputs that survived (deflated inputs are dropped).
  std::vector<std::size_t> kept;
  /// Largest number of projection passes any vector needed.
  std::size_t max_passes = 0;
};

/// Norm a vector may shrink to, relative to its original M-norm, before it
/// is considered linearly dependent and dropped.
inline constexpr double kDeflationThreshold = 1e-13;

/// A projection pass is repeated while it removed more than this fraction
/// of the vector's norm.
inline constexpr double kReorthonormalizationThreshold = 0.1;

/// Gram-Schmidt with re-iteration: each vector is normalized, then
/// projection passes against all accepted predecessors repeat until a pass
/// leaves the norm above kReorthonormalizationThreshold. Vectors whose norm
/// collapses below kDeflationThreshold times their original M-norm are
/// deflated. Entries before `start_index` must already be M-orthonormal and
/// are passed through untouched.
GramSchmidtResult gram_schmidt_reiterated(VectorSet vectors,
                                          const SparseSpdMatrix &m,
                                          std::size_t start_index = 0);

} // namespace rb

#endif // RB_LINOPS_HPP
