// SPDX-License-Identifier: Apache-2.0

#include "rb/linops.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>

namespace rb {

double dot(const Vector &x, const Vector &y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    s += x[i] * y[i];
  return s;
}

double norm2(const Vector &x) { return std::sqrt(dot(x, x)); }

void axpy(double a, const Vector &x, Vector &y) {
  for (std::size_t i = 0; i < x.size(); ++i)
    y[i] += a * x[i];
}

// ---------------------------------------------------------------------------
// DenseMatrix

Vector DenseMatrix::multiply(const Vector &x) const {
  if (x.size() != cols_)
    throw std::invalid_argument("DenseMatrix::multiply: dimension mismatch");
  Vector y(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < cols_; ++j)
      s += data_[i * cols_ + j] * x[j];
    y[i] = s;
  }
  return y;
}

Vector DenseMatrix::multiply_transposed(const Vector &x) const {
  if (x.size() != rows_)
    throw std::invalid_argument("DenseMatrix::multiply_transposed: dimension mismatch");
  Vector y(cols_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      y[j] += data_[i * cols_ + j] * x[i];
  return y;
}

DenseMatrix DenseMatrix::leading_block(std::size_t k) const {
  if (k > rows_ || k > cols_)
    throw std::invalid_argument("DenseMatrix::leading_block: block too large");
  DenseMatrix b(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      b(i, j) = (*this)(i, j);
  return b;
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    m(i, i) = 1.0;
  return m;
}

Vector cholesky_solve(DenseMatrix a, Vector b) {
  const std::size_t n = a.rows();
  if (a.cols() != n || b.size() != n)
    throw std::invalid_argument("cholesky_solve: dimension mismatch");
  // in-place lower Cholesky factor
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j);
    for (std::size_t k = 0; k < j; ++k)
      d -= a(j, k) * a(j, k);
    if (!(d > 0.0))
      throw numerical_breakdown("cholesky_solve: nonpositive pivot");
    const double ljj = std::sqrt(d);
    a(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k)
        s -= a(i, k) * a(j, k);
      a(i, j) = s / ljj;
    }
  }
  // forward substitution L y = b
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[i];
    for (std::size_t k = 0; k < i; ++k)
      s -= a(i, k) * b[k];
    b[i] = s / a(i, i);
  }
  // back substitution L^T x = y
  for (std::size_t ii = n; ii-- > 0;) {
    double s = b[ii];
    for (std::size_t k = ii + 1; k < n; ++k)
      s -= a(k, ii) * b[k];
    b[ii] = s / a(ii, ii);
  }
  return b;
}

// ---------------------------------------------------------------------------
// SparseSpdMatrix

SparseSpdMatrix SparseSpdMatrix::identity(std::size_t n) {
  SparseSpdMatrix m;
  m.row_offsets_.resize(n + 1);
  m.column_indices_.resize(n);
  m.values_.assign(n, 1.0);
  for (std::size_t i = 0; i <= n; ++i)
    m.row_offsets_[i] = i;
  for (std::size_t i = 0; i < n; ++i)
    m.column_indices_[i] = i;
  return m;
}

double SparseSpdMatrix::coeff(std::size_t i, std::size_t j) const {
  const auto begin = column_indices_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[i]);
  const auto end = column_indices_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[i + 1]);
  const auto it = std::lower_bound(begin, end, j);
  if (it == end || *it != j)
    return 0.0;
  return values_[static_cast<std::size_t>(it - column_indices_.begin())];
}

void SparseSpdMatrix::multiply(const Vector &x, Vector &y) const {
  const std::size_t n = size();
  if (x.size() != n)
    throw std::invalid_argument("SparseSpdMatrix::multiply: dimension mismatch");
  y.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k)
      s += values_[k] * x[column_indices_[k]];
    y[i] = s;
  }
}

Vector SparseSpdMatrix::multiply(const Vector &x) const {
  Vector y;
  multiply(x, y);
  return y;
}

Vector SparseSpdMatrix::diagonal() const {
  const std::size_t n = size();
  Vector d(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    d[i] = coeff(i, i);
  return d;
}

bool SparseSpdMatrix::same_pattern(const SparseSpdMatrix &other) const {
  return row_offsets_ == other.row_offsets_ && column_indices_ == other.column_indices_;
}

SparseSpdMatrix SparseSpdMatrix::weighted_sum(const std::vector<SparseSpdMatrix> &terms,
                                              const std::vector<double> &weights) {
  if (terms.empty() || terms.size() != weights.size())
    throw std::invalid_argument("weighted_sum: needs one weight per term");
  SparseSpdMatrix out = terms.front();
  std::fill(out.values_.begin(), out.values_.end(), 0.0);
  for (std::size_t q = 0; q < terms.size(); ++q) {
    if (!out.same_pattern(terms[q]))
      throw std::invalid_argument("weighted_sum: terms must share one sparsity pattern");
    const double w = weights[q];
    for (std::size_t k = 0; k < out.values_.size(); ++k)
      out.values_[k] += w * terms[q].values_[k];
  }
  return out;
}

// ---------------------------------------------------------------------------
// CooBuilder

void CooBuilder::add(std::size_t row, std::size_t col, double value) {
  if (row >= dim_ || col >= dim_)
    throw std::invalid_argument("CooBuilder::add: index out of range");
  rows_.push_back(row);
  cols_.push_back(col);
  values_.push_back(value);
}

SparseSpdMatrix CooBuilder::build() const {
  std::vector<std::size_t> order(rows_.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (rows_[a] != rows_[b])
      return rows_[a] < rows_[b];
    if (cols_[a] != cols_[b])
      return cols_[a] < cols_[b];
    return a < b; // stable within duplicates: sum in insertion order
  });

  SparseSpdMatrix m;
  m.row_offsets_.assign(dim_ + 1, 0);
  std::size_t k = 0;
  while (k < order.size()) {
    const std::size_t r = rows_[order[k]];
    const std::size_t c = cols_[order[k]];
    double s = 0.0;
    while (k < order.size() && rows_[order[k]] == r && cols_[order[k]] == c)
      s += values_[order[k++]];
    m.column_indices_.push_back(c);
    m.values_.push_back(s);
    ++m.row_offsets_[r + 1];
  }
  for (std::size_t i = 0; i < dim_; ++i)
    m.row_offsets_[i + 1] += m.row_offsets_[i];
  return m;
}

SparseSpdMatrix CooBuilder::build(const SparseSpdMatrix &pattern_of) const {
  if (pattern_of.size() != dim_)
    throw std::invalid_argument("CooBuilder::build: pattern dimension mismatch");
  SparseSpdMatrix m = pattern_of;
  std::fill(m.values_.begin(), m.values_.end(), 0.0);
  const auto &offs = m.row_offsets_;
  const auto &cols = m.column_indices_;
  for (std::size_t k = 0; k < rows_.size(); ++k) {
    const auto begin = cols.begin() + static_cast<std::ptrdiff_t>(offs[rows_[k]]);
    const auto end = cols.begin() + static_cast<std::ptrdiff_t>(offs[rows_[k] + 1]);
    const auto it = std::lower_bound(begin, end, cols_[k]);
    if (it == end || *it != cols_[k])
      throw std::invalid_argument("CooBuilder::build: entry outside the given pattern");
    m.values_[static_cast<std::size_t>(it - cols.begin())] += values_[k];
  }
  return m;
}

// ---------------------------------------------------------------------------
// conjugate gradients

Vector spd_solve(const SparseSpdMatrix &m, const Vector &b, const SolverOptions &opts) {
  const std::size_t n = m.size();
  if (b.size() != n)
    throw std::invalid_argument("spd_solve: dimension mismatch");

  Vector x(n, 0.0);
  const double norm_b = norm2(b);
  if (norm_b == 0.0)
    return x;

  Vector inv_diag = m.diagonal();
  for (double &d : inv_diag) {
    if (!(d > 0.0))
      throw numerical_breakdown("spd_solve: nonpositive diagonal entry");
    d = 1.0 / d;
  }

  const std::size_t cap =
      opts.max_iterations != 0
          ? opts.max_iterations
          : static_cast<std::size_t>(50.0 * std::sqrt(static_cast<double>(n))) + 1000;

  Vector r = b;
  Vector z(n);
  for (std::size_t i = 0; i < n; ++i)
    z[i] = inv_diag[i] * r[i];
  Vector p = z;
  Vector mp(n);
  double rz = dot(r, z);
  double res = norm_b;

  for (std::size_t it = 0; it < cap; ++it) {
    m.multiply(p, mp);
    const double p_mp = dot(p, mp);
    if (!(p_mp > 0.0))
      throw numerical_breakdown("spd_solve: matrix is not positive definite");
    const double alpha = rz / p_mp;
    axpy(alpha, p, x);
    axpy(-alpha, mp, r);
    res = norm2(r);
    if (res <= opts.rel_tol * norm_b)
      return x;
    for (std::size_t i = 0; i < n; ++i)
      z[i] = inv_diag[i] * r[i];
    const double rz_next = dot(r, z);
    const double beta = rz_next / rz;
    rz = rz_next;
    for (std::size_t i = 0; i < n; ++i)
      p[i] = z[i] + beta * p[i];
  }
  throw solver_failure("spd_solve: no convergence within iteration cap", res / norm_b);
}

double v_inner(const SparseSpdMatrix &m, const Vector &x, const Vector &y) {
  if (x.size() != m.size() || y.size() != m.size())
    throw std::invalid_argument("v_inner: dimension mismatch");
  return dot(x, m.multiply(y));
}

double v_norm(const SparseSpdMatrix &m, const Vector &x) {
  return std::sqrt(std::max(0.0, v_inner(m, x, x)));
}

// ---------------------------------------------------------------------------
// Gram-Schmidt with re-iteration

namespace {

// M-norm square with a breakdown check: clearly negative values signal an
// indefinite matrix, round-off negatives collapse to zero.
double checked_norm_sq(const Vector &v, const Vector &mv) {
  const double ns = dot(v, mv);
  if (ns < 0.0) {
    double bound = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
      bound += std::abs(v[i]) * std::abs(mv[i]);
    if (ns < -1e-12 * bound)
      throw numerical_breakdown("gram_schmidt_reiterated: negative norm square");
    return 0.0;
  }
  return ns;
}

} // namespace

GramSchmidtResult gram_schmidt_reiterated(VectorSet vectors, const SparseSpdMatrix &m,
                                          std::size_t start_index) {
  const std::size_t n_in = vectors.size();
  if (start_index > n_in)
    throw std::invalid_argument("gram_schmidt_reiterated: start_index out of range");
  for (const Vector &v : vectors)
    if (v.size() != m.size())
      throw std::invalid_argument("gram_schmidt_reiterated: dimension mismatch");

  GramSchmidtResult result;
  result.vectors.reserve(n_in);
  result.kept.reserve(n_in);
  VectorSet m_times; // cached M * v for every accepted vector
  m_times.reserve(n_in);

  for (std::size_t i = 0; i < start_index; ++i) {
    result.vectors.push_back(std::move(vectors[i]));
    result.kept.push_back(i);
    m_times.push_back(m.multiply(result.vectors.back()));
  }

  for (std::size_t i = start_index; i < n_in; ++i) {
    Vector v = std::move(vectors[i]);
    Vector mv = m.multiply(v);
    const double orig_norm = std::sqrt(checked_norm_sq(v, mv));
    if (orig_norm == 0.0)
      continue; // zero input: deflated

    for (double &e : v)
      e /= orig_norm;

    double fraction = 1.0; // current norm relative to the original
    bool deflated = false;
    std::size_t passes = 0;
    double newnorm = 0.0;
    do {
      ++passes;
      for (std::size_t j = 0; j < result.vectors.size(); ++j) {
        const double proj = dot(v, m_times[j]);
        axpy(-proj, result.vectors[j], v);
      }
      m.multiply(v, mv);
      newnorm = std::sqrt(checked_norm_sq(v, mv));
      fraction *= newnorm;
      if (fraction <= kDeflationThreshold) {
        deflated = true;
        break;
      }
      for (double &e : v)
        e /= newnorm;
    } while (newnorm <= kReorthonormalizationThreshold);

    result.max_passes = std::max(result.max_passes, passes);
    if (deflated)
      continue;
    for (double &e : mv)
      e /= newnorm;
    result.vectors.push_back(std::move(v));
    result.kept.push_back(i);
    m_times.push_back(std::move(mv));
  }
  return result;
}

} // namespace rb
