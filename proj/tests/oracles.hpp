// SPDX-License-Identifier: Apache-2.0
//
// Test-only reference computations, kept independent of the library's
// solver and estimator paths: dense Gaussian elimination with partial
// pivoting, dense conversions, and a deterministic value generator.

#ifndef RB_TESTS_ORACLES_HPP
#define RB_TESTS_ORACLES_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "rb/linops.hpp"
#include "rb/thermal_block.hpp"

namespace rb::testing {

/// Dense Gaussian elimination with partial pivoting.
inline Vector dense_lu_solve(DenseMatrix a, Vector b) {
  const std::size_t n = a.rows();
  if (a.cols() != n || b.size() != n)
    throw std::invalid_argument("dense_lu_solve: dimension mismatch");
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(pivot, col)))
        pivot = r;
    if (a(pivot, col) == 0.0)
      throw std::runtime_error("dense_lu_solve: singular matrix");
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c)
        std::swap(a(col, c), a(pivot, c));
      std::swap(b[col], b[pivot]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double factor = a(r, col) / a(col, col);
      if (factor == 0.0)
        continue;
      for (std::size_t c = col; c < n; ++c)
        a(r, c) -= factor * a(col, c);
      b[r] -= factor * b[col];
    }
  }
  Vector x(n, 0.0);
  for (std::size_t ii = n; ii-- > 0;) {
    double s = b[ii];
    for (std::size_t c = ii + 1; c < n; ++c)
      s -= a(ii, c) * x[c];
    x[ii] = s / a(ii, ii);
  }
  return x;
}

inline DenseMatrix to_dense(const SparseSpdMatrix &m) {
  const std::size_t n = m.size();
  DenseMatrix d(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = m.row_offsets()[i]; k < m.row_offsets()[i + 1]; ++k)
      d(i, m.column_indices()[k]) = m.values()[k];
  return d;
}

/// x^T D y evaluated densely (triple-product reference for v_inner).
inline double dense_triple_product(const DenseMatrix &d, const Vector &x, const Vector &y) {
  double s = 0.0;
  for (std::size_t i = 0; i < d.rows(); ++i)
    for (std::size_t j = 0; j < d.cols(); ++j)
      s += x[i] * d(i, j) * y[j];
  return s;
}

/// Per-element assembly of A(mu) with the piecewise-constant conductivity
/// multiplied in directly; reference route for the affine splitting. The
/// local stiffness uses the edge-vector formulation.
inline DenseMatrix assemble_direct(const Mesh &mesh, const Parameter &mu,
                                   const std::vector<std::size_t> &interior,
                                   std::size_t dim) {
  std::vector<std::size_t> dof_of(mesh.vertex_count(),
                                  std::numeric_limits<std::size_t>::max());
  for (std::size_t d = 0; d < interior.size(); ++d)
    dof_of[interior[d]] = d;

  DenseMatrix a(dim, dim);
  for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
    const auto verts = mesh.triangle(t);
    const auto p0 = mesh.vertex(verts[0]);
    const auto p1 = mesh.vertex(verts[1]);
    const auto p2 = mesh.vertex(verts[2]);
    // opposite-edge vectors
    const double ex[3] = {p2[0] - p1[0], p0[0] - p2[0], p1[0] - p0[0]};
    const double ey[3] = {p2[1] - p1[1], p0[1] - p2[1], p1[1] - p0[1]};
    const double twice_area =
        (p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]);
    const double sigma =
        mu[quadrant_of((p0[0] + p1[0] + p2[0]) / 3.0, (p0[1] + p1[1] + p2[1]) / 3.0)];
    for (int r = 0; r < 3; ++r) {
      const std::size_t ir = dof_of[verts[r]];
      if (ir == std::numeric_limits<std::size_t>::max())
        continue;
      for (int c = 0; c < 3; ++c) {
        const std::size_t ic = dof_of[verts[c]];
        if (ic == std::numeric_limits<std::size_t>::max())
          continue;
        a(ir, ic) += sigma * (ex[r] * ex[c] + ey[r] * ey[c]) / (2.0 * twice_area);
      }
    }
  }
  return a;
}

/// Small deterministic generator for test vectors and parameters
/// (xorshift-style, unrelated to the library's sampling path).
class ValueGen {
public:
  explicit ValueGen(std::uint64_t seed) : state_(seed ? seed : 0x2545F4914F6CDD1Dull) {}

  double uniform() { // in [0, 1)
    state_ ^= state_ << 13;
    state_ ^= state_ >> 7;
    state_ ^= state_ << 17;
    return static_cast<double>(state_ >> 11) * 0x1.0p-53;
  }
  double range(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  Vector vector(std::size_t n, double lo = -1.0, double hi = 1.0) {
    Vector v(n);
    for (double &e : v)
      e = range(lo, hi);
    return v;
  }

private:
  std::uint64_t state_;
};

} // namespace rb::testing

#endif // RB_TESTS_ORACLES_HPP
