// SPDX-License-Identifier: Apache-2.0

#ifndef RB_ESTIMATORS_HPP
#define RB_ESTIMATORS_HPP

#include <cstddef>

#include "rb/linops.hpp"
#include "rb/thermal_block.hpp"

namespace rb {

// ---------------------------------------------------------------------------
// offline data of the residual-norm evaluators
//
// The residual of a reduced solution is a combination of fixed
// high-dimensional functionals: the rhs components and the operator blocks
// applied to the basis vectors. Their Riesz representatives eta_k are
// enumerated rhs components first, then the a-blocks grouped block-major,
// basis-vector-minor. The classical evaluator stores the Gram matrix
// G[k][l] = (eta_k, eta_l)_V; the stable evaluator stores the coefficients
// of each eta_k w.r.t. an orthonormal basis of span{eta_k}.

struct ResidualVectors {
  VectorSet eta;
  std::size_t q_f = 0;
  std::size_t q_a = 0;
  std::size_t basis_size = 0;

  std::size_t count() const { return eta.size(); } // q_f + q_a * basis_size
};

struct TradEstimatorData {
  DenseMatrix gram; // symmetric, positive semidefinite up to round-off
};

struct StableEstimatorData {
  DenseMatrix coefficients; // count x m, rows reconstruct the eta_k
};

/// Riesz representative of a functional: solve M_V x = g.
Vector riesz(const HighDimModel &model, const Vector &functional,
             const SolverOptions &opts = {});

/// Incremental container for both evaluators' offline data. Extending the
/// basis by one vector adds q_a residual representatives, grows the
/// orthonormal residual basis in place and adds the new Gram and
/// coefficient entries; data for any smaller basis size is a plain slice.
class OfflineData {
public:
  OfflineData() = default;

  static OfflineData build(const HighDimModel &model, const VectorSet &basis,
                           const SolverOptions &opts = {});

  /// Account for one additional (orthonormalized) basis vector.
  void extend(const HighDimModel &model, const Vector &new_basis_vector);

  std::size_t basis_size() const { return n_basis_; }
  std::size_t residual_count() const { return q_f_ + q_a_ * n_basis_; }
  std::size_t residual_count(std::size_t basis_size) const;
  /// Rank of the residual space at the given basis size (deflation-aware).
  std::size_t orthonormal_count(std::size_t basis_size) const;

  ResidualVectors residuals() const;
  TradEstimatorData traditional() const { return traditional(n_basis_); }
  TradEstimatorData traditional(std::size_t basis_size) const;
  StableEstimatorData stable() const { return stable(n_basis_); }
  StableEstimatorData stable(std::size_t basis_size) const;

  const VectorSet &orthonormal_basis() const { return psi_; }
  std::size_t max_gram_schmidt_passes() const { return max_passes_; }

private:
  SolverOptions solver_;
  std::size_t q_f_ = 0;
  std::size_t q_a_ = 0;
  std::size_t n_basis_ = 0;
  VectorSet eta_f_;                    // rhs representatives
  std::vector<VectorSet> eta_a_;       // [block][basis vector]
  VectorSet psi_;                      // orthonormal residual basis, growth order
  std::vector<std::size_t> psi_count_; // psi_count_[n]: columns present at basis size n
  DenseMatrix gram_;
  DenseMatrix coeff_;
  std::size_t max_passes_ = 0;

  const Vector &eta_at(std::size_t k) const;
  void validate_stage(std::size_t basis_size) const;
};

struct BuildOfflineResult {
  ResidualVectors residuals;
  TradEstimatorData traditional;
  StableEstimatorData stable;
};

BuildOfflineResult build_offline_data(const HighDimModel &model, const VectorSet &basis,
                                      const SolverOptions &opts = {});

// ---------------------------------------------------------------------------
// online evaluation

/// Expansion coefficients of the residual representative in the eta basis:
/// the rhs coefficients theta_f, then -theta_a[q] * u_coeffs[i] in the same
/// block-major order as the eta enumeration.
Vector residual_coefficients(const AffineCoefficients &theta, const Parameter &mu,
                             const Vector &u_coeffs);

/// Classical Gram-matrix evaluation sqrt(alpha^T G alpha); the value is
/// clamped at zero before the root since round-off can push the sum
/// slightly negative.
double estimate_traditional(const TradEstimatorData &data, const Vector &alpha);

/// Orthonormal-basis evaluation: accumulate c = E^T alpha first, square
/// afterwards, return the Euclidean norm of c.
double estimate_stable(const StableEstimatorData &data, const Vector &alpha);

/// Reference value computed entirely in the high-dimensional space:
/// assemble the residual functional, map it through the Riesz solve and
/// take its V-norm. Validates both online evaluators.
double hd_residual_norm_oracle(const HighDimModel &model, const VectorSet &basis,
                               const Parameter &mu, const Vector &u_coeffs,
                               const SolverOptions &opts = {});

/// Scale a residual-norm estimate into an error bound: divide by the
/// coercivity lower bound of the parameter.
double error_bound(double estimate, const Parameter &mu);

} // namespace rb

#endif // RB_ESTIMATORS_HPP
