// SPDX-License-Identifier: Apache-2.0

#ifndef RB_RB_CORE_HPP
#define RB_RB_CORE_HPP

#include <cstddef>

#include "rb/estimators.hpp"
#include "rb/linops.hpp"
#include "rb/thermal_block.hpp"

namespace rb {

// ---------------------------------------------------------------------------
// reduced basis

/// M_V-orthonormal span of the solution snapshots.
struct ReducedBasis {
  VectorSet vectors;

  std::size_t size() const { return vectors.size(); }

  /// Lift reduced coefficients back to the high-dimensional space.
  Vector reconstruct(const Vector &coefficients, std::size_t dim) const;
};

struct ExtendResult {
  ReducedBasis basis;
  bool deflated = false; // snapshot was already in the span
};

/// Orthonormalize a snapshot against the basis and append it; a snapshot
/// inside the span leaves the basis unchanged and sets the deflated flag.
ExtendResult extend_basis(ReducedBasis basis, const Vector &snapshot,
                          const SparseSpdMatrix &m_v);

// ---------------------------------------------------------------------------
// reduced model

/// Galerkin projection of the affine model plus the offline data of both
/// residual-norm evaluators. Immutable after construction.
struct ReducedModel {
  std::vector<DenseMatrix> a_q; // projected operator blocks
  std::vector<Vector> f_q;      // projected rhs components
  AffineCoefficients theta;
  TradEstimatorData estimator_trad;
  StableEstimatorData estimator_stable;
  std::size_t basis_size = 0;

  DenseMatrix operator_at(const Parameter &mu) const;
  Vector rhs_at(const Parameter &mu) const;
};

Vector solve_high_dim(const HighDimModel &model, const Parameter &mu,
                      const SolverOptions &opts = {});

ReducedModel project(const HighDimModel &model, const ReducedBasis &basis,
                     const SolverOptions &opts = {});
/// Same projection, reusing already-built estimator offline data.
ReducedModel project(const HighDimModel &model, const ReducedBasis &basis,
                     const OfflineData &offline);

/// Restrict a reduced model to the leading `size` basis vectors, pulling the
/// matching estimator data slices from the offline container.
ReducedModel reduced_model_prefix(const ReducedModel &full, const OfflineData &offline,
                                  std::size_t size);

/// Direct dense solve of the reduced system at mu.
Vector solve_reduced(const ReducedModel &rmodel, const Parameter &mu);

// ---------------------------------------------------------------------------
// online bound evaluation

enum class EstimatorKind { stable, traditional };

/// Denominators below this fall back to absolute reporting.
inline constexpr double kRelativeFloor = 1e-30;

struct OnlineBound {
  Vector coefficients;  // reduced solution
  double absolute = 0.0;
  double relative = 0.0; // absolute when the solution norm underflows
  double solution_norm = 0.0;
};

/// Reduced solve plus error bound at one parameter with the chosen
/// evaluator. The relative bound divides by the reconstructed solution
/// V-norm, which for an orthonormal basis is the coefficient 2-norm.
OnlineBound evaluate_bound(const ReducedModel &rmodel, const Parameter &mu,
                           EstimatorKind kind);

// ---------------------------------------------------------------------------
// weak greedy basis generation

struct GreedyStep {
  Parameter selected;
  double max_bound = 0.0;      // training maximum that triggered the step
  std::size_t basis_size = 0;  // size after the extension
};

/// A selected snapshot turned out to lie in the current span: the estimator
/// claims an error there but the space cannot grow in that direction.
struct DeflationEvent {
  Parameter parameter;
  double bound = 0.0;
  std::size_t basis_size = 0;
};

enum class GreedyStop { tolerance, max_size, stagnation };

struct GreedyLog {
  std::vector<GreedyStep> steps;
  std::vector<DeflationEvent> deflations;
  GreedyStop stop = GreedyStop::tolerance;
  double final_max_bound = 0.0;
  std::size_t max_gram_schmidt_passes = 0;
};

struct GreedyResult {
  ReducedBasis basis;
  ReducedModel model;
  GreedyLog log;
  OfflineData offline;
};

/// Snapshot selection by maximum relative error bound over the training
/// set, ties broken towards the lowest index. A parameter whose snapshot
/// deflates is logged and withdrawn from selection. Stops at the tolerance,
/// the size cap, or once every training parameter has been withdrawn
/// (stagnation).
GreedyResult weak_greedy(const HighDimModel &model,
                         const std::vector<Parameter> &train_set, double tol,
                         std::size_t max_size, EstimatorKind kind,
                         const SolverOptions &opts = {});

/// Equidistant tensor grid over the admissible box, endpoints included;
/// the last component varies fastest.
std::vector<Parameter> make_train_set(std::size_t points_per_axis);

} // namespace rb

#endif // RB_RB_CORE_HPP
