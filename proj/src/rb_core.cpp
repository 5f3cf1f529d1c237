// SPDX-License-Identifier: Apache-2.0

#include "rb/rb_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rb {

Vector ReducedBasis::reconstruct(const Vector &coefficients, std::size_t dim) const {
  if (coefficients.size() != vectors.size())
    throw std::invalid_argument("ReducedBasis::reconstruct: coefficient count mismatch");
  Vector out(dim, 0.0);
  for (std::size_t i = 0; i < vectors.size(); ++i)
    axpy(coefficients[i], vectors[i], out);
  return out;
}

ExtendResult extend_basis(ReducedBasis basis, const Vector &snapshot,
                          const SparseSpdMatrix &m_v) {
  const std::size_t old_size = basis.size();
  VectorSet input = std::move(basis.vectors);
  input.push_back(snapshot);
  auto gs = gram_schmidt_reiterated(std::move(input), m_v, old_size);
  const bool deflated = gs.vectors.size() == old_size;
  return {ReducedBasis{std::move(gs.vectors)}, deflated};
}

// ---------------------------------------------------------------------------
// projection and reduced solves

DenseMatrix ReducedModel::operator_at(const Parameter &mu) const {
  DenseMatrix out(basis_size, basis_size);
  for (std::size_t q = 0; q < a_q.size(); ++q) {
    const double t = theta.a[q](mu);
    for (std::size_t i = 0; i < basis_size; ++i)
      for (std::size_t j = 0; j < basis_size; ++j)
        out(i, j) += t * a_q[q](i, j);
  }
  return out;
}

Vector ReducedModel::rhs_at(const Parameter &mu) const {
  Vector out(basis_size, 0.0);
  for (std::size_t q = 0; q < f_q.size(); ++q)
    axpy(theta.f[q](mu), f_q[q], out);
  return out;
}

Vector solve_high_dim(const HighDimModel &model, const Parameter &mu,
                      const SolverOptions &opts) {
  return spd_solve(model.operator_at(mu), model.rhs_at(mu), opts);
}

namespace {

ReducedModel project_operators(const HighDimModel &model, const ReducedBasis &basis) {
  ReducedModel rm;
  rm.basis_size = basis.size();
  rm.theta = model.theta;
  const std::size_t n = basis.size();
  for (const auto &a : model.A_q) {
    DenseMatrix pa(n, n);
    for (std::size_t j = 0; j < n; ++j) {
      const Vector av = a.multiply(basis.vectors[j]);
      for (std::size_t i = 0; i < n; ++i)
        pa(i, j) = dot(basis.vectors[i], av);
    }
    rm.a_q.push_back(std::move(pa));
  }
  for (const auto &f : model.f_q) {
    Vector pf(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      pf[i] = dot(f, basis.vectors[i]);
    rm.f_q.push_back(std::move(pf));
  }
  return rm;
}

} // namespace

ReducedModel project(const HighDimModel &model, const ReducedBasis &basis,
                     const SolverOptions &opts) {
  return project(model, basis, OfflineData::build(model, basis.vectors, opts));
}

ReducedModel project(const HighDimModel &model, const ReducedBasis &basis,
                     const OfflineData &offline) {
  if (offline.basis_size() != basis.size())
    throw std::invalid_argument("project: offline data does not match the basis size");
  ReducedModel rm = project_operators(model, basis);
  rm.estimator_trad = offline.traditional();
  rm.estimator_stable = offline.stable();
  return rm;
}

ReducedModel reduced_model_prefix(const ReducedModel &full, const OfflineData &offline,
                                  std::size_t size) {
  if (size > full.basis_size)
    throw std::invalid_argument("reduced_model_prefix: size beyond the built model");
  ReducedModel rm;
  rm.basis_size = size;
  rm.theta = full.theta;
  for (const auto &a : full.a_q)
    rm.a_q.push_back(a.leading_block(size));
  for (const auto &f : full.f_q)
    rm.f_q.push_back(Vector(f.begin(), f.begin() + static_cast<std::ptrdiff_t>(size)));
  rm.estimator_trad = offline.traditional(size);
  rm.estimator_stable = offline.stable(size);
  return rm;
}

Vector solve_reduced(const ReducedModel &rmodel, const Parameter &mu) {
  if (rmodel.basis_size == 0)
    return {};
  return cholesky_solve(rmodel.operator_at(mu), rmodel.rhs_at(mu));
}

// ---------------------------------------------------------------------------
// online bound

OnlineBound evaluate_bound(const ReducedModel &rmodel, const Parameter &mu,
                           EstimatorKind kind) {
  OnlineBound out;
  out.coefficients = solve_reduced(rmodel, mu);
  const Vector alpha = residual_coefficients(rmodel.theta, mu, out.coefficients);
  const double estimate = kind == EstimatorKind::stable
                              ? estimate_stable(rmodel.estimator_stable, alpha)
                              : estimate_traditional(rmodel.estimator_trad, alpha);
  out.absolute = error_bound(estimate, mu);
  out.solution_norm = norm2(out.coefficients);
  out.relative =
      out.solution_norm < kRelativeFloor ? out.absolute : out.absolute / out.solution_norm;
  return out;
}

// ---------------------------------------------------------------------------
// weak greedy

GreedyResult weak_greedy(const HighDimModel &model,
                         const std::vector<Parameter> &train_set, double tol,
                         std::size_t max_size, EstimatorKind kind,
                         const SolverOptions &opts) {
  if (train_set.empty())
    throw std::invalid_argument("weak_greedy: empty training set");

  GreedyResult result;
  result.offline = OfflineData::build(model, {}, opts);
  result.model = project(model, result.basis, result.offline);
  std::vector<bool> withdrawn(train_set.size(), false);
  std::size_t n_withdrawn = 0;

  while (true) {
    double max_bound = -std::numeric_limits<double>::infinity();
    double selectable_max = -std::numeric_limits<double>::infinity();
    std::size_t argmax = train_set.size();
    for (std::size_t idx = 0; idx < train_set.size(); ++idx) {
      const double rel = evaluate_bound(result.model, train_set[idx], kind).relative;
      max_bound = std::max(max_bound, rel);
      if (!withdrawn[idx] && rel > selectable_max) { // strict: ties keep the lowest index
        selectable_max = rel;
        argmax = idx;
      }
    }
    result.log.final_max_bound = max_bound;
    if (max_bound <= tol) {
      result.log.stop = GreedyStop::tolerance;
      break;
    }
    if (result.basis.size() >= max_size) {
      result.log.stop = GreedyStop::max_size;
      break;
    }
    if (n_withdrawn == train_set.size()) {
      // estimator still reports errors but the span cannot grow anywhere
      result.log.stop = GreedyStop::stagnation;
      break;
    }

    const Vector snapshot = solve_high_dim(model, train_set[argmax], opts);
    ExtendResult ext = extend_basis(std::move(result.basis), snapshot, model.M_V);
    result.basis = std::move(ext.basis);
    if (ext.deflated) {
      result.log.deflations.push_back({train_set[argmax], selectable_max, result.basis.size()});
      withdrawn[argmax] = true;
      ++n_withdrawn;
      continue;
    }
    result.offline.extend(model, result.basis.vectors.back());
    result.model = project(model, result.basis, result.offline);
    result.log.steps.push_back({train_set[argmax], selectable_max, result.basis.size()});
  }
  result.log.max_gram_schmidt_passes = result.offline.max_gram_schmidt_passes();
  return result;
}

std::vector<Parameter> make_train_set(std::size_t points_per_axis) {
  if (points_per_axis < 2)
    throw std::invalid_argument("make_train_set: need at least two points per axis");
  std::vector<double> axis(points_per_axis);
  for (std::size_t k = 0; k < points_per_axis; ++k)
    axis[k] = kParamMin + (kParamMax - kParamMin) * static_cast<double>(k) /
                              static_cast<double>(points_per_axis - 1);

  std::vector<Parameter> out;
  std::size_t total = 1;
  for (std::size_t d = 0; d < kThermalBlockParamCount; ++d)
    total *= points_per_axis;
  out.reserve(total);
  for (std::size_t flat = 0; flat < total; ++flat) {
    Parameter mu;
    mu.components.resize(kThermalBlockParamCount);
    std::size_t rest = flat;
    for (std::size_t d = kThermalBlockParamCount; d-- > 0;) {
      mu.components[d] = axis[rest % points_per_axis];
      rest /= points_per_axis;
    }
    out.push_back(std::move(mu));
  }
  return out;
}

} // namespace rb
