// SPDX-License-Identifier: Apache-2.0

#include "rb/estimators.hpp"

#include <algorithm>
#include <cmath>

namespace rb {

Vector riesz(const HighDimModel &model, const Vector &functional,
             const SolverOptions &opts) {
  if (functional.size() != model.dim)
    throw std::invalid_argument("riesz: functional dimension mismatch");
  return spd_solve(model.M_V, functional, opts);
}

// ---------------------------------------------------------------------------
// OfflineData

const Vector &OfflineData::eta_at(std::size_t k) const {
  if (k < q_f_)
    return eta_f_[k];
  const std::size_t a = k - q_f_;
  return eta_a_[a / n_basis_][a % n_basis_];
}

void OfflineData::validate_stage(std::size_t basis_size) const {
  if (basis_size > n_basis_)
    throw std::invalid_argument("OfflineData: basis size beyond built data");
}

std::size_t OfflineData::residual_count(std::size_t basis_size) const {
  validate_stage(basis_size);
  return q_f_ + q_a_ * basis_size;
}

std::size_t OfflineData::orthonormal_count(std::size_t basis_size) const {
  validate_stage(basis_size);
  return psi_count_[basis_size];
}

OfflineData OfflineData::build(const HighDimModel &model, const VectorSet &basis,
                               const SolverOptions &opts) {
  OfflineData data;
  data.solver_ = opts;
  data.q_f_ = model.q_f();
  data.q_a_ = model.q_a();
  data.eta_a_.resize(data.q_a_);

  for (const Vector &f : model.f_q)
    data.eta_f_.push_back(riesz(model, f, opts));

  auto gs = gram_schmidt_reiterated(data.eta_f_, model.M_V, 0);
  data.max_passes_ = gs.max_passes;
  data.psi_ = std::move(gs.vectors);
  data.psi_count_.push_back(data.psi_.size());

  data.gram_ = DenseMatrix(data.q_f_, data.q_f_);
  for (std::size_t k = 0; k < data.q_f_; ++k) {
    const Vector w = model.M_V.multiply(data.eta_f_[k]);
    for (std::size_t l = 0; l <= k; ++l) {
      const double val = dot(w, data.eta_f_[l]);
      data.gram_(k, l) = val;
      data.gram_(l, k) = val;
    }
  }

  data.coeff_ = DenseMatrix(data.q_f_, data.psi_.size());
  for (std::size_t c = 0; c < data.psi_.size(); ++c) {
    const Vector u = model.M_V.multiply(data.psi_[c]);
    for (std::size_t k = 0; k < data.q_f_; ++k)
      data.coeff_(k, c) = dot(u, data.eta_f_[k]);
  }

  for (const Vector &v : basis)
    data.extend(model, v);
  return data;
}

void OfflineData::extend(const HighDimModel &model, const Vector &new_basis_vector) {
  if (new_basis_vector.size() != model.dim)
    throw std::invalid_argument("OfflineData::extend: basis vector dimension mismatch");

  // residual representatives of the operator blocks applied to the new vector
  VectorSet fresh(q_a_);
  VectorSet fresh_m(q_a_); // M_V * fresh, reused for the inner products below
  for (std::size_t q = 0; q < q_a_; ++q) {
    const Vector g = model.A_q[q].multiply(new_basis_vector);
    fresh[q] = spd_solve(model.M_V, g, solver_);
    fresh_m[q] = model.M_V.multiply(fresh[q]);
  }

  // grow the orthonormal residual basis
  VectorSet gs_input = psi_;
  for (const Vector &v : fresh)
    gs_input.push_back(v);
  auto gs = gram_schmidt_reiterated(std::move(gs_input), model.M_V, psi_.size());
  max_passes_ = std::max(max_passes_, gs.max_passes);
  const std::size_t m_old = psi_.size();
  psi_ = std::move(gs.vectors);
  const std::size_t m_new = psi_.size();

  const std::size_t n_old = n_basis_;
  const std::size_t count_old = q_f_ + q_a_ * n_old;
  for (std::size_t q = 0; q < q_a_; ++q)
    eta_a_[q].push_back(std::move(fresh[q]));
  n_basis_ = n_old + 1;
  const std::size_t count_new = residual_count();

  // index remap: the new representatives are interleaved block-major
  std::vector<std::size_t> to_new(count_old);
  for (std::size_t k = 0; k < q_f_; ++k)
    to_new[k] = k;
  for (std::size_t q = 0; q < q_a_; ++q)
    for (std::size_t i = 0; i < n_old; ++i)
      to_new[q_f_ + q * n_old + i] = q_f_ + q * n_basis_ + i;

  DenseMatrix gram_next(count_new, count_new);
  for (std::size_t a = 0; a < count_old; ++a)
    for (std::size_t b = 0; b < count_old; ++b)
      gram_next(to_new[a], to_new[b]) = gram_(a, b);
  for (std::size_t q = 0; q < q_a_; ++q) {
    const std::size_t k_new = q_f_ + q * n_basis_ + n_old;
    // pair each fresh representative with everything up to and including
    // itself; later fresh ones cover the remaining cross pairs
    for (std::size_t l = 0; l < count_new; ++l) {
      const std::size_t a = l >= q_f_ ? l - q_f_ : 0;
      const bool l_is_fresh = l >= q_f_ && a % n_basis_ == n_old;
      if (l_is_fresh && a / n_basis_ > q)
        continue;
      const double val = dot(fresh_m[q], eta_at(l));
      gram_next(k_new, l) = val;
      gram_next(l, k_new) = val;
    }
  }
  gram_ = std::move(gram_next);

  DenseMatrix coeff_next(count_new, m_new);
  for (std::size_t k = 0; k < count_old; ++k)
    for (std::size_t c = 0; c < m_old; ++c)
      coeff_next(to_new[k], c) = coeff_(k, c);
  // new rows against the previous columns
  for (std::size_t q = 0; q < q_a_; ++q) {
    const std::size_t k_new = q_f_ + q * n_basis_ + n_old;
    for (std::size_t c = 0; c < m_old; ++c)
      coeff_next(k_new, c) = dot(fresh_m[q], psi_[c]);
  }
  // new columns against every row
  for (std::size_t c = m_old; c < m_new; ++c) {
    const Vector u = model.M_V.multiply(psi_[c]);
    for (std::size_t k = 0; k < count_new; ++k)
      coeff_next(k, c) = dot(u, eta_at(k));
  }
  coeff_ = std::move(coeff_next);

  psi_count_.push_back(m_new);
}

ResidualVectors OfflineData::residuals() const {
  ResidualVectors r;
  r.q_f = q_f_;
  r.q_a = q_a_;
  r.basis_size = n_basis_;
  r.eta.reserve(residual_count());
  for (std::size_t k = 0; k < residual_count(); ++k)
    r.eta.push_back(eta_at(k));
  return r;
}

TradEstimatorData OfflineData::traditional(std::size_t basis_size) const {
  validate_stage(basis_size);
  const std::size_t count = q_f_ + q_a_ * basis_size;
  auto current = [&](std::size_t k) {
    if (k < q_f_)
      return k;
    const std::size_t a = k - q_f_;
    return q_f_ + (a / basis_size) * n_basis_ + a % basis_size;
  };
  TradEstimatorData data{DenseMatrix(count, count)};
  for (std::size_t k = 0; k < count; ++k)
    for (std::size_t l = 0; l < count; ++l)
      data.gram(k, l) = gram_(current(k), current(l));
  return data;
}

StableEstimatorData OfflineData::stable(std::size_t basis_size) const {
  validate_stage(basis_size);
  const std::size_t count = q_f_ + q_a_ * basis_size;
  const std::size_t m = psi_count_[basis_size];
  auto current = [&](std::size_t k) {
    if (k < q_f_)
      return k;
    const std::size_t a = k - q_f_;
    return q_f_ + (a / basis_size) * n_basis_ + a % basis_size;
  };
  StableEstimatorData data{DenseMatrix(count, m)};
  for (std::size_t k = 0; k < count; ++k)
    for (std::size_t c = 0; c < m; ++c)
      data.coefficients(k, c) = coeff_(current(k), c);
  return data;
}

BuildOfflineResult build_offline_data(const HighDimModel &model, const VectorSet &basis,
                                      const SolverOptions &opts) {
  const OfflineData data = OfflineData::build(model, basis, opts);
  return {data.residuals(), data.traditional(), data.stable()};
}

// ---------------------------------------------------------------------------
// online evaluation

Vector residual_coefficients(const AffineCoefficients &theta, const Parameter &mu,
                             const Vector &u_coeffs) {
  Vector alpha;
  alpha.reserve(theta.f.size() + theta.a.size() * u_coeffs.size());
  for (const auto &tf : theta.f)
    alpha.push_back(tf(mu));
  for (const auto &ta : theta.a) {
    const double t = ta(mu);
    for (double u : u_coeffs)
      alpha.push_back(-t * u);
  }
  return alpha;
}

double estimate_traditional(const TradEstimatorData &data, const Vector &alpha) {
  const std::size_t n = data.gram.rows();
  if (alpha.size() != n)
    throw std::invalid_argument("estimate_traditional: coefficient count mismatch");
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = 0; l < n; ++l)
      s += alpha[k] * alpha[l] * data.gram(k, l);
  return std::sqrt(std::max(0.0, s));
}

double estimate_stable(const StableEstimatorData &data, const Vector &alpha) {
  const std::size_t n = data.coefficients.rows();
  if (alpha.size() != n)
    throw std::invalid_argument("estimate_stable: coefficient count mismatch");
  const std::size_t m = data.coefficients.cols();
  double out = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double c = 0.0;
    for (std::size_t k = 0; k < n; ++k)
      c += alpha[k] * data.coefficients(k, i);
    out += c * c;
  }
  return std::sqrt(out);
}

double hd_residual_norm_oracle(const HighDimModel &model, const VectorSet &basis,
                               const Parameter &mu, const Vector &u_coeffs,
                               const SolverOptions &opts) {
  if (u_coeffs.size() != basis.size())
    throw std::invalid_argument("hd_residual_norm_oracle: coefficient count mismatch");
  Vector lifted(model.dim, 0.0);
  for (std::size_t i = 0; i < basis.size(); ++i)
    axpy(u_coeffs[i], basis[i], lifted);

  Vector residual = model.rhs_at(mu);
  if (!basis.empty()) {
    const Vector au = model.operator_at(mu).multiply(lifted);
    axpy(-1.0, au, residual);
  }
  const Vector rho = spd_solve(model.M_V, residual, opts);
  return v_norm(model.M_V, rho);
}

double error_bound(double estimate, const Parameter &mu) {
  if (estimate < 0.0)
    throw std::invalid_argument("error_bound: negative estimate");
  return estimate / coercivity_lower_bound(mu);
}

} // namespace rb
