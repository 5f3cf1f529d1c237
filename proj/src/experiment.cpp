// SPDX-License-Identifier: Apache-2.0

#include "rb/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

namespace rb {

namespace {

double seconds_since(const std::chrono::steady_clock::time_point &start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

} // namespace

std::vector<Parameter> sample_test_parameters(std::size_t count, std::uint64_t seed) {
  if (count == 0)
    throw std::invalid_argument("sample_test_parameters: count must be positive");
  SplitMix64 rng(seed);
  std::vector<Parameter> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Parameter mu;
    mu.components.resize(kThermalBlockParamCount);
    for (double &c : mu.components)
      c = kParamMin + (kParamMax - kParamMin) * rng.uniform();
    out.push_back(std::move(mu));
  }
  return out;
}

void validate_config(const ExperimentConfig &config) {
  if (config.grid_n == 0 || config.grid_n % 2 != 0)
    throw std::invalid_argument("config: grid size must be even and positive");
  if (config.train_points_per_axis < 2)
    throw std::invalid_argument("config: need at least two training points per axis");
  if (config.max_basis < 1)
    throw std::invalid_argument("config: maximum basis size must be at least 1");
  if (config.n_test_params < 1)
    throw std::invalid_argument("config: need at least one test parameter");
  if (!(config.solver_tol > 0.0))
    throw std::invalid_argument("config: solver tolerance must be positive");
  if (config.greedy_tol < 0.0)
    throw std::invalid_argument("config: greedy tolerance must be nonnegative");
}

std::vector<std::size_t> efficiency_table_sizes() { return {10, 15, 20, 25, 30, 35}; }

ExperimentResult run_experiment(const ExperimentConfig &config) {
  validate_config(config);
  ExperimentResult result;
  const SolverOptions solver{config.solver_tol, 0};

  auto t_start = std::chrono::steady_clock::now();
  const Mesh mesh = build_mesh(config.grid_n);
  const HighDimModel model = assemble_thermal_block(mesh);
  result.timings.assemble_seconds = seconds_since(t_start);

  t_start = std::chrono::steady_clock::now();
  const std::vector<Parameter> train = make_train_set(config.train_points_per_axis);
  GreedyResult greedy = weak_greedy(model, train, config.greedy_tol, config.max_basis,
                                    config.greedy_estimator, solver);
  result.greedy_log = greedy.log;
  result.final_basis_size = greedy.basis.size();
  result.timings.greedy_seconds = seconds_since(t_start);

  t_start = std::chrono::steady_clock::now();
  result.test_parameters = sample_test_parameters(config.n_test_params, config.rng_seed);
  const std::size_t n_test = result.test_parameters.size();
  VectorSet u_high(n_test);
  result.u_norm.resize(n_test);
  for (std::size_t t = 0; t < n_test; ++t) {
    u_high[t] = solve_high_dim(model, result.test_parameters[t], solver);
    result.u_norm[t] = v_norm(model.M_V, u_high[t]);
  }
  result.timings.test_solve_seconds = seconds_since(t_start);

  t_start = std::chrono::steady_clock::now();
  std::ofstream csv;
  if (!config.output_path.empty()) {
    csv.open(config.output_path, std::ios::trunc);
    if (!csv)
      throw std::runtime_error("run_experiment: cannot open " + config.output_path);
    csv << "N,est_stable,est_trad,err\n";
  }

  const std::size_t final_size = greedy.basis.size();
  for (std::size_t n = 0; n <= final_size; ++n) {
    const ReducedModel stage = reduced_model_prefix(greedy.model, greedy.offline, n);
    std::vector<double> err_abs(n_test), bs_abs(n_test), bt_abs(n_test);
    ResultRow row;
    row.basis_size = n;
    for (std::size_t t = 0; t < n_test; ++t) {
      const Parameter &mu = result.test_parameters[t];
      const Vector coeffs = solve_reduced(stage, mu);
      const Vector alpha = residual_coefficients(stage.theta, mu, coeffs);
      bs_abs[t] = error_bound(estimate_stable(stage.estimator_stable, alpha), mu);
      bt_abs[t] = error_bound(estimate_traditional(stage.estimator_trad, alpha), mu);
      const double coeff_norm = norm2(coeffs);

      Vector diff = u_high[t];
      for (std::size_t i = 0; i < n; ++i)
        axpy(-coeffs[i], greedy.basis.vectors[i], diff);
      err_abs[t] = v_norm(model.M_V, diff);

      const double rel_s = coeff_norm < kRelativeFloor ? bs_abs[t] : bs_abs[t] / coeff_norm;
      const double rel_t = coeff_norm < kRelativeFloor ? bt_abs[t] : bt_abs[t] / coeff_norm;
      const double rel_e =
          result.u_norm[t] < kRelativeFloor ? err_abs[t] : err_abs[t] / result.u_norm[t];
      row.est_stable = std::max(row.est_stable, rel_s);
      row.est_trad = std::max(row.est_trad, rel_t);
      row.err_true = std::max(row.err_true, rel_e);
    }
    result.rows.push_back(row);
    result.err_abs.push_back(std::move(err_abs));
    result.bound_stable_abs.push_back(std::move(bs_abs));
    result.bound_trad_abs.push_back(std::move(bt_abs));

    if (csv.is_open()) {
      char line[160];
      std::snprintf(line, sizeof line, "%zu,%.12e,%.12e,%.12e\n", row.basis_size,
                    row.est_stable, row.est_trad, row.err_true);
      csv << line;
      csv.flush(); // keep emitted rows on an abort
    }
  }

  for (std::size_t size : efficiency_table_sizes()) {
    if (size > final_size)
      continue;
    EfficiencyEntry entry;
    entry.basis_size = size;
    entry.trad_min = entry.stable_min = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < n_test; ++t) {
      if (result.bound_trad_abs[size][t] > 0.0) {
        const double eff = result.err_abs[size][t] / result.bound_trad_abs[size][t];
        entry.trad_max = std::max(entry.trad_max, eff);
        entry.trad_min = std::min(entry.trad_min, eff);
      }
      if (result.bound_stable_abs[size][t] > 0.0) {
        const double eff = result.err_abs[size][t] / result.bound_stable_abs[size][t];
        entry.stable_max = std::max(entry.stable_max, eff);
        entry.stable_min = std::min(entry.stable_min, eff);
      }
    }
    result.efficiency.push_back(entry);
  }
  result.timings.evaluation_seconds = seconds_since(t_start);

  // efficiency table, one column per reported basis size
  if (result.efficiency.empty()) {
    std::printf("efficiency table: no basis size in {10,...,35} reached\n");
  } else {
    std::printf("efficiencies (true error / bound) over %zu test parameters\n", n_test);
    std::printf("%-11s", "basis size");
    for (const auto &e : result.efficiency)
      std::printf("%10zu", e.basis_size);
    std::printf("\n");
    auto print_row = [&](const char *label, double EfficiencyEntry::*member) {
      std::printf("%-11s", label);
      for (const auto &e : result.efficiency)
        std::printf("%10.1e", e.*member);
      std::printf("\n");
    };
    print_row("trad.  max", &EfficiencyEntry::trad_max);
    print_row("trad.  min", &EfficiencyEntry::trad_min);
    print_row("stable max", &EfficiencyEntry::stable_max);
    print_row("stable min", &EfficiencyEntry::stable_min);
  }

  std::printf("phase timings [s]: assemble %.2f  greedy %.2f  test solves %.2f  "
              "evaluation %.2f\n",
              result.timings.assemble_seconds, result.timings.greedy_seconds,
              result.timings.test_solve_seconds, result.timings.evaluation_seconds);
  std::fflush(stdout);
  return result;
}

} // namespace rb
