// SPDX-License-Identifier: Apache-2.0

#ifndef RB_EXPERIMENT_HPP
#define RB_EXPERIMENT_HPP

#include <cstdint>
#include <string>

#include "rb/rb_core.hpp"

namespace rb {

// ---------------------------------------------------------------------------
// seeded parameter sampling

/// splitmix64: the documented seed -> parameter map of this project.
/// next() advances by the golden-gamma increment and mixes; uniform()
/// takes the top 53 bits into [0, 1).
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
  std::uint64_t state_;
};

/// count i.i.d. uniform parameters on the admissible box, components drawn
/// in order. Throws std::invalid_argument for count = 0.
std::vector<Parameter> sample_test_parameters(std::size_t count, std::uint64_t seed);

// ---------------------------------------------------------------------------
// the stability experiment

struct ExperimentConfig {
  std::size_t grid_n = 100; // must be even so elements stay inside quadrants
  std::size_t train_points_per_axis = 5;
  std::size_t max_basis = 35;
  double greedy_tol = 0.0;
  EstimatorKind greedy_estimator = EstimatorKind::stable;
  std::size_t n_test_params = 20;
  std::uint64_t rng_seed = 0;
  double solver_tol = 1e-14;
  std::string output_path = "errors.csv"; // empty disables the CSV
};

/// Throws std::invalid_argument (usage error) on invariant violations.
void validate_config(const ExperimentConfig &config);

/// Maxima of the relative quantities over the test set at one basis size.
struct ResultRow {
  std::size_t basis_size = 0;
  double est_stable = 0.0;
  double est_trad = 0.0;
  double err_true = 0.0;
};

struct EfficiencyEntry {
  std::size_t basis_size = 0;
  double trad_max = 0.0, trad_min = 0.0;
  double stable_max = 0.0, stable_min = 0.0;
};

struct PhaseTimings {
  double assemble_seconds = 0.0;
  double greedy_seconds = 0.0;
  double test_solve_seconds = 0.0;
  double evaluation_seconds = 0.0;
};

struct ExperimentResult {
  std::vector<ResultRow> rows; // one per basis size 0..final
  std::vector<EfficiencyEntry> efficiency;
  GreedyLog greedy_log;
  std::size_t final_basis_size = 0;
  std::vector<Parameter> test_parameters;
  // per (basis size, test parameter) absolute values
  std::vector<std::vector<double>> err_abs;
  std::vector<std::vector<double>> bound_stable_abs;
  std::vector<std::vector<double>> bound_trad_abs;
  std::vector<double> u_norm; // high-dimensional solution V-norms
  PhaseTimings timings;
};

/// Greedy basis generation with the configured evaluator, then evaluation
/// of every intermediate basis size on the fixed test set: maximum relative
/// true error and maximum relative bounds through both evaluators. Writes
/// the CSV row by row (header "N,est_stable,est_trad,err") and prints the
/// efficiency table and coarse phase timings to stdout. Deterministic for a
/// fixed config.
ExperimentResult run_experiment(const ExperimentConfig &config);

/// Basis sizes reported in the efficiency table (intersected with the
/// sizes the run actually reached).
std::vector<std::size_t> efficiency_table_sizes();

} // namespace rb

#endif // RB_EXPERIMENT_HPP
