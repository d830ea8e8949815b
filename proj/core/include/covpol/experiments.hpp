// Copyright 2026 The covpol authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef COVPOL_EXPERIMENTS_HPP
#define COVPOL_EXPERIMENTS_HPP

#include "covpol/calibration.hpp"
#include "covpol/country_data.hpp"
#include "covpol/metrics.hpp"
#include "covpol/model.hpp"
#include "covpol/particle_filter.hpp"
#include "covpol/synthetic.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace covpol {

enum class ExperimentKind {
    base_run,
    pf_vs_ensemble,
    particle_count_sweep,
    da_window_sweep,
    calibrate,
    generate_synthetic,
};

std::string to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from_string(const std::string &name);

struct PathsConfig {
    std::string countries;
    std::string observations;
    std::string out_dir;
};

/// Grid and per-cell ensemble size for the calibrate experiment.
struct CalibrationConfig {
    std::vector<double> b_grid = {0.002, 0.005, 0.01, 0.02, 0.05};
    std::vector<double> s_grid = {0.05, 0.09, 0.13, 0.17, 0.21, 0.25};
    std::vector<int> p_grid = {6, 12, 18, 24, 30};
    int ensemble_size = 100;
};

/// All tunable knobs of one experiment run. Defaults reproduce the base
/// calibration on a full March window.
struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::base_run;
    ModelParams model;
    FilterConfig filter;
    int ensemble_size = 100;
    int horizon_days = 31; ///< daily states including day 0
    std::uint64_t master_seed = 42;
    int trials = 20; ///< repetitions per sweep cell (small particle counts)
    std::vector<int> particle_counts = {64, 128, 256, 512, 1024, 2048, 4096};
    std::vector<int> da_windows = {0, 15, 10, 5, 2, 1}; ///< 0 means no filtering
    int threads = 0;                                    ///< 0 = all hardware threads
    SyntheticConfig synthetic;
    CalibrationConfig calibration;
    PathsConfig paths;

    void validate() const;
};

/// Parses the JSON config in strict mode: unknown keys anywhere are an
/// error. Missing keys keep their defaults.
ExperimentConfig parse_config(const std::string &json_text);
ExperimentConfig load_config(const std::filesystem::path &path);

/// Canonical serialization of the effective config (all defaults
/// materialised, keys sorted) and its FNV-1a hash, embedded in every output
/// file for provenance. Paths and thread counts do not affect results and
/// are excluded, so the hash identifies the run semantics.
std::string canonical_config_json(const ExperimentConfig &config);
std::uint64_t config_hash(const ExperimentConfig &config);

/// Country set, normalisation context and observations loaded together.
struct Dataset {
    std::vector<CountryRecord> countries;
    NormalizationContext norm;
    ObservationSeries observations;

    static Dataset load(const PathsConfig &paths);
    static Dataset from_synthetic(SyntheticDataset synthetic);
};

struct BaseRunResult {
    EnsembleSummary summary;
    std::vector<double> observed_fractions;
    std::vector<double> mse;
    double summed_mse_total = 0.0;
    double rho = 0.0;
    double max_abs_deviation = 0.0;
};

/// Unfiltered ensemble from the day-0 observed state.
BaseRunResult run_base(const Dataset &data, const ModelParams &params, int ensemble_size,
                       int horizon_days, std::uint64_t master_seed, int threads = 0);

struct PfComparisonResult {
    EnsembleSummary base_summary;
    EnsembleSummary pf_summary;
    std::vector<double> observed_fractions;
    std::vector<double> mse_base;
    std::vector<double> mse_pf;
    std::vector<double> ratio_per_day; ///< mse_pf / mse_base; NaN where base is 0
    double summed_mse_base = 0.0;
    double summed_mse_pf = 0.0;
    double summed_mse_reduction = 0.0;   ///< 1 - pf/base
    double best_day_mse_reduction = 0.0; ///< best per-day reduction where base > 0
    std::vector<AssimilationDiagnostics> assimilations;
};

/// Base ensemble and particle filter of equal size from independent seed
/// families, compared per day.
PfComparisonResult run_pf_comparison(const Dataset &data, const ModelParams &params,
                                     const FilterConfig &filter, int horizon_days,
                                     std::uint64_t master_seed, int threads = 0);

struct ParticleSweepRow {
    int n_particles = 0;
    int trial = 0;
    std::uint64_t seed = 0;
    double summed_mse_pf = 0.0;
    double summed_mse_nopf = 0.0;
};

/// Paired PF / no-PF trials across particle counts. Counts below 1024 run
/// `trials` repetitions; larger counts run once.
std::vector<ParticleSweepRow> run_particle_sweep(const Dataset &data, const ModelParams &params,
                                                 int da_window,
                                                 const std::vector<int> &particle_counts,
                                                 int trials, int horizon_days,
                                                 std::uint64_t master_seed, int threads = 0);

struct WindowSweepRow {
    int window = 0; ///< 0 means no filtering
    int n_events = 0;
    double summed_mse = 0.0;
    double mean_micro_accuracy = 0.0;
};

struct WindowSweepResult {
    std::vector<WindowSweepRow> rows;
    double mse_slope_per_event = 0.0; ///< least-squares slope of summed MSE vs event count
};

/// Filtering-frequency sweep at a fixed particle count.
WindowSweepResult run_window_sweep(const Dataset &data, const ModelParams &params,
                                   int n_particles, const std::vector<int> &windows,
                                   int horizon_days, std::uint64_t master_seed,
                                   int threads = 0);

/// Runs the configured experiment end-to-end: loads (or generates) data,
/// executes, and serialises all result files into paths.out_dir. Every
/// output embeds the config hash and master seed.
void run_experiment(const ExperimentConfig &config);

} // namespace covpol

#endif // COVPOL_EXPERIMENTS_HPP
