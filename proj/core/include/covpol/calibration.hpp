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

#ifndef COVPOL_CALIBRATION_HPP
#define COVPOL_CALIBRATION_HPP

#include "covpol/country_data.hpp"
#include "covpol/model.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace covpol {

/// Exhaustive grid over the three global parameters.
struct CalibrationGrid {
    std::vector<double> b_values; ///< a-social threshold candidates
    std::vector<double> s_values; ///< social threshold candidates
    std::vector<int> p_values;    ///< peer group size candidates
};

/// One evaluated grid cell. `seed` reproduces the cell in isolation.
struct CalibrationCell {
    double b = 0.0;
    double s = 0.0;
    int p = 0;
    double summed_mse = 0.0;
    double pearson_rho = 0.0;
    std::uint64_t seed = 0;
};

struct CalibrationResult {
    ModelParams best;                   ///< argmin of summed_mse, ties by (B, S, p)
    std::size_t best_index = 0;         ///< row into `table`
    std::vector<CalibrationCell> table; ///< full score table, (B, S, p) lexicographic
};

/// Scores one parameter point: runs an ensemble over horizon_days daily
/// states and compares its mean macro curve against the observed fraction
/// curve.
CalibrationCell evaluate_calibration_cell(double b, double s, int p,
                                          std::span<const CountryRecord> countries,
                                          const NormalizationContext &norm,
                                          const ObservationSeries &observations,
                                          const ModelParams &base_params, int ensemble_size,
                                          int horizon_days, std::uint64_t seed,
                                          int threads = 0);

/// Grid search minimising the summed MSE of the ensemble-mean diffusion
/// curve; Pearson correlation is reported alongside. Each cell gets its own
/// deterministic seed derived from (master_seed, cell index). `base_params`
/// supplies the non-searched knobs (pressure steepness, update mode).
CalibrationResult grid_search(const CalibrationGrid &grid,
                              std::span<const CountryRecord> countries,
                              const NormalizationContext &norm,
                              const ObservationSeries &observations,
                              const ModelParams &base_params, int ensemble_size,
                              int horizon_days, std::uint64_t master_seed, int threads = 0);

} // namespace covpol

#endif // COVPOL_CALIBRATION_HPP
