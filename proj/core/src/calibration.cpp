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

#include "covpol/calibration.hpp"

#include "covpol/ensemble.hpp"
#include "covpol/errors.hpp"
#include "covpol/metrics.hpp"
#include "covpol/rng.hpp"

#include <cstddef>

namespace covpol {

CalibrationCell evaluate_calibration_cell(double b, double s, int p,
                                          std::span<const CountryRecord> countries,
                                          const NormalizationContext &norm,
                                          const ObservationSeries &observations,
                                          const ModelParams &base_params, int ensemble_size,
                                          int horizon_days, std::uint64_t seed, int threads) {
    ModelParams params = base_params;
    params.asocial_threshold_global = b;
    params.social_threshold_global = s;
    params.peer_group_size = p;

    const ModelContext ctx = ModelContext::build(countries, norm, params);
    const int n_steps = horizon_days - 1;
    const EnsembleTraces traces =
        run_ensemble(ctx, observations, ensemble_size, n_steps, seed, threads);

    const std::vector<double> mean_curve = traces.mean_fractions();
    std::vector<double> observed = observations.fraction_curve();
    observed.resize(static_cast<std::size_t>(horizon_days));

    CalibrationCell cell;
    cell.b = b;
    cell.s = s;
    cell.p = p;
    cell.seed = seed;
    cell.summed_mse = summed_mse(mse_curve(mean_curve, observed));
    cell.pearson_rho = pearson_correlation(mean_curve, observed);
    return cell;
}

CalibrationResult grid_search(const CalibrationGrid &grid,
                              std::span<const CountryRecord> countries,
                              const NormalizationContext &norm,
                              const ObservationSeries &observations,
                              const ModelParams &base_params, int ensemble_size,
                              int horizon_days, std::uint64_t master_seed, int threads) {
    if (grid.b_values.empty() || grid.s_values.empty() || grid.p_values.empty()) {
        throw ValidationError("grid_search: empty parameter grid");
    }
    if (ensemble_size < 2) {
        throw ValidationError("grid_search: ensemble_size must be >= 2");
    }
    if (horizon_days < 2 || observations.days() < horizon_days) {
        throw ValidationError("grid_search: horizon must be >= 2 days and covered by data");
    }

    CalibrationResult result;
    std::uint64_t cell_index = 0;
    for (double b : grid.b_values) {
        for (double s : grid.s_values) {
            for (int p : grid.p_values) {
                const std::uint64_t seed =
                    mix_seed({master_seed, seed_tag("calibration"), cell_index});
                result.table.push_back(evaluate_calibration_cell(
                    b, s, p, countries, norm, observations, base_params, ensemble_size,
                    horizon_days, seed, threads));
                ++cell_index;
            }
        }
    }

    // Cells are generated in (B, S, p) lexicographic order, so keeping the
    // first strict minimum implements the deterministic tie-break.
    std::size_t best = 0;
    for (std::size_t i = 1; i < result.table.size(); ++i) {
        if (result.table[i].summed_mse < result.table[best].summed_mse) {
            best = i;
        }
    }
    result.best_index = best;
    result.best = base_params;
    result.best.asocial_threshold_global = result.table[best].b;
    result.best.social_threshold_global = result.table[best].s;
    result.best.peer_group_size = result.table[best].p;
    return result;
}

} // namespace covpol
