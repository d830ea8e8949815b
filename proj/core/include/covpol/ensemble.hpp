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

#ifndef COVPOL_ENSEMBLE_HPP
#define COVPOL_ENSEMBLE_HPP

#include "covpol/country_data.hpp"
#include "covpol/model.hpp"

#include <cstdint>
#include <vector>

namespace covpol {

/// Run-major [run][day] traces of an unfiltered ensemble.
struct EnsembleTraces {
    std::vector<std::vector<double>> fractions;
    std::vector<std::vector<double>> accuracies;

    std::vector<double> mean_fractions() const;
    std::vector<double> mean_accuracies() const;
};

/// Runs n_runs independent trajectories from the day-0 observed state, each
/// on its own stream, recording the fraction-in-lockdown and the micro
/// accuracy for days 0..n_steps. Observations must cover every simulated
/// day. Runs execute on a bounded worker pool; results are deterministic in
/// (master_seed, inputs) regardless of the thread count.
EnsembleTraces run_ensemble(const ModelContext &ctx, const ObservationSeries &observations,
                            int n_runs, int n_steps, std::uint64_t master_seed,
                            int threads = 0);

} // namespace covpol

#endif // COVPOL_ENSEMBLE_HPP
