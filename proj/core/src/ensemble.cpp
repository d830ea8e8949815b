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

#include "covpol/ensemble.hpp"

#include "covpol/errors.hpp"
#include "covpol/metrics.hpp"
#include "covpol/parallel.hpp"

#include <cstddef>

namespace covpol {

namespace {

std::vector<double> column_means(const std::vector<std::vector<double>> &rows) {
    if (rows.empty()) {
        return {};
    }
    std::vector<double> out(rows.front().size(), 0.0);
    for (const auto &row : rows) {
        for (std::size_t d = 0; d < row.size(); ++d) {
            out[d] += row[d];
        }
    }
    for (double &v : out) {
        v /= static_cast<double>(rows.size());
    }
    return out;
}

} // namespace

std::vector<double> EnsembleTraces::mean_fractions() const { return column_means(fractions); }

std::vector<double> EnsembleTraces::mean_accuracies() const { return column_means(accuracies); }

EnsembleTraces run_ensemble(const ModelContext &ctx, const ObservationSeries &observations,
                            int n_runs, int n_steps, std::uint64_t master_seed, int threads) {
    if (n_runs < 1) {
        throw ValidationError("run_ensemble: n_runs must be >= 1");
    }
    if (n_steps < 0) {
        throw ValidationError("run_ensemble: n_steps must be >= 0");
    }
    if (observations.days() < n_steps + 1) {
        throw ValidationError("run_ensemble: observation series shorter than horizon");
    }

    RandomStream trajectory_seeds(mix_seed({master_seed, seed_tag("trajectories")}));
    std::vector<std::uint64_t> seeds(static_cast<std::size_t>(n_runs));
    for (auto &s : seeds) {
        s = trajectory_seeds.next_u64();
    }

    const WorldState start = initial_state(observations);

    EnsembleTraces traces;
    traces.fractions.assign(static_cast<std::size_t>(n_runs), {});
    traces.accuracies.assign(static_cast<std::size_t>(n_runs), {});

    parallel_for(static_cast<std::size_t>(n_runs), threads, [&](std::size_t r) {
        RandomStream rng(seeds[r]);
        WorldState state = start;

        auto &fractions = traces.fractions[r];
        auto &accuracies = traces.accuracies[r];
        fractions.resize(static_cast<std::size_t>(n_steps) + 1);
        accuracies.resize(static_cast<std::size_t>(n_steps) + 1);

        fractions[0] = macro_fraction(state);
        accuracies[0] = micro_accuracy(state, observations.day_slice(0));
        for (int day = 1; day <= n_steps; ++day) {
            step(state, ctx, rng);
            fractions[static_cast<std::size_t>(day)] = macro_fraction(state);
            accuracies[static_cast<std::size_t>(day)] =
                micro_accuracy(state, observations.day_slice(day));
        }
    });

    return traces;
}

} // namespace covpol
