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

#ifndef COVPOL_PARTICLE_FILTER_HPP
#define COVPOL_PARTICLE_FILTER_HPP

#include "covpol/model.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace covpol {

/// One stochastic model trajectory: a world state, a private random stream
/// and an importance weight.
struct Particle {
    WorldState state;
    std::uint64_t stream_seed;
    double weight;
    RandomStream rng;

    Particle(WorldState s, std::uint64_t seed, double w)
        : state(std::move(s)), stream_seed(seed), weight(w), rng(seed) {}
};

struct FilterConfig {
    int n_particles = 1000;
    int da_window = 5; ///< days between assimilation events

    /// Diagnostic switch: replaces observation scores with a constant, which
    /// must make assimilation a no-op on the state distribution.
    bool force_uniform_scores = false;

    void validate() const;
};

/// Unnormalised weight scores: per particle the squared fraction of
/// countries estimated in the correct state.
std::vector<double> compute_weight_scores(std::span<const Particle> particles,
                                          std::span<const std::uint8_t> observed_day);

/// scores / sum(scores); uniform fallback when every score is zero.
std::vector<double> normalize_weights(std::span<const double> scores);

/// Systematic resampling: one uniform offset in [0, 1/n_out) stepped at
/// 1/n_out intervals through the cumulative weight function. The returned
/// source indices are non-decreasing and each particle i appears
/// floor(n_out*w_i) or ceil(n_out*w_i) times.
std::vector<int> systematic_resample(std::span<const double> weights, int n_out,
                                     RandomStream &rng);

/// Per-event weight diagnostics captured before resampling.
struct AssimilationDiagnostics {
    int day = 0;
    double weight_entropy = 0.0; ///< -sum(w ln w)
    double max_weight = 0.0;
};

/// Scores the population against one observed day, resamples it and resets
/// weights to uniform. Survivors copy the source particle's state and draw a
/// fresh stream seed from `master` so duplicated trajectories diverge again.
/// Returns the pre-resample diagnostics.
AssimilationDiagnostics assimilate(std::vector<Particle> &particles,
                                   std::span<const std::uint8_t> observed_day,
                                   RandomStream &master, bool force_uniform_scores = false);

/// Full filter run record. Day-major matrices hold one row per simulated day
/// (0..n_steps) and one column per particle; rows at assimilation days hold
/// the values recorded before resampling.
struct FilterRunResult {
    std::vector<std::vector<double>> macro_fractions;
    std::vector<std::vector<double>> micro_accuracies;
    std::vector<AssimilationDiagnostics> assimilations;
    std::uint64_t master_seed = 0;

    std::vector<double> mean_macro() const;
    std::vector<double> mean_micro() const;
};

/// Runs the filter: initialises n_particles at the day-0 observed state,
/// alternates daily forward propagation with assimilation at days
/// k*da_window (k >= 1) up to n_steps. Observations must cover every
/// simulated day. Propagation of distinct particles is parallelised;
/// assimilation is a global barrier.
FilterRunResult run_filter(const FilterConfig &config, const ModelContext &ctx,
                           const ObservationSeries &observations, int n_steps,
                           std::uint64_t master_seed, int threads = 0);

} // namespace covpol

#endif // COVPOL_PARTICLE_FILTER_HPP
