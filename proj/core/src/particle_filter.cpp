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

#include "covpol/particle_filter.hpp"

#include "covpol/errors.hpp"
#include "covpol/metrics.hpp"
#include "covpol/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace covpol {

void FilterConfig::validate() const {
    if (n_particles < 1) {
        throw ValidationError("n_particles must be >= 1");
    }
    if (da_window < 1) {
        throw ValidationError("da_window must be >= 1");
    }
}

std::vector<double> compute_weight_scores(std::span<const Particle> particles,
                                          std::span<const std::uint8_t> observed_day) {
    std::vector<double> scores;
    scores.reserve(particles.size());
    for (const Particle &p : particles) {
        const double correct = micro_accuracy(p.state, observed_day);
        scores.push_back(correct * correct);
    }
    return scores;
}

std::vector<double> normalize_weights(std::span<const double> scores) {
    double sum = 0.0;
    for (double s : scores) {
        if (s < 0.0) {
            throw ValidationError("normalize_weights: negative score");
        }
        sum += s;
    }
    std::vector<double> weights(scores.size(), 0.0);
    if (sum == 0.0) {
        // Degenerate population: no particle matches anything. Keep them all.
        const double uniform = 1.0 / static_cast<double>(scores.size());
        std::fill(weights.begin(), weights.end(), uniform);
        return weights;
    }
    for (std::size_t i = 0; i < scores.size(); ++i) {
        weights[i] = scores[i] / sum;
    }
    return weights;
}

std::vector<int> systematic_resample(std::span<const double> weights, int n_out,
                                     RandomStream &rng) {
    if (weights.empty() || n_out < 1) {
        throw ValidationError("systematic_resample: empty weights or n_out < 1");
    }
    const double step = 1.0 / static_cast<double>(n_out);
    const double offset = rng.uniform01() * step;

    std::vector<int> indices(static_cast<std::size_t>(n_out), 0);
    const int last = static_cast<int>(weights.size()) - 1;
    int source = 0;
    double cumulative = weights[0];
    for (int m = 0; m < n_out; ++m) {
        const double point = offset + static_cast<double>(m) * step;
        while (cumulative < point && source < last) {
            ++source;
            cumulative += weights[static_cast<std::size_t>(source)];
        }
        indices[static_cast<std::size_t>(m)] = source;
    }
    return indices;
}

AssimilationDiagnostics assimilate(std::vector<Particle> &particles,
                                   std::span<const std::uint8_t> observed_day,
                                   RandomStream &master, bool force_uniform_scores) {
    if (particles.empty()) {
        throw ValidationError("assimilate: empty particle population");
    }

    std::vector<double> scores;
    if (force_uniform_scores) {
        scores.assign(particles.size(), 1.0);
    } else {
        scores = compute_weight_scores(particles, observed_day);
    }
    const std::vector<double> weights = normalize_weights(scores);

    AssimilationDiagnostics diag;
    diag.max_weight = 0.0;
    diag.weight_entropy = 0.0;
    for (double w : weights) {
        diag.max_weight = std::max(diag.max_weight, w);
        if (w > 0.0) {
            diag.weight_entropy -= w * std::log(w);
        }
    }

    const int n = static_cast<int>(particles.size());
    const std::vector<int> sources = systematic_resample(weights, n, master);

    const double uniform = 1.0 / static_cast<double>(n);
    std::vector<Particle> next;
    next.reserve(particles.size());
    for (int idx : sources) {
        next.emplace_back(particles[static_cast<std::size_t>(idx)].state, master.next_u64(),
                          uniform);
    }
    particles = std::move(next);
    return diag;
}

std::vector<double> FilterRunResult::mean_macro() const {
    std::vector<double> out(macro_fractions.size(), 0.0);
    for (std::size_t d = 0; d < macro_fractions.size(); ++d) {
        double sum = 0.0;
        for (double v : macro_fractions[d]) {
            sum += v;
        }
        out[d] = sum / static_cast<double>(macro_fractions[d].size());
    }
    return out;
}

std::vector<double> FilterRunResult::mean_micro() const {
    std::vector<double> out(micro_accuracies.size(), 0.0);
    for (std::size_t d = 0; d < micro_accuracies.size(); ++d) {
        double sum = 0.0;
        for (double v : micro_accuracies[d]) {
            sum += v;
        }
        out[d] = sum / static_cast<double>(micro_accuracies[d].size());
    }
    return out;
}

FilterRunResult run_filter(const FilterConfig &config, const ModelContext &ctx,
                           const ObservationSeries &observations, int n_steps,
                           std::uint64_t master_seed, int threads) {
    config.validate();
    if (n_steps < 0) {
        throw ValidationError("run_filter: n_steps must be >= 0");
    }
    if (observations.days() < n_steps + 1) {
        throw ValidationError("run_filter: observation series shorter than horizon");
    }

    // Initial trajectory seeds come from the same family an unfiltered
    // ensemble uses, so a filter that never assimilates reproduces the
    // ensemble exactly. Resampling seeds come from a separate master stream.
    RandomStream trajectory_seeds(mix_seed({master_seed, seed_tag("trajectories")}));
    RandomStream filter_master(mix_seed({master_seed, seed_tag("filter-master")}));

    const WorldState start = initial_state(observations);
    const double uniform = 1.0 / static_cast<double>(config.n_particles);
    std::vector<Particle> particles;
    particles.reserve(static_cast<std::size_t>(config.n_particles));
    for (int i = 0; i < config.n_particles; ++i) {
        particles.emplace_back(start, trajectory_seeds.next_u64(), uniform);
    }

    FilterRunResult result;
    result.master_seed = master_seed;
    result.macro_fractions.assign(static_cast<std::size_t>(n_steps) + 1, {});
    result.micro_accuracies.assign(static_cast<std::size_t>(n_steps) + 1, {});

    auto record_day = [&](int day) {
        auto &macro = result.macro_fractions[static_cast<std::size_t>(day)];
        auto &micro = result.micro_accuracies[static_cast<std::size_t>(day)];
        macro.resize(particles.size());
        micro.resize(particles.size());
        const auto observed = observations.day_slice(day);
        for (std::size_t i = 0; i < particles.size(); ++i) {
            macro[i] = macro_fraction(particles[i].state);
            micro[i] = micro_accuracy(particles[i].state, observed);
        }
    };

    record_day(0);
    for (int day = 1; day <= n_steps; ++day) {
        parallel_for(particles.size(), threads, [&](std::size_t i) {
            step(particles[i].state, ctx, particles[i].rng);
        });
        record_day(day);
        if (day % config.da_window == 0) {
            AssimilationDiagnostics diag = assimilate(
                particles, observations.day_slice(day), filter_master,
                config.force_uniform_scores);
            diag.day = day;
            result.assimilations.push_back(diag);
        }
    }
    return result;
}

} // namespace covpol
