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

#include "covpol/model.hpp"

#include "covpol/errors.hpp"
#include "covpol/geo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace covpol {

int WorldState::locked_count() const {
    return static_cast<int>(std::count(status.begin(), status.end(), std::uint8_t{1}));
}

WorldState initial_state(const ObservationSeries &observations) {
    WorldState state;
    state.day = 0;
    const auto day0 = observations.day_slice(0);
    state.status.assign(day0.begin(), day0.end());
    return state;
}

void ModelParams::validate() const {
    if (social_threshold_global < 0.0 || social_threshold_global > 1.0) {
        throw ValidationError("social_threshold_global must be in [0, 1]");
    }
    if (asocial_threshold_global < 0.0 || asocial_threshold_global > 1.0) {
        throw ValidationError("asocial_threshold_global must be in [0, 1]");
    }
    if (peer_group_size < 1) {
        throw ValidationError("peer_group_size must be >= 1");
    }
    if (!(pressure_steepness > 0.0)) {
        throw ValidationError("pressure_steepness must be > 0");
    }
}

DerivedThresholds derive_thresholds(std::span<const CountryRecord> countries,
                                    const ModelParams &params) {
    if (countries.empty()) {
        throw ValidationError("derive_thresholds: empty country set");
    }
    double democracy_sum = 0.0;
    for (const CountryRecord &rec : countries) {
        if (!(rec.democracy > 0.0)) {
            throw ValidationError("derive_thresholds: country '" + rec.code +
                                  "' has democracy score <= 0");
        }
        democracy_sum += rec.democracy;
    }
    const double democracy_mean = democracy_sum / static_cast<double>(countries.size());

    DerivedThresholds out;
    out.social.reserve(countries.size());
    out.asocial.reserve(countries.size());
    for (const CountryRecord &rec : countries) {
        const double s = params.social_threshold_global * (rec.democracy / democracy_mean);
        const double log_density = std::log(rec.pop_density);
        const double b = log_density * log_density * (democracy_mean / rec.democracy) *
                         params.asocial_threshold_global;
        out.social.push_back(std::clamp(s, 0.0, 1.0));
        out.asocial.push_back(std::clamp(b, 0.0, 1.0));
    }
    return out;
}

double pairwise_distance(const CountryRecord &a, const CountryRecord &b,
                         const NormalizationContext &norm) {
    const double income_term =
        std::abs(a.income - b.income) / (norm.income_max - norm.income_min);
    const double democracy_term =
        std::abs(a.democracy - b.democracy) / (norm.democracy_max - norm.democracy_min);
    const double geo_term = haversine_km({a.capital_lat, a.capital_lon},
                                         {b.capital_lat, b.capital_lon}) /
                            norm.haversine_max_km;
    return (income_term + democracy_term + geo_term) / 3.0;
}

DistanceMatrix DistanceMatrix::build(std::span<const CountryRecord> countries,
                                     const NormalizationContext &norm) {
    DistanceMatrix m;
    m.n_ = static_cast<int>(countries.size());
    m.values_.assign(static_cast<std::size_t>(m.n_) * m.n_, 0.0);
    for (int i = 0; i < m.n_; ++i) {
        for (int j = i + 1; j < m.n_; ++j) {
            const double d = pairwise_distance(countries[static_cast<std::size_t>(i)],
                                               countries[static_cast<std::size_t>(j)], norm);
            m.values_[static_cast<std::size_t>(i) * m.n_ + j] = d;
            m.values_[static_cast<std::size_t>(j) * m.n_ + i] = d;
        }
    }
    return m;
}

DistanceMatrix DistanceMatrix::from_values(int n, std::vector<double> values) {
    if (n < 0 || values.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n)) {
        throw ValidationError("DistanceMatrix::from_values: size mismatch");
    }
    DistanceMatrix m;
    m.n_ = n;
    m.values_ = std::move(values);
    return m;
}

ModelContext ModelContext::build(std::span<const CountryRecord> countries,
                                 const NormalizationContext &norm, const ModelParams &params) {
    params.validate();
    ModelContext ctx;
    ctx.params = params;
    ctx.distances = DistanceMatrix::build(countries, norm);
    ctx.thresholds = derive_thresholds(countries, params);
    return ctx;
}

namespace {

/// Mean distance from i to the min(p, |L|) nearest in-lockdown countries,
/// or a negative value when no country is in lockdown. `scratch` avoids
/// per-call allocation in the step loop.
double nearest_locked_mean(int i, std::span<const std::uint8_t> status,
                           const DistanceMatrix &distances, int peer_group_size,
                           std::vector<double> &scratch) {
    scratch.clear();
    const int n = static_cast<int>(status.size());
    for (int j = 0; j < n; ++j) {
        if (status[static_cast<std::size_t>(j)]) {
            scratch.push_back(distances(i, j));
        }
    }
    if (scratch.empty()) {
        return -1.0;
    }
    const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(peer_group_size),
                                                scratch.size());
    if (k < scratch.size()) {
        std::nth_element(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(k) - 1,
                         scratch.end());
    }
    const double sum = std::accumulate(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(k), 0.0);
    return sum / static_cast<double>(k);
}

double pressure_boosted_threshold(double base, double fraction_locked, double steepness) {
    const double boosted = base + std::exp(steepness * (fraction_locked - 1.0));
    return std::clamp(boosted, 0.0, 1.0);
}

} // namespace

std::vector<int> nearest_locked_peers(int i, const WorldState &state,
                                      const DistanceMatrix &distances, int peer_group_size) {
    std::vector<std::pair<double, int>> locked;
    for (int j = 0; j < state.size(); ++j) {
        if (state.status[static_cast<std::size_t>(j)]) {
            locked.emplace_back(distances(i, j), j);
        }
    }
    const std::size_t k =
        std::min<std::size_t>(static_cast<std::size_t>(peer_group_size), locked.size());
    std::partial_sort(locked.begin(), locked.begin() + static_cast<std::ptrdiff_t>(k),
                      locked.end());
    std::vector<int> peers;
    peers.reserve(k);
    for (std::size_t m = 0; m < k; ++m) {
        peers.push_back(locked[m].second);
    }
    return peers;
}

bool social_condition(int i, const WorldState &state, const DistanceMatrix &distances,
                      const DerivedThresholds &thresholds, int peer_group_size) {
    std::vector<double> scratch;
    const double mean = nearest_locked_mean(i, state.status, distances, peer_group_size, scratch);
    if (mean < 0.0) {
        return false;
    }
    return mean < thresholds.social[static_cast<std::size_t>(i)];
}

bool asocial_condition(int i, double fraction_locked, const DerivedThresholds &thresholds,
                       const ModelParams &params, RandomStream &rng) {
    const double threshold =
        pressure_boosted_threshold(thresholds.asocial[static_cast<std::size_t>(i)],
                                   fraction_locked, params.pressure_steepness);
    return rng.uniform01() < threshold;
}

void step(WorldState &state, const ModelContext &ctx, RandomStream &rng) {
    const int n = state.size();

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);

    // In synchronous mode conditions read the day-start snapshot; by default
    // they read the evolving state so earlier adopters are visible.
    std::vector<std::uint8_t> snapshot;
    if (ctx.params.synchronous_update) {
        snapshot = state.status;
    }
    std::span<const std::uint8_t> visible =
        ctx.params.synchronous_update ? std::span<const std::uint8_t>(snapshot)
                                      : std::span<const std::uint8_t>(state.status);

    int visible_locked = state.locked_count();
    std::vector<double> scratch;
    scratch.reserve(static_cast<std::size_t>(n));

    for (int i : order) {
        if (state.status[static_cast<std::size_t>(i)]) {
            continue;
        }
        const double mean =
            nearest_locked_mean(i, visible, ctx.distances, ctx.params.peer_group_size, scratch);
        bool adopt =
            mean >= 0.0 && mean < ctx.thresholds.social[static_cast<std::size_t>(i)];
        if (!adopt) {
            const double fraction = static_cast<double>(visible_locked) / n;
            adopt = asocial_condition(i, fraction, ctx.thresholds, ctx.params, rng);
        }
        if (adopt) {
            state.status[static_cast<std::size_t>(i)] = 1;
            if (!ctx.params.synchronous_update) {
                ++visible_locked;
            }
        }
    }
    ++state.day;
}

std::vector<WorldState> run_trajectory(const WorldState &initial, int n_steps,
                                       const ModelContext &ctx, RandomStream &rng) {
    if (n_steps < 0) {
        throw ValidationError("run_trajectory: n_steps must be >= 0");
    }
    std::vector<WorldState> states;
    states.reserve(static_cast<std::size_t>(n_steps) + 1);
    states.push_back(initial);
    for (int t = 0; t < n_steps; ++t) {
        WorldState next = states.back();
        step(next, ctx, rng);
        states.push_back(std::move(next));
    }
    return states;
}

} // namespace covpol
