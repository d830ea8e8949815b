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

#ifndef COVPOL_MODEL_HPP
#define COVPOL_MODEL_HPP

#include "covpol/country_data.hpp"
#include "covpol/rng.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace covpol {

/// Binary lockdown status of every country at one time step. Lockdown is
/// absorbing: stepping never clears a set bit.
struct WorldState {
    int day = 0;
    std::vector<std::uint8_t> status;

    int locked_count() const;
    int size() const { return static_cast<int>(status.size()); }

    bool operator==(const WorldState &) const = default;
};

/// Initial world: day 0 of the observed series.
WorldState initial_state(const ObservationSeries &observations);

/// Global model parameters (Table-1 base calibration as defaults).
struct ModelParams {
    double social_threshold_global = 0.13;  ///< S, base of the per-country social threshold
    double asocial_threshold_global = 0.01; ///< B, base of the per-country adoption probability
    int peer_group_size = 18;               ///< p, countries considered in the social rule
    double pressure_steepness = 50.0;       ///< lambda of the global-pressure term
    bool synchronous_update = false;        ///< sensitivity switch; default is in-place sequential

    /// Throws ValidationError when a field is outside its declared range.
    void validate() const;
};

/// Per-country adoption thresholds derived from the global parameters:
///   social[i]  = clamp(S * y_i / mean(y), 0, 1)
///   asocial[i] = clamp((ln rho_i)^2 * (mean(y) / y_i) * B, 0, 1)
/// where y is the democracy score and rho the population density.
struct DerivedThresholds {
    std::vector<double> social;
    std::vector<double> asocial;
};

DerivedThresholds derive_thresholds(std::span<const CountryRecord> countries,
                                    const ModelParams &params);

/// Symmetric country-pair distance matrix with zero diagonal, entries in [0, 1].
class DistanceMatrix {
  public:
    DistanceMatrix() = default;

    static DistanceMatrix build(std::span<const CountryRecord> countries,
                                const NormalizationContext &norm);

    /// Wraps an existing row-major n x n matrix (tests, alternative metrics).
    static DistanceMatrix from_values(int n, std::vector<double> values);

    double operator()(int i, int j) const {
        return values_[static_cast<std::size_t>(i) * n_ + j];
    }
    int size() const { return n_; }

  private:
    int n_ = 0;
    std::vector<double> values_;
};

/// Equally-weighted average of the three normalised similarity dimensions
/// (income, democracy, capital great-circle distance). Symmetric, in [0, 1].
double pairwise_distance(const CountryRecord &a, const CountryRecord &b,
                         const NormalizationContext &norm);

/// Everything one trajectory shares read-only: parameters, distances,
/// thresholds.
struct ModelContext {
    ModelParams params;
    DistanceMatrix distances;
    DerivedThresholds thresholds;

    int n_countries() const { return distances.size(); }

    static ModelContext build(std::span<const CountryRecord> countries,
                              const NormalizationContext &norm, const ModelParams &params);
};

/// Ids of the (up to) p in-lockdown countries nearest to i, ties broken by
/// country id. Exposed for verification against a full sort.
std::vector<int> nearest_locked_peers(int i, const WorldState &state,
                                      const DistanceMatrix &distances, int peer_group_size);

/// Social (peer-mimicry) adoption rule: true iff some country is in lockdown
/// and the mean distance to the min(p, |L|) nearest in-lockdown countries is
/// strictly below the country's social threshold.
bool social_condition(int i, const WorldState &state, const DistanceMatrix &distances,
                      const DerivedThresholds &thresholds, int peer_group_size);

/// A-social (own-initiative) adoption rule: one uniform draw from the
/// trajectory's stream against b_i plus the global-pressure term
/// exp(lambda * (fraction_locked - 1)), clamped to [0, 1].
bool asocial_condition(int i, double fraction_locked, const DerivedThresholds &thresholds,
                       const ModelParams &params, RandomStream &rng);

/// Advances the state by one day. Agents are visited in a fresh random
/// permutation; each not-in-lockdown agent adopts if the social or the
/// a-social rule fires. By default adoptions are visible to agents activated
/// later in the same step.
void step(WorldState &state, const ModelContext &ctx, RandomStream &rng);

/// Applies step() n_steps times; returns the n_steps+1 visited states
/// starting with `initial`. Deterministic given the stream.
std::vector<WorldState> run_trajectory(const WorldState &initial, int n_steps,
                                       const ModelContext &ctx, RandomStream &rng);

} // namespace covpol

#endif // COVPOL_MODEL_HPP
