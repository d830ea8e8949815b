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

#include "covpol/synthetic.hpp"

#include "covpol/errors.hpp"
#include "covpol/metrics.hpp"
#include "covpol/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace covpol {

void SyntheticConfig::validate() const {
    if (n_countries < 2) {
        throw ValidationError("synthetic: n_countries must be >= 2");
    }
    if (initial_fraction <= 0.0 || initial_fraction >= 1.0) {
        throw ValidationError("synthetic: initial_fraction must be in (0, 1)");
    }
    if (candidate_runs < 1) {
        throw ValidationError("synthetic: candidate_runs must be >= 1");
    }
    if (target_max_deviation < 0.0 || target_max_deviation >= 1.0) {
        throw ValidationError("synthetic: target_max_deviation must be in [0, 1)");
    }
    if (n_blocs < 0) {
        throw ValidationError("synthetic: n_blocs must be >= 0 (0 = auto)");
    }
    if (bloc_spread_deg <= 0.0 || bloc_spread_deg > 90.0) {
        throw ValidationError("synthetic: bloc_spread_deg must be in (0, 90]");
    }
    if (attribute_mixing < 0.0 || attribute_mixing > 1.0) {
        throw ValidationError("synthetic: attribute_mixing must be in [0, 1]");
    }
    if (income_log_sd <= 0.0 || density_log_sd <= 0.0) {
        throw ValidationError("synthetic: log-normal sd must be > 0");
    }
}

namespace {

constexpr double kPi = std::numbers::pi;

// Box-Muller; consumes two uniforms per call.
double normal_draw(RandomStream &rng) {
    double u1 = rng.uniform01();
    while (u1 == 0.0) {
        u1 = rng.uniform01();
    }
    const double u2 = rng.uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

std::string synthetic_code(int index) {
    std::string code(3, 'A');
    code[2] = static_cast<char>('A' + index % 26);
    code[1] = static_cast<char>('A' + (index / 26) % 26);
    code[0] = static_cast<char>('A' + (index / 676) % 26);
    return code;
}

struct LatLon {
    double lat_deg;
    double lon_deg;
};

LatLon uniform_sphere_point(RandomStream &rng) {
    const double lat = std::asin(2.0 * rng.uniform01() - 1.0) * 180.0 / kPi;
    const double lon = -180.0 + 360.0 * rng.uniform01();
    return {lat, lon};
}

/// Destination point at angular distance `delta_rad` along `bearing_rad`.
LatLon displace(const LatLon &origin, double bearing_rad, double delta_rad) {
    const double phi = origin.lat_deg * kPi / 180.0;
    const double lambda = origin.lon_deg * kPi / 180.0;
    const double phi2 = std::asin(std::sin(phi) * std::cos(delta_rad) +
                                  std::cos(phi) * std::sin(delta_rad) * std::cos(bearing_rad));
    const double lambda2 =
        lambda + std::atan2(std::sin(bearing_rad) * std::sin(delta_rad) * std::cos(phi),
                            std::cos(delta_rad) - std::sin(phi) * std::sin(phi2));
    double lon = lambda2 * 180.0 / kPi;
    while (lon >= 180.0) {
        lon -= 360.0;
    }
    while (lon < -180.0) {
        lon += 360.0;
    }
    return {phi2 * 180.0 / kPi, lon};
}

/// Deals sorted draws to countries so that each bloc holds a contiguous run
/// of the sorted values (blocs visited in `bloc_order`), then applies random
/// cross-swaps. A pure permutation of the draws: marginals are preserved
/// exactly, spatial correlation is introduced.
std::vector<double> deal_by_bloc(std::vector<double> draws, const std::vector<int> &bloc_of,
                                 const std::vector<int> &bloc_order, double mixing,
                                 RandomStream &rng) {
    const std::size_t n = draws.size();
    std::sort(draws.begin(), draws.end());

    std::vector<std::vector<std::size_t>> members(bloc_order.size());
    for (std::size_t i = 0; i < n; ++i) {
        members[static_cast<std::size_t>(bloc_of[i])].push_back(i);
    }

    std::vector<double> out(n, 0.0);
    std::size_t cursor = 0;
    for (int bloc : bloc_order) {
        for (std::size_t member : members[static_cast<std::size_t>(bloc)]) {
            out[member] = draws[cursor++];
        }
    }

    const auto swaps = static_cast<std::size_t>(std::llround(mixing * static_cast<double>(n)));
    for (std::size_t s = 0; s < swaps; ++s) {
        const std::size_t a = static_cast<std::size_t>(rng.uniform_below(n));
        const std::size_t b = static_cast<std::size_t>(rng.uniform_below(n));
        std::swap(out[a], out[b]);
    }
    return out;
}

} // namespace

SyntheticDataset generate_synthetic(const SyntheticConfig &config, const ModelParams &params,
                                    int horizon_days, std::uint64_t seed) {
    config.validate();
    params.validate();
    if (horizon_days < 1) {
        throw ValidationError("synthetic: horizon_days must be >= 1");
    }

    RandomStream rng(mix_seed({seed, seed_tag("synthetic")}));
    const std::size_t n = static_cast<std::size_t>(config.n_countries);

    // Geographic blocs: uniformly placed centres, members scattered around
    // them. Bloc sizes are as even as possible.
    const int n_blocs =
        config.n_blocs > 0 ? std::min(config.n_blocs, config.n_countries)
                           : std::max(1, (config.n_countries + 11) / 24);
    std::vector<LatLon> centres;
    centres.reserve(static_cast<std::size_t>(n_blocs));
    for (int k = 0; k < n_blocs; ++k) {
        centres.push_back(uniform_sphere_point(rng));
    }
    std::vector<int> bloc_of(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        bloc_of[i] = static_cast<int>(i % static_cast<std::size_t>(n_blocs));
    }
    rng.shuffle(bloc_of);

    // Attribute draws with the configured marginals.
    std::vector<double> democracy_draws(n), income_draws(n);
    for (std::size_t i = 0; i < n; ++i) {
        democracy_draws[i] = 1.0 + 9.0 * rng.uniform01();
        income_draws[i] =
            std::exp(config.income_log_mean + config.income_log_sd * normal_draw(rng));
    }
    // Democracy and income follow the same bloc ranking (affluent democratic
    // blocs), up to the mixing noise.
    std::vector<int> bloc_order(static_cast<std::size_t>(n_blocs));
    std::iota(bloc_order.begin(), bloc_order.end(), 0);
    rng.shuffle(bloc_order);
    const std::vector<double> democracy =
        deal_by_bloc(std::move(democracy_draws), bloc_of, bloc_order, config.attribute_mixing,
                     rng);
    const std::vector<double> income = deal_by_bloc(std::move(income_draws), bloc_of, bloc_order,
                                                    config.attribute_mixing, rng);

    SyntheticDataset data;
    data.countries.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        CountryRecord rec;
        rec.id = static_cast<int>(i);
        rec.code = synthetic_code(static_cast<int>(i));
        rec.name = "Synthia " + rec.code;
        rec.income = income[i];
        rec.democracy = democracy[i];
        const double spread_rad = config.bloc_spread_deg * kPi / 180.0;
        const double delta = std::abs(normal_draw(rng)) * spread_rad;
        const double bearing = 2.0 * kPi * rng.uniform01();
        const LatLon capital =
            displace(centres[static_cast<std::size_t>(bloc_of[i])], bearing,
                     std::min(delta, kPi * 0.5));
        rec.capital_lat = capital.lat_deg;
        rec.capital_lon = capital.lon_deg;
        rec.pop_density =
            std::exp(config.density_log_mean + config.density_log_sd * normal_draw(rng));
        data.countries.push_back(std::move(rec));
    }

    // Day-0 adopters: a random subset of ~initial_fraction of the world.
    const int n_initial = std::max(
        1, static_cast<int>(std::llround(config.initial_fraction * config.n_countries)));
    std::vector<int> ids(n);
    std::iota(ids.begin(), ids.end(), 0);
    rng.shuffle(ids);
    for (int k = 0; k < n_initial; ++k) {
        data.countries[static_cast<std::size_t>(ids[static_cast<std::size_t>(k)])]
            .initial_lockdown = true;
    }

    const NormalizationContext norm = build_normalization(data.countries);
    const ModelContext ctx = ModelContext::build(data.countries, norm, params);

    WorldState start;
    start.day = 0;
    start.status.assign(n, 0);
    for (const CountryRecord &rec : data.countries) {
        start.status[static_cast<std::size_t>(rec.id)] = rec.initial_lockdown ? 1 : 0;
    }

    // Run several candidate trajectories and keep the one whose worst-day
    // offset from the candidates' mean curve is closest to the configured
    // target: a realistic realisation, neither dead-centre nor an outlier.
    const int n_steps = horizon_days - 1;
    std::vector<std::vector<WorldState>> candidates;
    candidates.reserve(static_cast<std::size_t>(config.candidate_runs));
    for (int c = 0; c < config.candidate_runs; ++c) {
        RandomStream traj_rng(rng.next_u64());
        candidates.push_back(run_trajectory(start, n_steps, ctx, traj_rng));
    }

    std::vector<std::vector<double>> curves;
    curves.reserve(candidates.size());
    for (const auto &states : candidates) {
        std::vector<double> curve;
        curve.reserve(states.size());
        for (const WorldState &st : states) {
            curve.push_back(macro_fraction(st));
        }
        curves.push_back(std::move(curve));
    }
    std::vector<double> mean_curve(static_cast<std::size_t>(horizon_days), 0.0);
    for (const auto &curve : curves) {
        for (std::size_t d = 0; d < curve.size(); ++d) {
            mean_curve[d] += curve[d];
        }
    }
    for (double &v : mean_curve) {
        v /= static_cast<double>(curves.size());
    }

    auto max_deviation = [&](const std::vector<double> &curve) {
        double worst = 0.0;
        for (std::size_t d = 0; d < curve.size(); ++d) {
            worst = std::max(worst, std::abs(curve[d] - mean_curve[d]));
        }
        return worst;
    };
    std::size_t best = 0;
    double best_score = std::abs(max_deviation(curves[0]) - config.target_max_deviation);
    for (std::size_t c = 1; c < curves.size(); ++c) {
        const double score = std::abs(max_deviation(curves[c]) - config.target_max_deviation);
        if (score < best_score) {
            best_score = score;
            best = c;
        }
    }

    data.observations = ObservationSeries(config.n_countries, horizon_days);
    const auto &chosen = candidates[best];
    for (int day = 0; day < horizon_days; ++day) {
        const WorldState &st = chosen[static_cast<std::size_t>(day)];
        for (int i = 0; i < config.n_countries; ++i) {
            data.observations.set(i, day, st.status[static_cast<std::size_t>(i)]);
        }
    }
    return data;
}

} // namespace covpol
