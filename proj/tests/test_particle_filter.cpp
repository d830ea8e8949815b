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
#include "covpol/particle_filter.hpp"
#include "covpol/synthetic.hpp"

#include "doctest.h"
#include "test_support.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

using namespace covpol;

TEST_SUITE_BEGIN("particle_filter");

namespace {

Particle make_particle(std::vector<std::uint8_t> status, std::uint64_t seed = 1,
                       double weight = 1.0) {
    WorldState state;
    state.status = std::move(status);
    return Particle(std::move(state), seed, weight);
}

std::vector<int> copy_counts(std::span<const int> indices, std::size_t n_sources) {
    std::vector<int> counts(n_sources, 0);
    for (int idx : indices) {
        counts[static_cast<std::size_t>(idx)] += 1;
    }
    return counts;
}

} // namespace

TEST_CASE("weight scores are the squared fraction of correct countries") {
    const std::vector<std::uint8_t> observed(164, 1);

    std::vector<Particle> particles;
    particles.push_back(make_particle(std::vector<std::uint8_t>(164, 1))); // exact match
    particles.push_back(make_particle(std::vector<std::uint8_t>(164, 0))); // all wrong
    auto partial = std::vector<std::uint8_t>(164, 1);
    for (int i = 0; i < 41; ++i) {
        partial[static_cast<std::size_t>(i)] = 0; // wrong on 41 of 164
    }
    particles.push_back(make_particle(partial));

    const auto scores = compute_weight_scores(particles, observed);
    CHECK(scores[0] == 1.0);
    CHECK(scores[1] == 0.0);
    CHECK(scores[2] == 0.5625); // (1 - 41/164)^2, exact in binary
}

TEST_CASE("normalize_weights") {
    SUBCASE("uniform scores") {
        const std::vector<double> scores = {1.0, 1.0, 1.0, 1.0};
        CHECK(normalize_weights(scores) == std::vector<double>{0.25, 0.25, 0.25, 0.25});
    }
    SUBCASE("all-zero scores fall back to uniform") {
        const std::vector<double> scores = {0.0, 0.0};
        CHECK(normalize_weights(scores) == std::vector<double>{0.5, 0.5});
    }
    SUBCASE("proportional scores") {
        const std::vector<double> scores = {3.0, 1.0};
        CHECK(normalize_weights(scores) == std::vector<double>{0.75, 0.25});
    }
    SUBCASE("sum is one within 1e-12 for random scores") {
        RandomStream rng(300);
        for (int trial = 0; trial < 200; ++trial) {
            std::vector<double> scores(1 + rng.uniform_below(40));
            for (double &s : scores) {
                s = rng.uniform01();
            }
            const auto weights = normalize_weights(scores);
            double sum = 0.0;
            for (double w : weights) {
                sum += w;
            }
            CHECK(std::abs(sum - 1.0) < 1e-12);
        }
    }
    SUBCASE("negative scores are rejected") {
        const std::vector<double> scores = {0.5, -0.1};
        CHECK_THROWS_AS(normalize_weights(scores), ValidationError);
    }
}

TEST_CASE("systematic_resample selects by cumulative weight") {
    SUBCASE("degenerate mass picks a single source") {
        RandomStream rng(301);
        const std::vector<double> weights = {1.0, 0.0, 0.0};
        const auto indices = systematic_resample(weights, 7, rng);
        for (int idx : indices) {
            CHECK(idx == 0);
        }
    }
    SUBCASE("uniform weights select every particle exactly once") {
        RandomStream rng(302);
        const std::vector<double> weights(10, 0.1);
        for (int trial = 0; trial < 20; ++trial) {
            const auto indices = systematic_resample(weights, 10, rng);
            for (int i = 0; i < 10; ++i) {
                CHECK(indices[static_cast<std::size_t>(i)] == i);
            }
        }
    }
    SUBCASE("integral expected counts are exact for every offset") {
        const std::vector<double> weights = {0.7, 0.3};
        RandomStream rng(303);
        for (int trial = 0; trial < 50; ++trial) {
            const auto counts = copy_counts(systematic_resample(weights, 10, rng), 2);
            CHECK(counts[0] == 7);
            CHECK(counts[1] == 3);
        }
    }
    SUBCASE("copy counts stay within floor/ceil of n*w over random weight vectors") {
        RandomStream rng(304);
        for (int trial = 0; trial < 1000; ++trial) {
            const std::size_t n = 1 + rng.uniform_below(30);
            std::vector<double> weights(n);
            double sum = 0.0;
            for (double &w : weights) {
                w = rng.uniform01() + 1e-9;
                sum += w;
            }
            for (double &w : weights) {
                w /= sum;
            }
            const int n_out = static_cast<int>(1 + rng.uniform_below(50));
            const auto counts = copy_counts(systematic_resample(weights, n_out, rng), n);
            for (std::size_t i = 0; i < n; ++i) {
                const double expected = n_out * weights[i];
                CHECK(counts[i] >= static_cast<int>(std::floor(expected)));
                CHECK(counts[i] <= static_cast<int>(std::ceil(expected)));
            }
        }
    }
}

TEST_CASE("assimilate resamples, reseeds and resets weights") {
    const std::vector<std::uint8_t> observed = {1, 1, 0, 0};

    SUBCASE("identical particles survive unchanged up to reseeding") {
        std::vector<Particle> particles;
        for (int i = 0; i < 6; ++i) {
            particles.push_back(make_particle({1, 1, 0, 0}, 100 + i, 1.0 / 6.0));
        }
        RandomStream master(305);
        assimilate(particles, observed, master);
        REQUIRE(particles.size() == 6);
        std::vector<std::uint64_t> seeds;
        for (const Particle &p : particles) {
            CHECK(p.state.status == std::vector<std::uint8_t>{1, 1, 0, 0});
            CHECK(p.weight == doctest::Approx(1.0 / 6.0));
            seeds.push_back(p.stream_seed);
        }
        std::sort(seeds.begin(), seeds.end());
        CHECK(std::adjacent_find(seeds.begin(), seeds.end()) == seeds.end()); // distinct
    }
    SUBCASE("a single perfect particle takes over a hopeless population") {
        std::vector<Particle> particles;
        particles.push_back(make_particle({0, 0, 1, 1})); // complement: score 0
        particles.push_back(make_particle({1, 1, 0, 0})); // perfect: score 1
        particles.push_back(make_particle({0, 0, 1, 1}));
        RandomStream master(306);
        assimilate(particles, observed, master);
        for (const Particle &p : particles) {
            CHECK(p.state.status == std::vector<std::uint8_t>{1, 1, 0, 0});
        }
    }
    SUBCASE("copy counts follow the squared-correctness weights") {
        // Accuracies 0.9 and 0.3 on a 10-country world: scores 0.81 and
        // 0.09, weights 0.9 and 0.1. With two outputs, particle 0 gets one
        // or two copies; two copies in 80% of offsets.
        const std::vector<std::uint8_t> obs10(10, 1);
        auto good = std::vector<std::uint8_t>(10, 1);
        good[0] = 0;
        auto poor = std::vector<std::uint8_t>(10, 0);
        poor[0] = 1;
        poor[1] = 1;
        poor[2] = 1;

        RandomStream master(307);
        int takeovers = 0;
        const int trials = 2000;
        for (int t = 0; t < trials; ++t) {
            std::vector<Particle> particles;
            particles.push_back(make_particle(good));
            particles.push_back(make_particle(poor));
            assimilate(particles, obs10, master);
            int copies_of_good = 0;
            for (const Particle &p : particles) {
                copies_of_good += p.state.status == good ? 1 : 0;
            }
            CHECK(copies_of_good >= 1); // floor(2 * 0.9)
            CHECK(copies_of_good <= 2); // ceil(2 * 0.9)
            takeovers += copies_of_good == 2 ? 1 : 0;
        }
        const double freq = static_cast<double>(takeovers) / trials;
        const double sigma = std::sqrt(0.8 * 0.2 / trials);
        CHECK(std::abs(freq - 0.8) < 3.0 * sigma);
    }
    SUBCASE("resampling never invents states") {
        RandomStream state_rng(308);
        RandomStream master(309);
        std::vector<Particle> particles;
        std::vector<std::vector<std::uint8_t>> pre_states;
        for (int i = 0; i < 12; ++i) {
            std::vector<std::uint8_t> status(4);
            for (auto &cell : status) {
                cell = state_rng.uniform01() < 0.5 ? 1 : 0;
            }
            pre_states.push_back(status);
            particles.push_back(make_particle(status, 400 + i, 1.0 / 12.0));
        }
        assimilate(particles, observed, master);
        for (const Particle &p : particles) {
            CHECK(std::count(pre_states.begin(), pre_states.end(), p.state.status) > 0);
        }
    }
    SUBCASE("uniform scores preserve the state multiset") {
        RandomStream state_rng(310);
        RandomStream master(311);
        std::vector<Particle> particles;
        std::map<std::vector<std::uint8_t>, int> before;
        for (int i = 0; i < 20; ++i) {
            std::vector<std::uint8_t> status(4);
            for (auto &cell : status) {
                cell = state_rng.uniform01() < 0.5 ? 1 : 0;
            }
            before[status] += 1;
            particles.push_back(make_particle(status, 500 + i, 0.05));
        }
        assimilate(particles, observed, master, /*force_uniform_scores=*/true);
        std::map<std::vector<std::uint8_t>, int> after;
        for (const Particle &p : particles) {
            after[p.state.status] += 1;
        }
        CHECK(before == after);
    }
}

namespace {

SyntheticDataset small_world(int n = 24, std::uint64_t seed = 777, int days = 16) {
    SyntheticConfig config;
    config.n_countries = n;
    config.initial_fraction = 0.1;
    config.candidate_runs = 5;
    return generate_synthetic(config, ModelParams{}, days, seed);
}

} // namespace

TEST_CASE("run_filter schedules assimilation at multiples of the window") {
    const SyntheticDataset data = small_world(24, 778, 31);
    const NormalizationContext norm = build_normalization(data.countries);
    const ModelContext ctx = ModelContext::build(data.countries, norm, ModelParams{});

    SUBCASE("window 5 over 30 steps assimilates six times") {
        FilterConfig config{.n_particles = 8, .da_window = 5};
        const FilterRunResult result = run_filter(config, ctx, data.observations, 30, 42);
        std::vector<int> days;
        for (const auto &event : result.assimilations) {
            days.push_back(event.day);
        }
        CHECK(days == std::vector<int>{5, 10, 15, 20, 25, 30});
    }
    SUBCASE("window 15 over 30 steps assimilates twice") {
        FilterConfig config{.n_particles = 8, .da_window = 15};
        const FilterRunResult result = run_filter(config, ctx, data.observations, 30, 42);
        std::vector<int> days;
        for (const auto &event : result.assimilations) {
            days.push_back(event.day);
        }
        CHECK(days == std::vector<int>{15, 30});
    }
    SUBCASE("window beyond the horizon never assimilates") {
        FilterConfig config{.n_particles = 8, .da_window = 31};
        const FilterRunResult result = run_filter(config, ctx, data.observations, 30, 42);
        CHECK(result.assimilations.empty());
    }
    SUBCASE("zero steps records only day zero") {
        FilterConfig config{.n_particles = 8, .da_window = 1};
        const FilterRunResult result = run_filter(config, ctx, data.observations, 0, 42);
        CHECK(result.assimilations.empty());
        REQUIRE(result.macro_fractions.size() == 1);
        for (double f : result.macro_fractions[0]) {
            CHECK(f == doctest::Approx(macro_fraction(initial_state(data.observations))));
        }
    }
}

TEST_CASE("run_filter without assimilation events reproduces the plain ensemble") {
    const SyntheticDataset data = small_world();
    const NormalizationContext norm = build_normalization(data.countries);
    const ModelContext ctx = ModelContext::build(data.countries, norm, ModelParams{});

    const int n_steps = 15;
    FilterConfig config{.n_particles = 16, .da_window = n_steps + 1};
    const FilterRunResult filtered =
        run_filter(config, ctx, data.observations, n_steps, 4242);
    const EnsembleTraces ensemble =
        run_ensemble(ctx, data.observations, 16, n_steps, 4242);

    for (int day = 0; day <= n_steps; ++day) {
        for (int p = 0; p < 16; ++p) {
            CHECK(filtered.macro_fractions[static_cast<std::size_t>(day)]
                                          [static_cast<std::size_t>(p)] ==
                  ensemble.fractions[static_cast<std::size_t>(p)]
                                    [static_cast<std::size_t>(day)]);
        }
    }
}

TEST_CASE("run_filter is deterministic in the master seed and validates inputs") {
    const SyntheticDataset data = small_world();
    const NormalizationContext norm = build_normalization(data.countries);
    const ModelContext ctx = ModelContext::build(data.countries, norm, ModelParams{});

    SUBCASE("same seed, same result") {
        FilterConfig config{.n_particles = 12, .da_window = 3};
        const FilterRunResult a = run_filter(config, ctx, data.observations, 12, 99);
        const FilterRunResult b = run_filter(config, ctx, data.observations, 12, 99);
        CHECK(a.macro_fractions == b.macro_fractions);
        CHECK(a.micro_accuracies == b.micro_accuracies);
        REQUIRE(a.assimilations.size() == b.assimilations.size());
        for (std::size_t i = 0; i < a.assimilations.size(); ++i) {
            CHECK(a.assimilations[i].weight_entropy == b.assimilations[i].weight_entropy);
            CHECK(a.assimilations[i].max_weight == b.assimilations[i].max_weight);
        }
    }
    SUBCASE("observation series shorter than the horizon is an error") {
        FilterConfig config{.n_particles = 4, .da_window = 3};
        CHECK_THROWS_WITH_AS(run_filter(config, ctx, data.observations, 16, 1),
                             doctest::Contains("shorter"), ValidationError);
    }
    SUBCASE("config invariants") {
        FilterConfig config{.n_particles = 0, .da_window = 3};
        CHECK_THROWS_AS(config.validate(), ValidationError);
        config = FilterConfig{.n_particles = 4, .da_window = 0};
        CHECK_THROWS_AS(config.validate(), ValidationError);
    }
}

TEST_CASE("weights stay normalised through repeated assimilation") {
    const SyntheticDataset data = small_world();
    const NormalizationContext norm = build_normalization(data.countries);
    const ModelContext ctx = ModelContext::build(data.countries, norm, ModelParams{});

    FilterConfig config{.n_particles = 32, .da_window = 2};
    const FilterRunResult result = run_filter(config, ctx, data.observations, 14, 1001);
    CHECK(result.assimilations.size() == 7);
    for (const auto &event : result.assimilations) {
        // max weight is a valid probability and entropy is bounded by ln(n)
        CHECK(event.max_weight > 0.0);
        CHECK(event.max_weight <= 1.0 + 1e-12);
        CHECK(event.weight_entropy >= -1e-12);
        CHECK(event.weight_entropy <= std::log(32.0) + 1e-12);
    }
}

TEST_SUITE_END();
