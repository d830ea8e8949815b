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
#include "covpol/synthetic.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace covpol;

struct World {
    SyntheticDataset data;
    NormalizationContext norm;
    ModelContext ctx;
    WorldState start;

    explicit World(int n_countries) {
        SyntheticConfig config;
        config.n_countries = n_countries;
        config.candidate_runs = 1;
        data = generate_synthetic(config, ModelParams{}, 31, 99);
        norm = build_normalization(data.countries);
        ctx = ModelContext::build(data.countries, norm, ModelParams{});
        start = initial_state(data.observations);
    }
};

const World &world164() {
    static const World world(164);
    return world;
}

void BM_DistanceMatrixBuild(benchmark::State &state) {
    const World &world = world164();
    for (auto _ : state) {
        benchmark::DoNotOptimize(DistanceMatrix::build(world.data.countries, world.norm));
    }
}
BENCHMARK(BM_DistanceMatrixBuild);

void BM_ModelStep(benchmark::State &state) {
    const World &world = world164();
    RandomStream rng(512);
    for (auto _ : state) {
        WorldState s = world.start;
        step(s, world.ctx, rng);
        benchmark::DoNotOptimize(s);
    }
}
BENCHMARK(BM_ModelStep);

void BM_Trajectory30Days(benchmark::State &state) {
    const World &world = world164();
    RandomStream rng(513);
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_trajectory(world.start, 30, world.ctx, rng));
    }
}
BENCHMARK(BM_Trajectory30Days);

} // namespace
