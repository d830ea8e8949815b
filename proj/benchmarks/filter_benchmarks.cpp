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
#include "covpol/synthetic.hpp"

#include <benchmark/benchmark.h>

#include <vector>

namespace {

using namespace covpol;

void BM_SystematicResample(benchmark::State &state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    RandomStream rng(77);
    std::vector<double> weights(n);
    double sum = 0.0;
    for (double &w : weights) {
        w = rng.uniform01() + 1e-9;
        sum += w;
    }
    for (double &w : weights) {
        w /= sum;
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(systematic_resample(weights, static_cast<int>(n), rng));
    }
}
BENCHMARK(BM_SystematicResample)->Arg(1000)->Arg(4096);

void BM_FilterRun(benchmark::State &state) {
    SyntheticConfig config;
    config.n_countries = 164;
    config.candidate_runs = 1;
    static const SyntheticDataset data = generate_synthetic(config, ModelParams{}, 31, 101);
    static const NormalizationContext norm = build_normalization(data.countries);
    static const ModelContext ctx = ModelContext::build(data.countries, norm, ModelParams{});

    FilterConfig filter;
    filter.n_particles = static_cast<int>(state.range(0));
    filter.da_window = 5;
    std::uint64_t seed = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_filter(filter, ctx, data.observations, 30, ++seed));
    }
}
BENCHMARK(BM_FilterRun)->Unit(benchmark::kMillisecond)->Arg(64)->Arg(256);

} // namespace
