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

// End-to-end acceptance suite. Each criterion prints one PASS/FAIL line;
// the exit code is the number of failed criteria.
//
// By default the suite runs on a bundled synthetic world generated by the
// model itself at the base-run parameters. Point COVPOL_DATA_DIR at a
// directory containing countries.csv and observations.csv to run the
// real-data variants instead.

#include "covpol/calibration.hpp"
#include "covpol/ensemble.hpp"
#include "covpol/experiments.hpp"
#include "covpol/metrics.hpp"
#include "covpol/model.hpp"
#include "covpol/particle_filter.hpp"
#include "covpol/rng.hpp"
#include "covpol/synthetic.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace covpol;
using Clock = std::chrono::steady_clock;

constexpr std::uint64_t kAcceptanceSeed = 20260301;
constexpr int kHorizonDays = 31;

struct CriterionResult {
    bool passed = false;
    std::string details;
};

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string format2(double v) {
    std::ostringstream out;
    out.precision(4);
    out << v;
    return out.str();
}

Dataset acceptance_dataset() {
    if (const char *dir = std::getenv("COVPOL_DATA_DIR"); dir != nullptr) {
        PathsConfig paths;
        paths.countries = (std::filesystem::path(dir) / "countries.csv").string();
        paths.observations = (std::filesystem::path(dir) / "observations.csv").string();
        std::cout << "using real data from " << dir << "\n";
        return Dataset::load(paths);
    }
    return Dataset::from_synthetic(
        generate_synthetic(SyntheticConfig{}, ModelParams{}, kHorizonDays, kAcceptanceSeed));
}

// ---------------------------------------------------------------- criterion 1

CriterionResult base_run_macro_fit(const Dataset &data) {
    const auto start = Clock::now();
    const BaseRunResult result =
        run_base(data, ModelParams{}, 100, kHorizonDays, mix_seed({kAcceptanceSeed, 1}));
    const double elapsed = seconds_since(start);

    CriterionResult out;
    out.passed = result.rho > 0.99 && result.max_abs_deviation <= 0.15 && elapsed < 60.0;
    out.details = "rho=" + format2(result.rho) + " (>0.99), worst-day deviation=" +
                  format2(result.max_abs_deviation) + " (<=0.15), runtime=" + format2(elapsed) +
                  "s (<60s)";
    return out;
}

// ---------------------------------------------------------------- criterion 2

CriterionResult base_run_micro_floor(const Dataset &data) {
    CriterionResult out;
    out.passed = true;
    double worst_floor = 1.0;
    double worst_final = 1.0;
    for (int rep = 0; rep < 5; ++rep) {
        const BaseRunResult result = run_base(data, ModelParams{}, 100, kHorizonDays,
                                              mix_seed({kAcceptanceSeed, 2,
                                                        static_cast<std::uint64_t>(rep)}));
        const auto &micro = result.summary.micro_accuracy_mean;
        const double floor = *std::min_element(micro.begin(), micro.end());
        const double final_day = micro.back();
        worst_floor = std::min(worst_floor, floor);
        worst_final = std::min(worst_final, final_day);
        if (floor < 0.45 || final_day < 0.85) {
            out.passed = false;
        }
    }
    out.details = "5 ensembles: min daily mean accuracy=" + format2(worst_floor) +
                  " (>=0.45), min day-30 accuracy=" + format2(worst_final) + " (>=0.85)";
    return out;
}

// ---------------------------------------------------------------- criterion 3

CriterionResult pf_improvement(const Dataset &data) {
    const auto start = Clock::now();
    FilterConfig filter;
    filter.n_particles = 1000;
    filter.da_window = 5;
    const PfComparisonResult result =
        run_pf_comparison(data, ModelParams{}, filter, kHorizonDays,
                          mix_seed({kAcceptanceSeed, 3}));
    const double elapsed = seconds_since(start);

    CriterionResult out;
    out.passed = result.summed_mse_reduction >= 0.15 && result.best_day_mse_reduction >= 0.50 &&
                 elapsed < 600.0;
    out.details = "summed MSE reduction=" + format2(result.summed_mse_reduction) +
                  " (>=0.15), best-day reduction=" + format2(result.best_day_mse_reduction) +
                  " (>=0.50), runtime=" + format2(elapsed) + "s (<600s)";
    return out;
}

// ---------------------------------------------------------------- criterion 4

CriterionResult particle_count_separation(const Dataset &data) {
    const auto start = Clock::now();
    const std::vector<ParticleSweepRow> rows =
        run_particle_sweep(data, ModelParams{}, 5, {512}, 20, kHorizonDays,
                           mix_seed({kAcceptanceSeed, 4}));
    const double elapsed = seconds_since(start);

    int wins = 0;
    for (const ParticleSweepRow &row : rows) {
        wins += row.summed_mse_pf < row.summed_mse_nopf ? 1 : 0;
    }
    CriterionResult out;
    out.passed = wins >= 18 && elapsed < 1800.0;
    out.details = "512 particles: PF wins " + std::to_string(wins) +
                  "/20 paired trials (>=18), runtime=" + format2(elapsed) + "s (<1800s)";
    return out;
}

// ---------------------------------------------------------------- criterion 5

CriterionResult window_monotonicity(const Dataset &data) {
    const std::vector<int> windows = {0, 15, 10, 5, 2, 1};
    const WindowSweepResult result =
        run_window_sweep(data, ModelParams{}, 1000, windows, kHorizonDays,
                         mix_seed({kAcceptanceSeed, 5}));

    bool monotone = true;
    for (std::size_t i = 1; i < result.rows.size(); ++i) {
        if (result.rows[i].summed_mse > result.rows[i - 1].summed_mse * 1.05) {
            monotone = false;
        }
    }
    const double none = result.rows.front().summed_mse;
    const double daily = result.rows.back().summed_mse;
    const double total_reduction = none > 0.0 ? 1.0 - daily / none : 0.0;

    CriterionResult out;
    out.passed = monotone && total_reduction >= 0.30;
    std::ostringstream mses;
    for (const WindowSweepRow &row : result.rows) {
        mses << " " << format2(row.summed_mse);
    }
    out.details = "summed MSE by window {none,15,10,5,2,1}:" + mses.str() +
                  "; monotone(5% slack)=" + (monotone ? "yes" : "no") +
                  ", total reduction=" + format2(total_reduction) + " (>=0.30)";
    return out;
}

// ---------------------------------------------------------------- criterion 6

bool property_distance_matrix(std::string &err) {
    for (std::uint64_t seed : {61ULL, 62ULL, 63ULL}) {
        SyntheticConfig config;
        config.n_countries = 40;
        config.candidate_runs = 1;
        const SyntheticDataset world = generate_synthetic(config, ModelParams{}, 2, seed);
        const NormalizationContext norm = build_normalization(world.countries);
        const DistanceMatrix m = DistanceMatrix::build(world.countries, norm);
        for (int i = 0; i < m.size(); ++i) {
            if (m(i, i) != 0.0) {
                err = "nonzero diagonal";
                return false;
            }
            for (int j = 0; j < m.size(); ++j) {
                if (m(i, j) != m(j, i) || m(i, j) < 0.0 || m(i, j) > 1.0) {
                    err = "asymmetric or out-of-range entry";
                    return false;
                }
            }
        }
    }
    return true;
}

bool property_monotone_trajectories(const Dataset &data, std::string &err) {
    const ModelContext ctx = ModelContext::build(data.countries, data.norm, ModelParams{});
    const WorldState start = initial_state(data.observations);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        RandomStream rng(mix_seed({kAcceptanceSeed, 6, seed}));
        const auto states = run_trajectory(start, kHorizonDays - 1, ctx, rng);
        for (std::size_t t = 1; t < states.size(); ++t) {
            for (std::size_t i = 0; i < states[t].status.size(); ++i) {
                if (states[t - 1].status[i] > states[t].status[i]) {
                    err = "status reverted";
                    return false;
                }
            }
        }
    }
    return true;
}

bool property_weights_normalised(const Dataset &data, std::string &err) {
    const ModelContext ctx = ModelContext::build(data.countries, data.norm, ModelParams{});
    FilterConfig config;
    config.n_particles = 64;
    config.da_window = 2;
    // Track the weight normalisation through every assimilation event via
    // the unnormalised scores the filter would see.
    RandomStream master(4711);
    std::vector<Particle> particles;
    const WorldState start = initial_state(data.observations);
    for (int i = 0; i < 64; ++i) {
        particles.emplace_back(start, master.next_u64(), 1.0 / 64.0);
    }
    for (int day = 1; day <= 10; ++day) {
        for (Particle &p : particles) {
            step(p.state, ctx, p.rng);
        }
        const auto scores = compute_weight_scores(particles, data.observations.day_slice(day));
        const auto weights = normalize_weights(scores);
        double sum = 0.0;
        for (double w : weights) {
            sum += w;
        }
        if (std::abs(sum - 1.0) >= 1e-12) {
            err = "weight sum off by " + format2(std::abs(sum - 1.0));
            return false;
        }
        assimilate(particles, data.observations.day_slice(day), master);
        double post = 0.0;
        for (const Particle &p : particles) {
            post += p.weight;
        }
        if (std::abs(post - 1.0) >= 1e-12) {
            err = "post-resample weight sum off";
            return false;
        }
    }
    return true;
}

bool property_resample_counts(std::string &err) {
    RandomStream rng(mix_seed({kAcceptanceSeed, 7}));
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 1 + rng.uniform_below(40);
        std::vector<double> weights(n);
        double sum = 0.0;
        for (double &w : weights) {
            w = rng.uniform01() + 1e-9;
            sum += w;
        }
        for (double &w : weights) {
            w /= sum;
        }
        const int n_out = static_cast<int>(1 + rng.uniform_below(64));
        const auto indices = systematic_resample(weights, n_out, rng);
        std::vector<int> counts(n, 0);
        for (int idx : indices) {
            counts[static_cast<std::size_t>(idx)] += 1;
        }
        for (std::size_t i = 0; i < n; ++i) {
            const double expected = n_out * weights[i];
            if (counts[i] < static_cast<int>(std::floor(expected)) ||
                counts[i] > static_cast<int>(std::ceil(expected))) {
                err = "copy count outside floor/ceil bound";
                return false;
            }
        }
    }
    return true;
}

bool property_uniform_scores_noop(const Dataset &data, std::string &err) {
    RandomStream master(4712);
    RandomStream state_rng(4713);
    std::vector<Particle> particles;
    std::map<std::vector<std::uint8_t>, int> before;
    const int n = static_cast<int>(data.countries.size());
    for (int i = 0; i < 50; ++i) {
        WorldState state;
        state.status.resize(static_cast<std::size_t>(n));
        for (auto &cell : state.status) {
            cell = state_rng.uniform01() < 0.3 ? 1 : 0;
        }
        before[state.status] += 1;
        particles.emplace_back(std::move(state), master.next_u64(), 0.02);
    }
    assimilate(particles, data.observations.day_slice(5), master, true);
    std::map<std::vector<std::uint8_t>, int> after;
    for (const Particle &p : particles) {
        after[p.state.status] += 1;
    }
    if (before != after) {
        err = "state multiset changed under uniform scores";
        return false;
    }
    return true;
}

bool property_micro_accuracy_hamming(std::string &err) {
    for (int a = 0; a < 16; ++a) {
        for (int b = 0; b < 16; ++b) {
            std::vector<std::uint8_t> state(4), obs(4);
            int hamming = 0;
            for (int bit = 0; bit < 4; ++bit) {
                state[static_cast<std::size_t>(bit)] = (a >> bit) & 1;
                obs[static_cast<std::size_t>(bit)] = (b >> bit) & 1;
                hamming += ((a >> bit) & 1) != ((b >> bit) & 1) ? 1 : 0;
            }
            if (micro_accuracy(state, obs) != 1.0 - hamming / 4.0) {
                err = "micro accuracy != 1 - hamming/N";
                return false;
            }
        }
    }
    return true;
}

bool property_asocial_bernoulli(std::string &err) {
    ModelContext ctx;
    ctx.params = ModelParams{};
    ctx.params.social_threshold_global = 0.0;
    ctx.distances = DistanceMatrix::from_values(5, std::vector<double>(25, 0.5));
    ctx.thresholds.social = {0.0, 0.0, 0.0, 0.0, 0.0};
    ctx.thresholds.asocial = {0.05, 0.10, 0.20, 0.30, 0.40};

    const int replicates = 10000;
    std::vector<int> adoptions(5, 0);
    RandomStream seeds(mix_seed({kAcceptanceSeed, 8}));
    for (int r = 0; r < replicates; ++r) {
        WorldState state;
        state.status.assign(5, 0);
        RandomStream rng(seeds.next_u64());
        step(state, ctx, rng);
        for (std::size_t i = 0; i < 5; ++i) {
            adoptions[i] += state.status[i];
        }
    }
    for (std::size_t i = 0; i < 5; ++i) {
        const double b = ctx.thresholds.asocial[i];
        const double freq = static_cast<double>(adoptions[i]) / replicates;
        const double sigma = std::sqrt(b * (1.0 - b) / replicates);
        if (std::abs(freq - b) >= 3.0 * sigma + 5e-5) {
            err = "adoption frequency " + format2(freq) + " outside 3-sigma of " + format2(b);
            return false;
        }
    }
    return true;
}

bool property_determinism(std::string &err) {
    const std::filesystem::path dir =
        std::filesystem::temp_directory_path() / "covpol_acceptance_det";
    std::filesystem::remove_all(dir);

    ExperimentConfig gen;
    gen.experiment = ExperimentKind::generate_synthetic;
    gen.synthetic.n_countries = 20;
    gen.synthetic.candidate_runs = 5;
    gen.synthetic.initial_fraction = 0.1;
    gen.horizon_days = 11;
    gen.master_seed = 321;
    gen.paths.countries = (dir / "countries.csv").string();
    gen.paths.observations = (dir / "observations.csv").string();

    ExperimentConfig base;
    base.experiment = ExperimentKind::base_run;
    base.ensemble_size = 10;
    base.horizon_days = 11;
    base.master_seed = 321;
    base.paths = gen.paths;
    base.paths.out_dir = (dir / "out").string();

    auto slurp_all = [&] {
        std::map<std::string, std::string> files;
        for (const char *name :
             {"macro_curve.csv", "micro_curve.csv", "mse_curve.csv", "summary.json"}) {
            std::ifstream in(std::filesystem::path(base.paths.out_dir) / name,
                             std::ios::binary);
            std::ostringstream buffer;
            buffer << in.rdbuf();
            files[name] = buffer.str();
        }
        return files;
    };

    run_experiment(gen);
    run_experiment(base);
    const auto first = slurp_all();
    std::filesystem::remove_all(dir / "out");
    run_experiment(base);
    const auto second = slurp_all();
    std::filesystem::remove_all(dir);

    if (first != second || first.at("macro_curve.csv").empty()) {
        err = "result files differ between identical runs";
        return false;
    }
    return true;
}

CriterionResult property_suite(const Dataset &data) {
    const auto start = Clock::now();
    std::vector<std::pair<std::string, bool>> checks;
    std::string err;

    auto record = [&](const std::string &name, bool ok) {
        checks.emplace_back(name + (ok ? "" : " [" + err + "]"), ok);
        err.clear();
    };

    record("distance-matrix", property_distance_matrix(err));
    record("monotone-trajectories", property_monotone_trajectories(data, err));
    record("weight-normalisation", property_weights_normalised(data, err));
    record("resample-count-bounds", property_resample_counts(err));
    record("uniform-score-noop", property_uniform_scores_noop(data, err));
    record("micro-accuracy-hamming", property_micro_accuracy_hamming(err));
    record("asocial-bernoulli", property_asocial_bernoulli(err));
    record("fixed-seed-determinism", property_determinism(err));

    const double elapsed = seconds_since(start);
    CriterionResult out;
    out.passed = elapsed < 30.0;
    std::ostringstream details;
    for (const auto &[name, ok] : checks) {
        if (!ok) {
            out.passed = false;
            details << " FAILED:" << name;
        }
    }
    out.details = std::to_string(checks.size()) + " properties" + details.str() +
                  ", runtime=" + format2(elapsed) + "s (<30s)";
    return out;
}

// ---------------------------------------------------------------- criterion 7

CriterionResult calibration_self_consistency(const Dataset &data) {
    const auto start = Clock::now();

    // The observations were generated at the base parameters; a reduced grid
    // containing that cell must recover it.
    CalibrationGrid grid;
    grid.b_values = {0.005, 0.01, 0.02};
    grid.s_values = {0.09, 0.13, 0.17};
    grid.p_values = {12, 18, 24};

    const CalibrationResult result =
        grid_search(grid, data.countries, data.norm, data.observations, ModelParams{}, 40,
                    kHorizonDays, mix_seed({kAcceptanceSeed, 9}));
    const double elapsed = seconds_since(start);

    const bool recovered = result.best.asocial_threshold_global == 0.01 &&
                           result.best.social_threshold_global == 0.13 &&
                           result.best.peer_group_size == 18;
    CriterionResult out;
    out.passed = recovered && elapsed < 900.0;
    out.details = "recovered (B=" + format2(result.best.asocial_threshold_global) +
                  ", S=" + format2(result.best.social_threshold_global) +
                  ", p=" + std::to_string(result.best.peer_group_size) +
                  "), generating cell (0.01, 0.13, 18), runtime=" + format2(elapsed) +
                  "s (<900s)";
    return out;
}

} // namespace

int main() {
    std::cout << "covpol acceptance suite\n";
    const Dataset data = acceptance_dataset();
    std::cout << "dataset: " << data.countries.size() << " countries, "
              << data.observations.days() << " days, day-0 fraction "
              << format2(data.observations.fraction_curve().front()) << ", day-30 fraction "
              << format2(data.observations.fraction_curve().back()) << "\n\n";

    struct Criterion {
        int number;
        std::string name;
        std::function<CriterionResult(const Dataset &)> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "base-run macro fit", base_run_macro_fit},
        {2, "base-run micro floor", base_run_micro_floor},
        {3, "particle filter improvement", pf_improvement},
        {4, "particle-count separation", particle_count_separation},
        {5, "window monotonicity", window_monotonicity},
        {6, "property suite", property_suite},
        {7, "calibration self-consistency", calibration_self_consistency},
    };

    int failures = 0;
    for (const Criterion &criterion : criteria) {
        CriterionResult result;
        try {
            result = criterion.run(data);
        } catch (const std::exception &e) {
            result.passed = false;
            result.details = std::string("exception: ") + e.what();
        }
        failures += result.passed ? 0 : 1;
        std::cout << (result.passed ? "[PASS]" : "[FAIL]") << " criterion " << criterion.number
                  << " (" << criterion.name << "): " << result.details << "\n"
                  << std::flush;
    }

    std::cout << "\n" << (failures == 0 ? "all criteria passed" : "criteria failed") << " ("
              << (criteria.size() - static_cast<std::size_t>(failures)) << "/" << criteria.size()
              << ")\n";
    return failures;
}
