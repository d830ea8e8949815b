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

#include "covpol/experiments.hpp"

#include "covpol/ensemble.hpp"
#include "covpol/errors.hpp"
#include "covpol/results_io.hpp"
#include "covpol/rng.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numeric>
#include <sstream>

namespace covpol {

using nlohmann::json;

std::string to_string(ExperimentKind kind) {
    switch (kind) {
    case ExperimentKind::base_run:
        return "base_run";
    case ExperimentKind::pf_vs_ensemble:
        return "pf_vs_ensemble";
    case ExperimentKind::particle_count_sweep:
        return "particle_count_sweep";
    case ExperimentKind::da_window_sweep:
        return "da_window_sweep";
    case ExperimentKind::calibrate:
        return "calibrate";
    case ExperimentKind::generate_synthetic:
        return "generate_synthetic";
    }
    throw ValidationError("unknown experiment kind");
}

ExperimentKind experiment_kind_from_string(const std::string &name) {
    if (name == "base_run") {
        return ExperimentKind::base_run;
    }
    if (name == "pf_vs_ensemble") {
        return ExperimentKind::pf_vs_ensemble;
    }
    if (name == "particle_count_sweep") {
        return ExperimentKind::particle_count_sweep;
    }
    if (name == "da_window_sweep") {
        return ExperimentKind::da_window_sweep;
    }
    if (name == "calibrate") {
        return ExperimentKind::calibrate;
    }
    if (name == "generate_synthetic") {
        return ExperimentKind::generate_synthetic;
    }
    throw ValidationError("unknown experiment '" + name + "'");
}

void ExperimentConfig::validate() const {
    model.validate();
    filter.validate();
    synthetic.validate();
    if (ensemble_size < 1) {
        throw ValidationError("ensemble_size must be >= 1");
    }
    if (horizon_days < 1) {
        throw ValidationError("horizon_days must be >= 1");
    }
    if (trials < 1) {
        throw ValidationError("trials must be >= 1");
    }
    if (particle_counts.empty()) {
        throw ValidationError("particle_counts must not be empty");
    }
    for (int count : particle_counts) {
        if (count < 1) {
            throw ValidationError("particle_counts entries must be >= 1");
        }
    }
    if (da_windows.empty()) {
        throw ValidationError("da_windows must not be empty");
    }
    for (int window : da_windows) {
        if (window < 0) {
            throw ValidationError("da_windows entries must be >= 0 (0 = no filtering)");
        }
    }
    if (threads < 0) {
        throw ValidationError("threads must be >= 0 (0 = auto)");
    }
    if (calibration.b_grid.empty() || calibration.s_grid.empty() ||
        calibration.p_grid.empty()) {
        throw ValidationError("calibration grids must not be empty");
    }
    if (calibration.ensemble_size < 2) {
        throw ValidationError("calibration.ensemble_size must be >= 2");
    }
}

namespace {

void require_keys(const json &object, const char *scope,
                  std::initializer_list<const char *> known) {
    for (const auto &item : object.items()) {
        const bool ok = std::any_of(known.begin(), known.end(), [&](const char *key) {
            return item.key() == key;
        });
        if (!ok) {
            throw ValidationError(std::string("config: unknown key '") + item.key() + "' in " +
                                  scope);
        }
    }
}

template <typename T> void read_field(const json &object, const char *key, T &out) {
    if (object.contains(key)) {
        try {
            out = object.at(key).get<T>();
        } catch (const json::exception &) {
            throw ValidationError(std::string("config: bad value for '") + key + "'");
        }
    }
}

} // namespace

ExperimentConfig parse_config(const std::string &json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error &err) {
        throw ValidationError(std::string("config: invalid JSON: ") + err.what());
    }
    if (!root.is_object()) {
        throw ValidationError("config: top level must be a JSON object");
    }

    require_keys(root, "top level",
                 {"experiment", "model", "filter", "ensemble_size", "horizon_days",
                  "master_seed", "trials", "particle_counts", "da_windows", "threads",
                  "synthetic", "calibration", "paths"});

    ExperimentConfig config;

    if (root.contains("experiment")) {
        if (!root.at("experiment").is_string()) {
            throw ValidationError("config: 'experiment' must be a string");
        }
        config.experiment = experiment_kind_from_string(root.at("experiment").get<std::string>());
    }

    if (root.contains("model")) {
        const json &model = root.at("model");
        require_keys(model, "'model'",
                     {"social_threshold_global", "asocial_threshold_global", "peer_group_size",
                      "pressure_steepness", "synchronous_update"});
        read_field(model, "social_threshold_global", config.model.social_threshold_global);
        read_field(model, "asocial_threshold_global", config.model.asocial_threshold_global);
        read_field(model, "peer_group_size", config.model.peer_group_size);
        read_field(model, "pressure_steepness", config.model.pressure_steepness);
        read_field(model, "synchronous_update", config.model.synchronous_update);
    }

    if (root.contains("filter")) {
        const json &filter = root.at("filter");
        require_keys(filter, "'filter'", {"n_particles", "da_window", "force_uniform_scores"});
        read_field(filter, "n_particles", config.filter.n_particles);
        read_field(filter, "da_window", config.filter.da_window);
        read_field(filter, "force_uniform_scores", config.filter.force_uniform_scores);
    }

    read_field(root, "ensemble_size", config.ensemble_size);
    read_field(root, "horizon_days", config.horizon_days);
    read_field(root, "master_seed", config.master_seed);
    read_field(root, "trials", config.trials);
    read_field(root, "particle_counts", config.particle_counts);
    read_field(root, "da_windows", config.da_windows);
    read_field(root, "threads", config.threads);

    if (root.contains("synthetic")) {
        const json &synthetic = root.at("synthetic");
        require_keys(synthetic, "'synthetic'",
                     {"n_countries", "initial_fraction", "candidate_runs",
                      "target_max_deviation", "n_blocs", "bloc_spread_deg", "attribute_mixing",
                      "income_log_mean", "income_log_sd", "density_log_mean",
                      "density_log_sd"});
        read_field(synthetic, "n_countries", config.synthetic.n_countries);
        read_field(synthetic, "initial_fraction", config.synthetic.initial_fraction);
        read_field(synthetic, "candidate_runs", config.synthetic.candidate_runs);
        read_field(synthetic, "target_max_deviation", config.synthetic.target_max_deviation);
        read_field(synthetic, "n_blocs", config.synthetic.n_blocs);
        read_field(synthetic, "bloc_spread_deg", config.synthetic.bloc_spread_deg);
        read_field(synthetic, "attribute_mixing", config.synthetic.attribute_mixing);
        read_field(synthetic, "income_log_mean", config.synthetic.income_log_mean);
        read_field(synthetic, "income_log_sd", config.synthetic.income_log_sd);
        read_field(synthetic, "density_log_mean", config.synthetic.density_log_mean);
        read_field(synthetic, "density_log_sd", config.synthetic.density_log_sd);
    }

    if (root.contains("calibration")) {
        const json &calibration = root.at("calibration");
        require_keys(calibration, "'calibration'",
                     {"b_grid", "s_grid", "p_grid", "ensemble_size"});
        read_field(calibration, "b_grid", config.calibration.b_grid);
        read_field(calibration, "s_grid", config.calibration.s_grid);
        read_field(calibration, "p_grid", config.calibration.p_grid);
        read_field(calibration, "ensemble_size", config.calibration.ensemble_size);
    }

    if (root.contains("paths")) {
        const json &paths = root.at("paths");
        require_keys(paths, "'paths'", {"countries", "observations", "out_dir"});
        read_field(paths, "countries", config.paths.countries);
        read_field(paths, "observations", config.paths.observations);
        read_field(paths, "out_dir", config.paths.out_dir);
    }

    config.validate();
    return config;
}

ExperimentConfig load_config(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open config file: " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

std::string canonical_config_json(const ExperimentConfig &config) {
    // Covers the run-defining fields only: paths and thread counts do not
    // change results, so they stay out of the provenance hash.
    json root;
    root["experiment"] = to_string(config.experiment);
    root["model"] = {{"social_threshold_global", config.model.social_threshold_global},
                     {"asocial_threshold_global", config.model.asocial_threshold_global},
                     {"peer_group_size", config.model.peer_group_size},
                     {"pressure_steepness", config.model.pressure_steepness},
                     {"synchronous_update", config.model.synchronous_update}};
    root["filter"] = {{"n_particles", config.filter.n_particles},
                      {"da_window", config.filter.da_window},
                      {"force_uniform_scores", config.filter.force_uniform_scores}};
    root["ensemble_size"] = config.ensemble_size;
    root["horizon_days"] = config.horizon_days;
    root["master_seed"] = config.master_seed;
    root["trials"] = config.trials;
    root["particle_counts"] = config.particle_counts;
    root["da_windows"] = config.da_windows;
    root["synthetic"] = {{"n_countries", config.synthetic.n_countries},
                         {"initial_fraction", config.synthetic.initial_fraction},
                         {"candidate_runs", config.synthetic.candidate_runs},
                         {"target_max_deviation", config.synthetic.target_max_deviation},
                         {"income_log_mean", config.synthetic.income_log_mean},
                         {"income_log_sd", config.synthetic.income_log_sd},
                         {"density_log_mean", config.synthetic.density_log_mean},
                         {"density_log_sd", config.synthetic.density_log_sd}};
    root["calibration"] = {{"b_grid", config.calibration.b_grid},
                           {"s_grid", config.calibration.s_grid},
                           {"p_grid", config.calibration.p_grid},
                           {"ensemble_size", config.calibration.ensemble_size}};
    return root.dump();
}

std::uint64_t config_hash(const ExperimentConfig &config) {
    const std::string text = canonical_config_json(config);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : text) {
        h ^= static_cast<std::uint64_t>(static_cast<unsigned char>(c));
        h *= 0x100000001b3ULL;
    }
    return h;
}

Dataset Dataset::load(const PathsConfig &paths) {
    if (paths.countries.empty() || paths.observations.empty()) {
        throw ValidationError("paths.countries and paths.observations are required");
    }
    Dataset data;
    data.countries = load_countries(paths.countries);
    data.norm = build_normalization(data.countries);
    data.observations = load_observations(paths.observations, data.countries);
    return data;
}

Dataset Dataset::from_synthetic(SyntheticDataset synthetic) {
    Dataset data;
    data.countries = std::move(synthetic.countries);
    data.norm = build_normalization(data.countries);
    data.observations = std::move(synthetic.observations);
    return data;
}

namespace {

std::vector<double> observed_curve(const Dataset &data, int horizon_days) {
    std::vector<double> observed = data.observations.fraction_curve();
    if (static_cast<int>(observed.size()) < horizon_days) {
        throw ValidationError("observation series shorter than horizon");
    }
    observed.resize(static_cast<std::size_t>(horizon_days));
    return observed;
}

double max_abs_deviation(std::span<const double> a, std::span<const double> b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        worst = std::max(worst, std::abs(a[i] - b[i]));
    }
    return worst;
}

EnsembleSummary summarize_filter_result(const FilterRunResult &result) {
    // FilterRunResult is day-major; summarize_ensemble wants run-major.
    const std::size_t n_days = result.macro_fractions.size();
    const std::size_t n_particles = result.macro_fractions.front().size();
    std::vector<std::vector<double>> fractions(n_particles, std::vector<double>(n_days));
    std::vector<std::vector<double>> accuracies(n_particles, std::vector<double>(n_days));
    for (std::size_t d = 0; d < n_days; ++d) {
        for (std::size_t p = 0; p < n_particles; ++p) {
            fractions[p][d] = result.macro_fractions[d][p];
            accuracies[p][d] = result.micro_accuracies[d][p];
        }
    }
    return summarize_ensemble(fractions, accuracies);
}

} // namespace

BaseRunResult run_base(const Dataset &data, const ModelParams &params, int ensemble_size,
                       int horizon_days, std::uint64_t master_seed, int threads) {
    if (ensemble_size < 2) {
        throw ValidationError("run_base: ensemble_size must be >= 2 for summary statistics");
    }
    const ModelContext ctx = ModelContext::build(data.countries, data.norm, params);
    const EnsembleTraces traces =
        run_ensemble(ctx, data.observations, ensemble_size, horizon_days - 1, master_seed,
                     threads);

    BaseRunResult result;
    result.summary = summarize_ensemble(traces.fractions, traces.accuracies);
    result.observed_fractions = observed_curve(data, horizon_days);
    result.mse = mse_curve(result.summary.mean_fraction, result.observed_fractions);
    result.summed_mse_total = summed_mse(result.mse);
    result.rho = pearson_correlation(result.summary.mean_fraction, result.observed_fractions);
    result.max_abs_deviation =
        max_abs_deviation(result.summary.mean_fraction, result.observed_fractions);
    return result;
}

PfComparisonResult run_pf_comparison(const Dataset &data, const ModelParams &params,
                                     const FilterConfig &filter, int horizon_days,
                                     std::uint64_t master_seed, int threads) {
    const ModelContext ctx = ModelContext::build(data.countries, data.norm, params);
    const int n_steps = horizon_days - 1;

    // Independent seed families for the two arms.
    const std::uint64_t base_seed = mix_seed({master_seed, seed_tag("base-arm")});
    const std::uint64_t filter_seed = mix_seed({master_seed, seed_tag("filter-arm")});

    const EnsembleTraces base_traces =
        run_ensemble(ctx, data.observations, filter.n_particles, n_steps, base_seed, threads);
    const FilterRunResult filtered =
        run_filter(filter, ctx, data.observations, n_steps, filter_seed, threads);

    PfComparisonResult result;
    result.base_summary = summarize_ensemble(base_traces.fractions, base_traces.accuracies);
    result.pf_summary = summarize_filter_result(filtered);
    result.observed_fractions = observed_curve(data, horizon_days);
    result.mse_base = mse_curve(result.base_summary.mean_fraction, result.observed_fractions);
    result.mse_pf = mse_curve(result.pf_summary.mean_fraction, result.observed_fractions);
    result.summed_mse_base = summed_mse(result.mse_base);
    result.summed_mse_pf = summed_mse(result.mse_pf);
    result.summed_mse_reduction =
        result.summed_mse_base > 0.0 ? 1.0 - result.summed_mse_pf / result.summed_mse_base : 0.0;

    result.ratio_per_day.assign(result.mse_base.size(),
                                std::numeric_limits<double>::quiet_NaN());
    result.best_day_mse_reduction = 0.0;
    for (std::size_t d = 0; d < result.mse_base.size(); ++d) {
        if (result.mse_base[d] > 0.0) {
            result.ratio_per_day[d] = result.mse_pf[d] / result.mse_base[d];
            result.best_day_mse_reduction =
                std::max(result.best_day_mse_reduction, 1.0 - result.ratio_per_day[d]);
        }
    }
    result.assimilations = filtered.assimilations;
    return result;
}

std::vector<ParticleSweepRow> run_particle_sweep(const Dataset &data, const ModelParams &params,
                                                 int da_window,
                                                 const std::vector<int> &particle_counts,
                                                 int trials, int horizon_days,
                                                 std::uint64_t master_seed, int threads) {
    if (trials < 1) {
        throw ValidationError("run_particle_sweep: trials must be >= 1");
    }
    const ModelContext ctx = ModelContext::build(data.countries, data.norm, params);
    const int n_steps = horizon_days - 1;
    const std::vector<double> observed = observed_curve(data, horizon_days);

    // Single repetitions from 1024 particles upwards; the distributions are
    // already well separated there.
    constexpr int kSingleTrialThreshold = 1024;

    std::vector<ParticleSweepRow> rows;
    for (int count : particle_counts) {
        const int cell_trials = count >= kSingleTrialThreshold ? 1 : trials;
        for (int trial = 0; trial < cell_trials; ++trial) {
            ParticleSweepRow row;
            row.n_particles = count;
            row.trial = trial;
            row.seed = mix_seed({master_seed, seed_tag("particle_count_sweep"),
                                 static_cast<std::uint64_t>(count),
                                 static_cast<std::uint64_t>(trial)});

            FilterConfig filter;
            filter.n_particles = count;
            filter.da_window = da_window;
            const FilterRunResult filtered =
                run_filter(filter, ctx, data.observations, n_steps,
                           mix_seed({row.seed, seed_tag("pf")}), threads);
            row.summed_mse_pf = summed_mse(mse_curve(filtered.mean_macro(), observed));

            const EnsembleTraces base =
                run_ensemble(ctx, data.observations, count, n_steps,
                             mix_seed({row.seed, seed_tag("nopf")}), threads);
            row.summed_mse_nopf = summed_mse(mse_curve(base.mean_fractions(), observed));

            rows.push_back(row);
        }
    }
    return rows;
}

WindowSweepResult run_window_sweep(const Dataset &data, const ModelParams &params,
                                   int n_particles, const std::vector<int> &windows,
                                   int horizon_days, std::uint64_t master_seed, int threads) {
    const ModelContext ctx = ModelContext::build(data.countries, data.norm, params);
    const int n_steps = horizon_days - 1;
    const std::vector<double> observed = observed_curve(data, horizon_days);

    WindowSweepResult result;
    for (int window : windows) {
        WindowSweepRow row;
        row.window = window;
        row.n_events = window > 0 ? n_steps / window : 0;

        FilterConfig filter;
        filter.n_particles = n_particles;
        // window 0 means no filtering: schedule the first event past the end.
        filter.da_window = window > 0 ? window : n_steps + 1;
        const std::uint64_t seed = mix_seed({master_seed, seed_tag("da_window_sweep"),
                                             static_cast<std::uint64_t>(window)});
        const FilterRunResult filtered =
            run_filter(filter, ctx, data.observations, n_steps, seed, threads);

        row.summed_mse = summed_mse(mse_curve(filtered.mean_macro(), observed));
        const std::vector<double> micro = filtered.mean_micro();
        row.mean_micro_accuracy =
            std::accumulate(micro.begin(), micro.end(), 0.0) / static_cast<double>(micro.size());
        result.rows.push_back(row);
    }

    // Least-squares slope of summed MSE against the number of events.
    const double n = static_cast<double>(result.rows.size());
    double mean_x = 0.0;
    double mean_y = 0.0;
    for (const WindowSweepRow &row : result.rows) {
        mean_x += row.n_events;
        mean_y += row.summed_mse;
    }
    mean_x /= n;
    mean_y /= n;
    double sxy = 0.0;
    double sxx = 0.0;
    for (const WindowSweepRow &row : result.rows) {
        sxy += (row.n_events - mean_x) * (row.summed_mse - mean_y);
        sxx += (row.n_events - mean_x) * (row.n_events - mean_x);
    }
    result.mse_slope_per_event = sxx > 0.0 ? sxy / sxx : 0.0;
    return result;
}

namespace {

std::string hash_hex(std::uint64_t value) {
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << value;
    return out.str();
}

json summary_base(const ExperimentConfig &config) {
    json out;
    out["experiment"] = to_string(config.experiment);
    out["config_hash"] = hash_hex(config_hash(config));
    out["master_seed"] = config.master_seed;
    return out;
}

void write_summary_json(const std::filesystem::path &path, const json &summary) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write file: " + path.string());
    }
    out << summary.dump(2) << "\n";
    if (!out) {
        throw IoError("write failed: " + path.string());
    }
}

std::filesystem::path require_out_dir(const ExperimentConfig &config) {
    if (config.paths.out_dir.empty()) {
        throw ValidationError("paths.out_dir is required for this experiment");
    }
    std::filesystem::path dir(config.paths.out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw IoError("cannot create output directory: " + dir.string());
    }
    return dir;
}

} // namespace

void run_experiment(const ExperimentConfig &config) {
    config.validate();
    const ProvenanceHeader header{config_hash(config), config.master_seed};

    if (config.experiment == ExperimentKind::generate_synthetic) {
        if (config.paths.countries.empty() || config.paths.observations.empty()) {
            throw ValidationError(
                "generate_synthetic requires paths.countries and paths.observations");
        }
        const SyntheticDataset data = generate_synthetic(config.synthetic, config.model,
                                                         config.horizon_days,
                                                         config.master_seed);
        write_countries_csv(config.paths.countries, data.countries);
        write_observations_csv(config.paths.observations, data.countries, data.observations);
        return;
    }

    const Dataset data = Dataset::load(config.paths);
    const std::filesystem::path out_dir = require_out_dir(config);

    switch (config.experiment) {
    case ExperimentKind::base_run: {
        const BaseRunResult result =
            run_base(data, config.model, config.ensemble_size, config.horizon_days,
                     config.master_seed, config.threads);
        write_macro_curve_csv(out_dir / "macro_curve.csv", header, result.summary,
                              result.observed_fractions);
        write_micro_curve_csv(out_dir / "micro_curve.csv", header, result.summary);
        write_mse_curve_csv(out_dir / "mse_curve.csv", header, result.mse, {});
        json summary = summary_base(config);
        summary["rho"] = result.rho;
        summary["summed_mse"] = result.summed_mse_total;
        summary["max_abs_deviation"] = result.max_abs_deviation;
        summary["ensemble_size"] = config.ensemble_size;
        write_summary_json(out_dir / "summary.json", summary);
        break;
    }
    case ExperimentKind::pf_vs_ensemble: {
        const PfComparisonResult result =
            run_pf_comparison(data, config.model, config.filter, config.horizon_days,
                              config.master_seed, config.threads);
        write_macro_curve_csv(out_dir / "macro_curve.csv", header, result.pf_summary,
                              result.observed_fractions);
        write_micro_curve_csv(out_dir / "micro_curve.csv", header, result.pf_summary);
        write_mse_curve_csv(out_dir / "mse_curve.csv", header, result.mse_base, result.mse_pf);
        json summary = summary_base(config);
        summary["n_particles"] = config.filter.n_particles;
        summary["da_window"] = config.filter.da_window;
        summary["summed_mse_nopf"] = result.summed_mse_base;
        summary["summed_mse_pf"] = result.summed_mse_pf;
        summary["summed_mse_reduction"] = result.summed_mse_reduction;
        summary["best_day_mse_reduction"] = result.best_day_mse_reduction;
        summary["mse_ratio_per_day"] = result.ratio_per_day;
        json events = json::array();
        for (const AssimilationDiagnostics &diag : result.assimilations) {
            events.push_back({{"day", diag.day},
                              {"weight_entropy", diag.weight_entropy},
                              {"max_weight", diag.max_weight}});
        }
        summary["assimilations"] = events;
        write_summary_json(out_dir / "summary.json", summary);
        break;
    }
    case ExperimentKind::particle_count_sweep: {
        const std::vector<ParticleSweepRow> rows =
            run_particle_sweep(data, config.model, config.filter.da_window,
                               config.particle_counts, config.trials, config.horizon_days,
                               config.master_seed, config.threads);
        write_particle_sweep_csv(out_dir / "sweep.csv", header, rows);
        json per_count = json::array();
        for (int count : config.particle_counts) {
            int n = 0;
            int wins = 0;
            double sum_pf = 0.0;
            double sum_nopf = 0.0;
            for (const ParticleSweepRow &row : rows) {
                if (row.n_particles != count) {
                    continue;
                }
                ++n;
                wins += row.summed_mse_pf < row.summed_mse_nopf ? 1 : 0;
                sum_pf += row.summed_mse_pf;
                sum_nopf += row.summed_mse_nopf;
            }
            per_count.push_back({{"n_particles", count},
                                 {"trials", n},
                                 {"pf_wins", wins},
                                 {"mean_summed_mse_pf", sum_pf / n},
                                 {"mean_summed_mse_nopf", sum_nopf / n}});
        }
        json summary = summary_base(config);
        summary["da_window"] = config.filter.da_window;
        summary["cells"] = per_count;
        write_summary_json(out_dir / "summary.json", summary);
        break;
    }
    case ExperimentKind::da_window_sweep: {
        const WindowSweepResult result =
            run_window_sweep(data, config.model, config.filter.n_particles, config.da_windows,
                             config.horizon_days, config.master_seed, config.threads);
        write_window_sweep_csv(out_dir / "sweep.csv", header, result.rows);
        json summary = summary_base(config);
        summary["n_particles"] = config.filter.n_particles;
        summary["mse_slope_per_event"] = result.mse_slope_per_event;
        const WindowSweepRow *none = nullptr;
        const WindowSweepRow *daily = nullptr;
        for (const WindowSweepRow &row : result.rows) {
            if (row.window == 0) {
                none = &row;
            }
            if (row.window == 1) {
                daily = &row;
            }
        }
        if (none != nullptr && daily != nullptr && none->summed_mse > 0.0) {
            summary["total_mse_reduction"] = 1.0 - daily->summed_mse / none->summed_mse;
        }
        write_summary_json(out_dir / "summary.json", summary);
        break;
    }
    case ExperimentKind::calibrate: {
        CalibrationGrid grid;
        grid.b_values = config.calibration.b_grid;
        grid.s_values = config.calibration.s_grid;
        grid.p_values = config.calibration.p_grid;
        const CalibrationResult result =
            grid_search(grid, data.countries, data.norm, data.observations, config.model,
                        config.calibration.ensemble_size, config.horizon_days,
                        config.master_seed, config.threads);
        write_calibration_table_csv(out_dir / "sweep.csv", header, result.table);
        const CalibrationCell &best = result.table[result.best_index];
        json summary = summary_base(config);
        summary["best"] = {{"B", best.b}, {"S", best.s}, {"p", best.p}};
        summary["best_summed_mse"] = best.summed_mse;
        summary["best_pearson_rho"] = best.pearson_rho;
        write_summary_json(out_dir / "summary.json", summary);
        break;
    }
    case ExperimentKind::generate_synthetic:
        break; // handled above
    }
}

} // namespace covpol
