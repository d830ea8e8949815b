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

#include "covpol/errors.hpp"
#include "covpol/experiments.hpp"

#include "CLI11.hpp"

#include <cstdint>
#include <iostream>
#include <string>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

struct CliOverrides {
    std::string config_path;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int particles = 0;
    bool particles_set = false;
    int da_window = 0;
    bool da_window_set = false;
    int ensemble = 0;
    bool ensemble_set = false;
    std::string out_dir;
};

void add_common_options(CLI::App *cmd, CliOverrides &opts) {
    cmd->add_option("--config", opts.config_path, "Experiment config file (JSON)")
        ->required();
    cmd->add_option("--seed", opts.seed, "Override master_seed")
        ->each([&](const std::string &) { opts.seed_set = true; });
    cmd->add_option("--particles", opts.particles, "Override filter.n_particles")
        ->each([&](const std::string &) { opts.particles_set = true; });
    cmd->add_option("--da-window", opts.da_window, "Override filter.da_window")
        ->each([&](const std::string &) { opts.da_window_set = true; });
    cmd->add_option("--ensemble", opts.ensemble, "Override ensemble_size")
        ->each([&](const std::string &) { opts.ensemble_set = true; });
    cmd->add_option("--out", opts.out_dir, "Override paths.out_dir");
}

void run(covpol::ExperimentKind kind, const CliOverrides &opts) {
    covpol::ExperimentConfig config = covpol::load_config(opts.config_path);
    config.experiment = kind;
    if (opts.seed_set) {
        config.master_seed = opts.seed;
    }
    if (opts.particles_set) {
        config.filter.n_particles = opts.particles;
    }
    if (opts.da_window_set) {
        config.filter.da_window = opts.da_window;
    }
    if (opts.ensemble_set) {
        config.ensemble_size = opts.ensemble;
    }
    if (!opts.out_dir.empty()) {
        config.paths.out_dir = opts.out_dir;
    }
    config.validate();
    covpol::run_experiment(config);
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"covpol: lockdown policy diffusion model with particle-filter data assimilation"};
    app.require_subcommand(1);

    const std::pair<const char *, covpol::ExperimentKind> experiments[] = {
        {"base_run", covpol::ExperimentKind::base_run},
        {"pf_vs_ensemble", covpol::ExperimentKind::pf_vs_ensemble},
        {"particle_count_sweep", covpol::ExperimentKind::particle_count_sweep},
        {"da_window_sweep", covpol::ExperimentKind::da_window_sweep},
        {"calibrate", covpol::ExperimentKind::calibrate},
        {"generate_synthetic", covpol::ExperimentKind::generate_synthetic},
    };

    CliOverrides opts;
    for (const auto &[name, kind] : experiments) {
        CLI::App *cmd = app.add_subcommand(name, covpol::to_string(kind) + " experiment");
        add_common_options(cmd, opts);
        cmd->callback([kind, &opts] { run(kind, opts); });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitValidation;
    } catch (const covpol::ValidationError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const covpol::IoError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitOk;
}
