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

#ifndef COVPOL_RESULTS_IO_HPP
#define COVPOL_RESULTS_IO_HPP

#include "covpol/calibration.hpp"
#include "covpol/experiments.hpp"
#include "covpol/metrics.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace covpol {

/// First line of every result file: `# config_hash=<hex> master_seed=<dec>`.
struct ProvenanceHeader {
    std::uint64_t config_hash = 0;
    std::uint64_t master_seed = 0;
};

/// macro_curve.csv: day,mean,std,ci50_lo,ci50_hi,ci95_lo,ci95_hi,observed
void write_macro_curve_csv(const std::filesystem::path &path, const ProvenanceHeader &header,
                           const EnsembleSummary &summary, std::span<const double> observed);

/// micro_curve.csv: day,mean_accuracy,std
void write_micro_curve_csv(const std::filesystem::path &path, const ProvenanceHeader &header,
                           const EnsembleSummary &summary);

/// mse_curve.csv: day,mse_nopf,mse_pf (mse_pf cells are empty when the run
/// had no filtered arm).
void write_mse_curve_csv(const std::filesystem::path &path, const ProvenanceHeader &header,
                         std::span<const double> mse_nopf, std::span<const double> mse_pf);

/// sweep.csv for the particle-count sweep:
/// n_particles,trial,seed,summed_mse_pf,summed_mse_nopf
void write_particle_sweep_csv(const std::filesystem::path &path, const ProvenanceHeader &header,
                              std::span<const ParticleSweepRow> rows);

/// sweep.csv for the window sweep:
/// window,n_events,summed_mse,mean_micro_accuracy (window 0 = no filtering)
void write_window_sweep_csv(const std::filesystem::path &path, const ProvenanceHeader &header,
                            std::span<const WindowSweepRow> rows);

/// sweep.csv for calibration: B,S,p,summed_mse,pearson_rho,seed
void write_calibration_table_csv(const std::filesystem::path &path,
                                 const ProvenanceHeader &header,
                                 std::span<const CalibrationCell> cells);

/// Read-back structures; loading an emitted file reproduces the written
/// values exactly (doubles are serialised in shortest round-trip form).
struct MacroCurveData {
    ProvenanceHeader provenance;
    std::vector<double> mean;
    std::vector<double> std_dev;
    std::vector<double> ci50_lo, ci50_hi, ci95_lo, ci95_hi;
    std::vector<double> observed;
};
MacroCurveData read_macro_curve_csv(const std::filesystem::path &path);

struct MicroCurveData {
    ProvenanceHeader provenance;
    std::vector<double> mean_accuracy;
    std::vector<double> std_dev;
};
MicroCurveData read_micro_curve_csv(const std::filesystem::path &path);

struct MseCurveData {
    ProvenanceHeader provenance;
    std::vector<double> mse_nopf;
    std::vector<double> mse_pf; ///< empty when the file had no filtered arm
};
MseCurveData read_mse_curve_csv(const std::filesystem::path &path);

std::vector<ParticleSweepRow> read_particle_sweep_csv(const std::filesystem::path &path);
std::vector<WindowSweepRow> read_window_sweep_csv(const std::filesystem::path &path);
std::vector<CalibrationCell> read_calibration_table_csv(const std::filesystem::path &path);

} // namespace covpol

#endif // COVPOL_RESULTS_IO_HPP
