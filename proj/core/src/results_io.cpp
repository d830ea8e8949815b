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

#include "covpol/results_io.hpp"

#include "covpol/errors.hpp"

#include "csv_util.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace covpol {

using detail::format_double;
using detail::parse_double_strict;
using detail::parse_int_strict;
using detail::parse_u64_strict;
using detail::split_csv_line;

namespace {

std::ofstream open_output(const std::filesystem::path &path) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write file: " + path.string());
    }
    return out;
}

void write_provenance(std::ofstream &out, const ProvenanceHeader &header) {
    out << "# config_hash=" << std::hex << std::setw(16) << std::setfill('0')
        << header.config_hash << std::dec << std::setfill(' ') << " master_seed="
        << header.master_seed << "\n";
}

struct CsvFile {
    ProvenanceHeader provenance;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

CsvFile read_csv(const std::filesystem::path &path, const std::string &expected_header) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open file: " + path.string());
    }
    CsvFile file;

    std::string line;
    if (!std::getline(in, line)) {
        throw ValidationError("result file is empty: " + path.string());
    }
    std::istringstream prov(line);
    std::string hash_token, seed_token, marker;
    prov >> marker >> hash_token >> seed_token;
    if (marker != "#" || hash_token.rfind("config_hash=", 0) != 0 ||
        seed_token.rfind("master_seed=", 0) != 0) {
        throw ValidationError("missing provenance line in " + path.string());
    }
    {
        const std::string hex = hash_token.substr(std::string("config_hash=").size());
        std::uint64_t value = 0;
        auto [ptr, ec] = std::from_chars(hex.data(), hex.data() + hex.size(), value, 16);
        if (ec != std::errc{} || ptr != hex.data() + hex.size()) {
            throw ValidationError("bad config_hash in " + path.string());
        }
        file.provenance.config_hash = value;
    }
    file.provenance.master_seed = parse_u64_strict(
        seed_token.substr(std::string("master_seed=").size()), path.string() + " master_seed");

    if (!std::getline(in, line)) {
        throw ValidationError("missing header row in " + path.string());
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    if (line != expected_header) {
        throw ValidationError("unexpected header in " + path.string() + ": '" + line + "'");
    }
    file.columns = split_csv_line(line);

    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") {
            continue;
        }
        std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() != file.columns.size()) {
            throw ValidationError("ragged row in " + path.string());
        }
        file.rows.push_back(std::move(fields));
    }
    return file;
}

} // namespace

void write_macro_curve_csv(const std::filesystem::path &path, const ProvenanceHeader &header,
                           const EnsembleSummary &summary, std::span<const double> observed) {
    if (observed.size() != summary.mean_fraction.size()) {
        throw ValidationError("macro_curve: observed length differs from summary");
    }
    std::ofstream out = open_output(path);
    write_provenance(out, header);
    out << "day,mean,std,ci50_lo,ci50_hi,ci95_lo,ci95_hi,observed\n";
    for (int d = 0; d < summary.days(); ++d) {
        const auto i = static_cast<std::size_t>(d);
        out << d << ',' << format_double(summary.mean_fraction[i]) << ','
            << format_double(summary.std_fraction[i]) << ','
            << format_double(summary.ci50[i].lo) << ',' << format_double(summary.ci50[i].hi)
            << ',' << format_double(summary.ci95[i].lo) << ','
            << format_double(summary.ci95[i].hi) << ',' << format_double(observed[i]) << "\n";
    }
    if (!out) {
        throw IoError("write failed: " + path.string());
    }
}

void write_micro_curve_csv(const std::filesystem::path &path, const ProvenanceHeader &header,
                           const EnsembleSummary &summary) {
    std::ofstream out = open_output(path);
    write_provenance(out, header);
    out << "day,mean_accuracy,std\n";
    for (int d = 0; d < summary.days(); ++d) {
        const auto i = static_cast<std::size_t>(d);
        out << d << ',' << format_double(summary.micro_accuracy_mean[i]) << ','
            << format_double(summary.micro_accuracy_std[i]) << "\n";
    }
    if (!out) {
        throw IoError("write failed: " + path.string());
    }
}

void write_mse_curve_csv(const std::filesystem::path &path, const ProvenanceHeader &header,
                         std::span<const double> mse_nopf, std::span<const double> mse_pf) {
    if (!mse_pf.empty() && mse_pf.size() != mse_nopf.size()) {
        throw ValidationError("mse_curve: arm lengths differ");
    }
    std::ofstream out = open_output(path);
    write_provenance(out, header);
    out << "day,mse_nopf,mse_pf\n";
    for (std::size_t d = 0; d < mse_nopf.size(); ++d) {
        out << d << ',' << format_double(mse_nopf[d]) << ',';
        if (!mse_pf.empty()) {
            out << format_double(mse_pf[d]);
        }
        out << "\n";
    }
    if (!out) {
        throw IoError("write failed: " + path.string());
    }
}

void write_particle_sweep_csv(const std::filesystem::path &path, const ProvenanceHeader &header,
                              std::span<const ParticleSweepRow> rows) {
    std::ofstream out = open_output(path);
    write_provenance(out, header);
    out << "n_particles,trial,seed,summed_mse_pf,summed_mse_nopf\n";
    for (const ParticleSweepRow &row : rows) {
        out << row.n_particles << ',' << row.trial << ',' << row.seed << ','
            << format_double(row.summed_mse_pf) << ',' << format_double(row.summed_mse_nopf)
            << "\n";
    }
    if (!out) {
        throw IoError("write failed: " + path.string());
    }
}

void write_window_sweep_csv(const std::filesystem::path &path, const ProvenanceHeader &header,
                            std::span<const WindowSweepRow> rows) {
    std::ofstream out = open_output(path);
    write_provenance(out, header);
    out << "window,n_events,summed_mse,mean_micro_accuracy\n";
    for (const WindowSweepRow &row : rows) {
        out << row.window << ',' << row.n_events << ',' << format_double(row.summed_mse) << ','
            << format_double(row.mean_micro_accuracy) << "\n";
    }
    if (!out) {
        throw IoError("write failed: " + path.string());
    }
}

void write_calibration_table_csv(const std::filesystem::path &path,
                                 const ProvenanceHeader &header,
                                 std::span<const CalibrationCell> cells) {
    std::ofstream out = open_output(path);
    write_provenance(out, header);
    out << "B,S,p,summed_mse,pearson_rho,seed\n";
    for (const CalibrationCell &cell : cells) {
        out << format_double(cell.b) << ',' << format_double(cell.s) << ',' << cell.p << ','
            << format_double(cell.summed_mse) << ',' << format_double(cell.pearson_rho) << ','
            << cell.seed << "\n";
    }
    if (!out) {
        throw IoError("write failed: " + path.string());
    }
}

MacroCurveData read_macro_curve_csv(const std::filesystem::path &path) {
    const CsvFile file = read_csv(path, "day,mean,std,ci50_lo,ci50_hi,ci95_lo,ci95_hi,observed");
    MacroCurveData data;
    data.provenance = file.provenance;
    const std::string ctx = path.string();
    for (const auto &row : file.rows) {
        data.mean.push_back(parse_double_strict(row[1], ctx));
        data.std_dev.push_back(parse_double_strict(row[2], ctx));
        data.ci50_lo.push_back(parse_double_strict(row[3], ctx));
        data.ci50_hi.push_back(parse_double_strict(row[4], ctx));
        data.ci95_lo.push_back(parse_double_strict(row[5], ctx));
        data.ci95_hi.push_back(parse_double_strict(row[6], ctx));
        data.observed.push_back(parse_double_strict(row[7], ctx));
    }
    return data;
}

MicroCurveData read_micro_curve_csv(const std::filesystem::path &path) {
    const CsvFile file = read_csv(path, "day,mean_accuracy,std");
    MicroCurveData data;
    data.provenance = file.provenance;
    const std::string ctx = path.string();
    for (const auto &row : file.rows) {
        data.mean_accuracy.push_back(parse_double_strict(row[1], ctx));
        data.std_dev.push_back(parse_double_strict(row[2], ctx));
    }
    return data;
}

MseCurveData read_mse_curve_csv(const std::filesystem::path &path) {
    const CsvFile file = read_csv(path, "day,mse_nopf,mse_pf");
    MseCurveData data;
    data.provenance = file.provenance;
    const std::string ctx = path.string();
    for (const auto &row : file.rows) {
        data.mse_nopf.push_back(parse_double_strict(row[1], ctx));
        if (!row[2].empty()) {
            data.mse_pf.push_back(parse_double_strict(row[2], ctx));
        }
    }
    if (!data.mse_pf.empty() && data.mse_pf.size() != data.mse_nopf.size()) {
        throw ValidationError("mse_curve: partial mse_pf column in " + path.string());
    }
    return data;
}

std::vector<ParticleSweepRow> read_particle_sweep_csv(const std::filesystem::path &path) {
    const CsvFile file = read_csv(path, "n_particles,trial,seed,summed_mse_pf,summed_mse_nopf");
    std::vector<ParticleSweepRow> rows;
    const std::string ctx = path.string();
    for (const auto &row : file.rows) {
        ParticleSweepRow out;
        out.n_particles = static_cast<int>(parse_int_strict(row[0], ctx));
        out.trial = static_cast<int>(parse_int_strict(row[1], ctx));
        out.seed = parse_u64_strict(row[2], ctx);
        out.summed_mse_pf = parse_double_strict(row[3], ctx);
        out.summed_mse_nopf = parse_double_strict(row[4], ctx);
        rows.push_back(out);
    }
    return rows;
}

std::vector<WindowSweepRow> read_window_sweep_csv(const std::filesystem::path &path) {
    const CsvFile file = read_csv(path, "window,n_events,summed_mse,mean_micro_accuracy");
    std::vector<WindowSweepRow> rows;
    const std::string ctx = path.string();
    for (const auto &row : file.rows) {
        WindowSweepRow out;
        out.window = static_cast<int>(parse_int_strict(row[0], ctx));
        out.n_events = static_cast<int>(parse_int_strict(row[1], ctx));
        out.summed_mse = parse_double_strict(row[2], ctx);
        out.mean_micro_accuracy = parse_double_strict(row[3], ctx);
        rows.push_back(out);
    }
    return rows;
}

std::vector<CalibrationCell> read_calibration_table_csv(const std::filesystem::path &path) {
    const CsvFile file = read_csv(path, "B,S,p,summed_mse,pearson_rho,seed");
    std::vector<CalibrationCell> cells;
    const std::string ctx = path.string();
    for (const auto &row : file.rows) {
        CalibrationCell cell;
        cell.b = parse_double_strict(row[0], ctx);
        cell.s = parse_double_strict(row[1], ctx);
        cell.p = static_cast<int>(parse_int_strict(row[2], ctx));
        cell.summed_mse = parse_double_strict(row[3], ctx);
        cell.pearson_rho = parse_double_strict(row[4], ctx);
        cell.seed = parse_u64_strict(row[5], ctx);
        cells.push_back(cell);
    }
    return cells;
}

} // namespace covpol
