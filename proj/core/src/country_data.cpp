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

#include "covpol/country_data.hpp"

#include "covpol/errors.hpp"
#include "covpol/geo.hpp"

#include "csv_util.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace covpol {

using detail::format_double;
using detail::split_csv_line;

namespace {

double parse_double(const std::string &text, const char *column, int line_no) {
    double value = 0.0;
    const char *first = text.data();
    const char *last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || text.empty()) {
        std::ostringstream msg;
        msg << "line " << line_no << ": column '" << column << "' is not a number: '" << text
            << "'";
        throw ValidationError(msg.str());
    }
    if (!std::isfinite(value)) {
        std::ostringstream msg;
        msg << "line " << line_no << ": column '" << column << "' is not finite";
        throw ValidationError(msg.str());
    }
    return value;
}

bool parse_binary(const std::string &text, const char *column, int line_no) {
    if (text == "0") {
        return false;
    }
    if (text == "1") {
        return true;
    }
    std::ostringstream msg;
    msg << "line " << line_no << ": column '" << column << "' must be 0 or 1, got '" << text
        << "'";
    throw ValidationError(msg.str());
}

void check_range(double value, double lo, double hi, const char *column, int line_no) {
    if (value < lo || value > hi) {
        std::ostringstream msg;
        msg << "line " << line_no << ": column '" << column << "' value " << value
            << " outside [" << lo << ", " << hi << "]";
        throw ValidationError(msg.str());
    }
}

std::ifstream open_input(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open file: " + path.string());
    }
    return in;
}

constexpr const char *kCountriesHeader =
    "code,name,income,democracy,capital_lat,capital_lon,pop_density,initial_lockdown";

} // namespace

std::vector<double> ObservationSeries::fraction_curve() const {
    std::vector<double> curve(static_cast<std::size_t>(n_days_), 0.0);
    for (int day = 0; day < n_days_; ++day) {
        long count = 0;
        for (std::uint8_t cell : day_slice(day)) {
            count += cell;
        }
        curve[static_cast<std::size_t>(day)] =
            n_countries_ > 0 ? static_cast<double>(count) / n_countries_ : 0.0;
    }
    return curve;
}

std::vector<CountryRecord> load_countries(const std::filesystem::path &path) {
    std::ifstream in = open_input(path);

    std::string line;
    if (!std::getline(in, line)) {
        throw ValidationError("countries file is empty: " + path.string());
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    if (line != kCountriesHeader) {
        throw ValidationError("countries file header must be '" + std::string(kCountriesHeader) +
                              "', got '" + line + "'");
    }

    std::vector<CountryRecord> records;
    std::unordered_set<std::string> seen_codes;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") {
            continue;
        }
        const std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() != 8) {
            std::ostringstream msg;
            msg << "line " << line_no << ": expected 8 columns, got " << fields.size();
            throw ValidationError(msg.str());
        }

        CountryRecord rec;
        rec.id = static_cast<int>(records.size());
        rec.code = fields[0];
        rec.name = fields[1];
        if (rec.code.empty()) {
            std::ostringstream msg;
            msg << "line " << line_no << ": column 'code' is empty";
            throw ValidationError(msg.str());
        }
        if (!seen_codes.insert(rec.code).second) {
            std::ostringstream msg;
            msg << "line " << line_no << ": duplicate country code '" << rec.code << "'";
            throw ValidationError(msg.str());
        }
        rec.income = parse_double(fields[2], "income", line_no);
        rec.democracy = parse_double(fields[3], "democracy", line_no);
        rec.capital_lat = parse_double(fields[4], "capital_lat", line_no);
        rec.capital_lon = parse_double(fields[5], "capital_lon", line_no);
        rec.pop_density = parse_double(fields[6], "pop_density", line_no);
        rec.initial_lockdown = parse_binary(fields[7], "initial_lockdown", line_no);

        if (rec.income < 0.0) {
            std::ostringstream msg;
            msg << "line " << line_no << ": column 'income' must be >= 0, got " << rec.income;
            throw ValidationError(msg.str());
        }
        check_range(rec.democracy, 0.0, 10.0, "democracy", line_no);
        check_range(rec.capital_lat, -90.0, 90.0, "capital_lat", line_no);
        check_range(rec.capital_lon, -180.0, 180.0, "capital_lon", line_no);
        if (!(rec.pop_density > 0.0)) {
            std::ostringstream msg;
            msg << "line " << line_no << ": column 'pop_density' must be > 0, got "
                << rec.pop_density;
            throw ValidationError(msg.str());
        }

        records.push_back(std::move(rec));
    }

    if (records.empty()) {
        throw ValidationError("countries file has no data rows: " + path.string());
    }
    return records;
}

ObservationSeries load_observations(const std::filesystem::path &path,
                                    std::span<const CountryRecord> countries,
                                    bool clamp_monotone) {
    std::ifstream in = open_input(path);

    std::string line;
    if (!std::getline(in, line)) {
        throw ValidationError("observations file is empty: " + path.string());
    }
    const std::vector<std::string> header = split_csv_line(line);
    if (header.size() < 2 || header[0] != "code") {
        throw ValidationError("observations header must be 'code,d0,d1,...', got '" + line + "'");
    }
    const int n_days = static_cast<int>(header.size()) - 1;
    for (int d = 0; d < n_days; ++d) {
        const std::string expected = "d" + std::to_string(d);
        if (header[static_cast<std::size_t>(d) + 1] != expected) {
            throw ValidationError("observations header: expected column '" + expected +
                                  "', got '" + header[static_cast<std::size_t>(d) + 1] + "'");
        }
    }

    std::unordered_map<std::string, int> id_by_code;
    for (const CountryRecord &rec : countries) {
        id_by_code.emplace(rec.code, rec.id);
    }

    const int n_countries = static_cast<int>(countries.size());
    ObservationSeries series(n_countries, n_days);
    std::vector<bool> row_seen(static_cast<std::size_t>(n_countries), false);

    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") {
            continue;
        }
        const std::vector<std::string> fields = split_csv_line(line);
        if (static_cast<int>(fields.size()) != n_days + 1) {
            std::ostringstream msg;
            msg << "line " << line_no << ": expected " << (n_days + 1) << " columns, got "
                << fields.size();
            throw ValidationError(msg.str());
        }
        const auto it = id_by_code.find(fields[0]);
        if (it == id_by_code.end()) {
            std::ostringstream msg;
            msg << "line " << line_no << ": unknown country code '" << fields[0] << "'";
            throw ValidationError(msg.str());
        }
        const int id = it->second;
        if (row_seen[static_cast<std::size_t>(id)]) {
            std::ostringstream msg;
            msg << "line " << line_no << ": duplicate row for country '" << fields[0] << "'";
            throw ValidationError(msg.str());
        }
        row_seen[static_cast<std::size_t>(id)] = true;

        bool locked = false;
        for (int d = 0; d < n_days; ++d) {
            const std::string column = "d" + std::to_string(d);
            bool value =
                parse_binary(fields[static_cast<std::size_t>(d) + 1], column.c_str(), line_no);
            if (locked && !value) {
                if (clamp_monotone) {
                    value = true;
                } else {
                    std::ostringstream msg;
                    msg << "country '" << fields[0] << "' exits lockdown on day " << d
                        << " (observed series must be monotone non-decreasing)";
                    throw ValidationError(msg.str());
                }
            }
            locked = locked || value;
            series.set(id, d, value ? 1 : 0);
        }
    }

    for (const CountryRecord &rec : countries) {
        if (!row_seen[static_cast<std::size_t>(rec.id)]) {
            throw ValidationError("observations file has no row for country '" + rec.code + "'");
        }
        const bool observed_day0 = series.at(rec.id, 0) != 0;
        if (observed_day0 != rec.initial_lockdown) {
            throw ValidationError("country '" + rec.code +
                                  "': day-0 observation does not match initial_lockdown flag");
        }
    }

    return series;
}

NormalizationContext build_normalization(std::span<const CountryRecord> countries) {
    if (countries.size() < 2) {
        throw ValidationError("normalization requires at least 2 countries");
    }

    NormalizationContext ctx;
    ctx.income_min = ctx.income_max = countries[0].income;
    ctx.democracy_min = ctx.democracy_max = countries[0].democracy;
    for (const CountryRecord &rec : countries) {
        ctx.income_min = std::min(ctx.income_min, rec.income);
        ctx.income_max = std::max(ctx.income_max, rec.income);
        ctx.democracy_min = std::min(ctx.democracy_min, rec.democracy);
        ctx.democracy_max = std::max(ctx.democracy_max, rec.democracy);
    }

    ctx.haversine_max_km = 0.0;
    for (std::size_t i = 0; i < countries.size(); ++i) {
        const GeoPoint a{countries[i].capital_lat, countries[i].capital_lon};
        for (std::size_t j = i + 1; j < countries.size(); ++j) {
            const GeoPoint b{countries[j].capital_lat, countries[j].capital_lon};
            ctx.haversine_max_km = std::max(ctx.haversine_max_km, haversine_km(a, b));
        }
    }

    if (!(ctx.income_max > ctx.income_min)) {
        throw ValidationError("degenerate country set: all income values are equal");
    }
    if (!(ctx.democracy_max > ctx.democracy_min)) {
        throw ValidationError("degenerate country set: all democracy scores are equal");
    }
    if (!(ctx.haversine_max_km > 0.0)) {
        throw ValidationError("degenerate country set: all capitals coincide");
    }
    return ctx;
}

void write_countries_csv(const std::filesystem::path &path,
                         std::span<const CountryRecord> countries) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write file: " + path.string());
    }
    out << kCountriesHeader << "\n";
    for (const CountryRecord &rec : countries) {
        out << rec.code << ',' << rec.name << ',' << format_double(rec.income) << ','
            << format_double(rec.democracy) << ',' << format_double(rec.capital_lat) << ','
            << format_double(rec.capital_lon) << ',' << format_double(rec.pop_density) << ','
            << (rec.initial_lockdown ? '1' : '0') << "\n";
    }
    if (!out) {
        throw IoError("write failed: " + path.string());
    }
}

void write_observations_csv(const std::filesystem::path &path,
                            std::span<const CountryRecord> countries,
                            const ObservationSeries &observations) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write file: " + path.string());
    }
    out << "code";
    for (int d = 0; d < observations.days(); ++d) {
        out << ",d" << d;
    }
    out << "\n";
    for (const CountryRecord &rec : countries) {
        out << rec.code;
        for (int d = 0; d < observations.days(); ++d) {
            out << ',' << static_cast<int>(observations.at(rec.id, d));
        }
        out << "\n";
    }
    if (!out) {
        throw IoError("write failed: " + path.string());
    }
}

} // namespace covpol
