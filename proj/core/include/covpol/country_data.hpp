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

#ifndef COVPOL_COUNTRY_DATA_HPP
#define COVPOL_COUNTRY_DATA_HPP

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace covpol {

/// Static attributes of one country. Read-only after loading; shared freely
/// across simulation workers.
struct CountryRecord {
    int id = 0;                    ///< contiguous index 0..N-1, file order
    std::string code;              ///< short unique identifier (ISO-3 style)
    std::string name;
    double income = 0.0;           ///< GDP per capita, PPP
    double democracy = 0.0;        ///< Democracy Index score in [0, 10]
    double capital_lat = 0.0;      ///< degrees in [-90, 90]
    double capital_lon = 0.0;      ///< degrees in [-180, 180]
    double pop_density = 0.0;      ///< persons per km^2, > 0
    bool initial_lockdown = false; ///< lockdown status on day 0

    bool operator==(const CountryRecord &) const = default;
};

/// Observed daily binary lockdown matrix, day-major so that the slice for
/// one day is contiguous.
class ObservationSeries {
  public:
    ObservationSeries() = default;
    ObservationSeries(int n_countries, int n_days)
        : n_countries_(n_countries), n_days_(n_days),
          cells_(static_cast<std::size_t>(n_countries) * static_cast<std::size_t>(n_days), 0) {}

    int countries() const { return n_countries_; }
    int days() const { return n_days_; }

    std::uint8_t at(int country, int day) const {
        return cells_[static_cast<std::size_t>(day) * n_countries_ + country];
    }
    void set(int country, int day, std::uint8_t value) {
        cells_[static_cast<std::size_t>(day) * n_countries_ + country] = value;
    }

    /// All countries' observed statuses on one day.
    std::span<const std::uint8_t> day_slice(int day) const {
        return {cells_.data() + static_cast<std::size_t>(day) * n_countries_,
                static_cast<std::size_t>(n_countries_)};
    }

    /// Fraction of countries in lockdown per day, length days().
    std::vector<double> fraction_curve() const;

    bool operator==(const ObservationSeries &) const = default;

  private:
    int n_countries_ = 0;
    int n_days_ = 0;
    std::vector<std::uint8_t> cells_;
};

/// Extrema used to normalise each similarity dimension onto [0, 1].
struct NormalizationContext {
    double income_min = 0.0;
    double income_max = 0.0;
    double democracy_min = 0.0;
    double democracy_max = 0.0;
    double haversine_max_km = 0.0;
};

/// Loads the countries CSV (header
/// `code,name,income,democracy,capital_lat,capital_lon,pop_density,initial_lockdown`).
/// Records get contiguous ids in file order. Throws IoError if the file is
/// missing and ValidationError on malformed rows, out-of-range values or
/// duplicate codes, naming the offending line.
std::vector<CountryRecord> load_countries(const std::filesystem::path &path);

/// Loads the observations CSV (header `code,d0,d1,...`), aligning rows to
/// the ids of `countries`. Verifies that every code matches the loaded set,
/// cells are binary, day 0 equals the initial_lockdown flags and each row is
/// monotone non-decreasing. A monotonicity violation is an error naming the
/// country and day unless `clamp_monotone` is set, in which case the row is
/// forward-filled once a lockdown has been observed.
ObservationSeries load_observations(const std::filesystem::path &path,
                                    std::span<const CountryRecord> countries,
                                    bool clamp_monotone = false);

/// Computes normalisation extrema over the loaded set. haversine_max is the
/// empirical maximum over all capital pairs. Throws ValidationError on
/// degenerate sets (all incomes equal, all democracy scores equal, or zero
/// maximum distance) since the distance formula divides by each range.
NormalizationContext build_normalization(std::span<const CountryRecord> countries);

/// Writers for the same two file formats, used by the synthetic generator.
void write_countries_csv(const std::filesystem::path &path,
                         std::span<const CountryRecord> countries);
void write_observations_csv(const std::filesystem::path &path,
                            std::span<const CountryRecord> countries,
                            const ObservationSeries &observations);

} // namespace covpol

#endif // COVPOL_COUNTRY_DATA_HPP
