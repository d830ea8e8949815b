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

#ifndef COVPOL_METRICS_HPP
#define COVPOL_METRICS_HPP

#include "covpol/model.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace covpol {

/// Fraction of countries in lockdown.
double macro_fraction(const WorldState &state);

/// Fraction of countries whose binary state matches the observation.
double micro_accuracy(std::span<const std::uint8_t> status,
                      std::span<const std::uint8_t> observed);
double micro_accuracy(const WorldState &state, std::span<const std::uint8_t> observed);

/// Per-day squared difference between the ensemble-mean fraction and the
/// observed fraction. Lengths must match.
std::vector<double> mse_curve(std::span<const double> mean_fractions,
                              std::span<const double> observed_fractions);

/// Plain sum of the per-day MSE values (unit day spacing).
double summed_mse(std::span<const double> mse);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool operator==(const Interval &) const = default;
};

/// Per-day ensemble statistics of the fraction-in-lockdown and of the micro
/// accuracy across runs. Bands are empirical quantiles, not Gaussian.
struct EnsembleSummary {
    std::vector<double> mean_fraction;
    std::vector<double> std_fraction;
    std::vector<Interval> ci50; ///< central 50% band (25th-75th percentile)
    std::vector<Interval> ci95; ///< central 95% band (2.5th-97.5th percentile)
    std::vector<double> micro_accuracy_mean;
    std::vector<double> micro_accuracy_std;

    int days() const { return static_cast<int>(mean_fraction.size()); }
};

/// Summarises run-major [run][day] traces. Requires >= 2 runs (sample
/// standard deviation and bands are undefined otherwise).
EnsembleSummary summarize_ensemble(const std::vector<std::vector<double>> &run_fractions,
                                   const std::vector<std::vector<double>> &run_accuracies);

/// Sample Pearson correlation. Throws ValidationError on length mismatch,
/// fewer than 2 points or a zero-variance input.
double pearson_correlation(std::span<const double> a, std::span<const double> b);

/// Empirical quantile with linear interpolation between order statistics,
/// q in [0, 1]. Takes values by copy and sorts them.
double quantile(std::vector<double> values, double q);

} // namespace covpol

#endif // COVPOL_METRICS_HPP
