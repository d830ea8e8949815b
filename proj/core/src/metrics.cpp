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

#include "covpol/metrics.hpp"

#include "covpol/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace covpol {

double macro_fraction(const WorldState &state) {
    if (state.size() == 0) {
        return 0.0;
    }
    return static_cast<double>(state.locked_count()) / state.size();
}

double micro_accuracy(std::span<const std::uint8_t> status,
                      std::span<const std::uint8_t> observed) {
    if (status.size() != observed.size()) {
        throw ValidationError("micro_accuracy: state and observation sizes differ");
    }
    if (status.empty()) {
        return 0.0;
    }
    std::size_t matches = 0;
    for (std::size_t i = 0; i < status.size(); ++i) {
        matches += (status[i] == observed[i]) ? 1 : 0;
    }
    return static_cast<double>(matches) / static_cast<double>(status.size());
}

double micro_accuracy(const WorldState &state, std::span<const std::uint8_t> observed) {
    return micro_accuracy(std::span<const std::uint8_t>(state.status), observed);
}

std::vector<double> mse_curve(std::span<const double> mean_fractions,
                              std::span<const double> observed_fractions) {
    if (mean_fractions.size() != observed_fractions.size()) {
        throw ValidationError("mse_curve: prediction and observation lengths differ");
    }
    std::vector<double> out(mean_fractions.size(), 0.0);
    for (std::size_t d = 0; d < mean_fractions.size(); ++d) {
        const double diff = mean_fractions[d] - observed_fractions[d];
        out[d] = diff * diff;
    }
    return out;
}

double summed_mse(std::span<const double> mse) {
    double sum = 0.0;
    for (double v : mse) {
        sum += v;
    }
    return sum;
}

double quantile(std::vector<double> values, double q) {
    if (values.empty()) {
        throw ValidationError("quantile: empty sample");
    }
    if (q < 0.0 || q > 1.0) {
        throw ValidationError("quantile: q must be in [0, 1]");
    }
    std::sort(values.begin(), values.end());
    const double pos = q * static_cast<double>(values.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] + (values[hi] - values[lo]) * frac;
}

namespace {

struct DayStats {
    double mean;
    double sample_std;
};

DayStats day_stats(const std::vector<double> &sample) {
    double sum = 0.0;
    for (double v : sample) {
        sum += v;
    }
    const double mean = sum / static_cast<double>(sample.size());
    double sq = 0.0;
    for (double v : sample) {
        sq += (v - mean) * (v - mean);
    }
    const double var = sq / static_cast<double>(sample.size() - 1);
    return {mean, std::sqrt(var)};
}

} // namespace

EnsembleSummary summarize_ensemble(const std::vector<std::vector<double>> &run_fractions,
                                   const std::vector<std::vector<double>> &run_accuracies) {
    if (run_fractions.size() < 2) {
        throw ValidationError("summarize_ensemble: at least 2 runs required");
    }
    if (run_accuracies.size() != run_fractions.size()) {
        throw ValidationError("summarize_ensemble: fraction and accuracy run counts differ");
    }
    const std::size_t n_days = run_fractions.front().size();
    for (const auto &run : run_fractions) {
        if (run.size() != n_days) {
            throw ValidationError("summarize_ensemble: ragged fraction traces");
        }
    }
    for (const auto &run : run_accuracies) {
        if (run.size() != n_days) {
            throw ValidationError("summarize_ensemble: ragged accuracy traces");
        }
    }

    EnsembleSummary out;
    out.mean_fraction.resize(n_days);
    out.std_fraction.resize(n_days);
    out.ci50.resize(n_days);
    out.ci95.resize(n_days);
    out.micro_accuracy_mean.resize(n_days);
    out.micro_accuracy_std.resize(n_days);

    std::vector<double> sample(run_fractions.size());
    for (std::size_t d = 0; d < n_days; ++d) {
        for (std::size_t r = 0; r < run_fractions.size(); ++r) {
            sample[r] = run_fractions[r][d];
        }
        const DayStats stats = day_stats(sample);
        out.mean_fraction[d] = stats.mean;
        out.std_fraction[d] = stats.sample_std;
        out.ci50[d] = {quantile(sample, 0.25), quantile(sample, 0.75)};
        out.ci95[d] = {quantile(sample, 0.025), quantile(sample, 0.975)};

        for (std::size_t r = 0; r < run_accuracies.size(); ++r) {
            sample[r] = run_accuracies[r][d];
        }
        const DayStats acc = day_stats(sample);
        out.micro_accuracy_mean[d] = acc.mean;
        out.micro_accuracy_std[d] = acc.sample_std;
    }
    return out;
}

double pearson_correlation(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw ValidationError("pearson_correlation: lengths differ");
    }
    if (a.size() < 2) {
        throw ValidationError("pearson_correlation: at least 2 points required");
    }
    const double n = static_cast<double>(a.size());
    double mean_a = 0.0;
    double mean_b = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        mean_a += a[i];
        mean_b += b[i];
    }
    mean_a /= n;
    mean_b /= n;

    double cov = 0.0;
    double var_a = 0.0;
    double var_b = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double da = a[i] - mean_a;
        const double db = b[i] - mean_b;
        cov += da * db;
        var_a += da * da;
        var_b += db * db;
    }
    if (var_a == 0.0 || var_b == 0.0) {
        throw ValidationError("pearson_correlation: zero-variance input");
    }
    return cov / std::sqrt(var_a * var_b);
}

} // namespace covpol
