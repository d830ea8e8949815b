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

#ifndef COVPOL_SYNTHETIC_HPP
#define COVPOL_SYNTHETIC_HPP

#include "covpol/country_data.hpp"
#include "covpol/model.hpp"

#include <cstdint>
#include <vector>

namespace covpol {

/// Attribute distributions for the synthetic world. Income and density are
/// log-normal, democracy is uniform on [1, 10]. The density parameters are
/// chosen so the derived a-social thresholds match the calibrated base
/// run's range.
///
/// Countries belong to geographic blocs (continents): capitals scatter
/// around uniformly placed bloc centres, and democracy and income are dealt
/// to blocs rank-contiguously (a permutation of the sampled values, so the
/// marginals are exact) with `attribute_mixing` random cross-swaps.
/// Spatially correlated attributes are what lets the peer-mimicry cascade
/// sweep the world the way the observed data does; fully independent
/// sampling leaves every country without a close peer group and the
/// diffusion stalls far below the observed level.
///
/// The observed series is one of `candidate_runs` model trajectories: the
/// one whose worst-day deviation from the candidates' mean curve is closest
/// to `target_max_deviation`. Real observations sit visibly off the model
/// mean (that offset is what assimilation corrects), so an emitted series
/// that is too central would make the filter look useless and one too far
/// out would be an outlier world.
struct SyntheticConfig {
    int n_countries = 164;
    double initial_fraction = 0.08; ///< share of countries in lockdown on day 0
    int candidate_runs = 33;
    double target_max_deviation = 0.09;
    int n_blocs = 0;                ///< 0 = one bloc per ~24 countries
    double bloc_spread_deg = 10.0;  ///< angular scatter of capitals around bloc centres
    double attribute_mixing = 0.3;  ///< fraction of attribute values swapped across blocs
    double income_log_mean = 9.8;
    double income_log_sd = 1.0;
    double density_log_mean = 0.9;
    double density_log_sd = 0.9;

    void validate() const;
};

struct SyntheticDataset {
    std::vector<CountryRecord> countries;
    ObservationSeries observations;
};

/// Samples a synthetic world and generates its observed lockdown series by
/// running the model itself at `params` over horizon_days daily states from
/// a seeded ~initial_fraction day-0 adoption. The emitted series is monotone
/// by construction and its day-0 column matches the initial_lockdown flags.
SyntheticDataset generate_synthetic(const SyntheticConfig &config, const ModelParams &params,
                                    int horizon_days, std::uint64_t seed);

} // namespace covpol

#endif // COVPOL_SYNTHETIC_HPP
