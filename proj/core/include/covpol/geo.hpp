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

#ifndef COVPOL_GEO_HPP
#define COVPOL_GEO_HPP

namespace covpol {

/// Mean Earth radius in km, fixed for all great-circle computations.
inline constexpr double kEarthRadiusKm = 6371.0;

struct GeoPoint {
    double lat_deg;
    double lon_deg;
};

/// Great-circle distance between two points on a sphere of radius
/// kEarthRadiusKm (haversine formula). Symmetric and non-negative.
double haversine_km(const GeoPoint &a, const GeoPoint &b);

} // namespace covpol

#endif // COVPOL_GEO_HPP
