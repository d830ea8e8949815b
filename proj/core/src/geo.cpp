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

#include "covpol/geo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace covpol {

namespace {
constexpr double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
} // namespace

double haversine_km(const GeoPoint &a, const GeoPoint &b) {
    const double lat1 = deg_to_rad(a.lat_deg);
    const double lat2 = deg_to_rad(b.lat_deg);
    const double d_lat = deg_to_rad(b.lat_deg - a.lat_deg);
    const double d_lon = deg_to_rad(b.lon_deg - a.lon_deg);

    const double sin_lat = std::sin(d_lat / 2.0);
    const double sin_lon = std::sin(d_lon / 2.0);
    double h = sin_lat * sin_lat + std::cos(lat1) * std::cos(lat2) * sin_lon * sin_lon;
    // guard asin against rounding just outside [0, 1]
    h = std::clamp(h, 0.0, 1.0);
    return 2.0 * kEarthRadiusKm * std::asin(std::sqrt(h));
}

} // namespace covpol
