// Copyright 2026 The Phonetraits Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PHONETRAITS_GEO_H_
#define PHONETRAITS_GEO_H_

#include <span>

namespace phonetraits::geo {

inline constexpr double kEarthRadiusMeters = 6371000.0;

// Great-circle distance in meters (haversine formula).
double HaversineMeters(double lat1, double lon1, double lat2, double lon2);

struct PlanarPoint {
  double x = 0.0;  // meters east
  double y = 0.0;  // meters north
};

// Azimuthal-equidistant projection about (lat0, lon0). Distances and bearings
// from the origin are preserved exactly.
PlanarPoint ProjectAzimuthalEquidistant(double lat0, double lon0, double lat,
                                        double lon);

struct Circle {
  PlanarPoint center;
  double radius = 0.0;
};

// Smallest circle enclosing every point (Welzl's algorithm, iterative form,
// deterministic point order). Empty input yields a zero circle at the origin.
Circle MinimalEnclosingCircle(std::span<const PlanarPoint> points);

}  // namespace phonetraits::geo

#endif  // PHONETRAITS_GEO_H_
