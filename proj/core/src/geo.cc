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

#include "phonetraits/geo.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

namespace phonetraits::geo {
namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

double Dist(const PlanarPoint& a, const PlanarPoint& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

Circle FromTwo(const PlanarPoint& a, const PlanarPoint& b) {
  return {{0.5 * (a.x + b.x), 0.5 * (a.y + b.y)}, 0.5 * Dist(a, b)};
}

Circle FromThree(const PlanarPoint& a, const PlanarPoint& b,
                 const PlanarPoint& c) {
  const double bx = b.x - a.x, by = b.y - a.y;
  const double cx = c.x - a.x, cy = c.y - a.y;
  const double d = 2.0 * (bx * cy - by * cx);
  const double scale = std::max({std::abs(bx), std::abs(by), std::abs(cx),
                                 std::abs(cy), 1e-300});
  if (std::abs(d) <= 1e-14 * scale * scale) {
    // Collinear: the widest pair spans the others.
    Circle best = FromTwo(a, b);
    for (const Circle& cand : {FromTwo(a, c), FromTwo(b, c)})
      if (cand.radius > best.radius) best = cand;
    return best;
  }
  const double b2 = bx * bx + by * by;
  const double c2 = cx * cx + cy * cy;
  const double ux = (cy * b2 - by * c2) / d;
  const double uy = (bx * c2 - cx * b2) / d;
  return {{a.x + ux, a.y + uy}, std::hypot(ux, uy)};
}

bool Contains(const Circle& c, const PlanarPoint& p) {
  return Dist(c.center, p) <= c.radius * (1.0 + 1e-12) + 1e-9;
}

}  // namespace

double HaversineMeters(double lat1, double lon1, double lat2, double lon2) {
  const double p1 = lat1 * kDegToRad;
  const double p2 = lat2 * kDegToRad;
  const double dp = (lat2 - lat1) * kDegToRad;
  const double dl = (lon2 - lon1) * kDegToRad;
  const double h = std::sin(dp / 2) * std::sin(dp / 2) +
                   std::cos(p1) * std::cos(p2) * std::sin(dl / 2) *
                       std::sin(dl / 2);
  return 2.0 * kEarthRadiusMeters *
         std::asin(std::min(1.0, std::sqrt(h)));
}

PlanarPoint ProjectAzimuthalEquidistant(double lat0, double lon0, double lat,
                                        double lon) {
  const double central = HaversineMeters(lat0, lon0, lat, lon);
  if (central == 0.0) return {};
  const double p0 = lat0 * kDegToRad;
  const double p = lat * kDegToRad;
  const double dl = (lon - lon0) * kDegToRad;
  const double azimuth =
      std::atan2(std::sin(dl) * std::cos(p),
                 std::cos(p0) * std::sin(p) -
                     std::sin(p0) * std::cos(p) * std::cos(dl));
  return {central * std::sin(azimuth), central * std::cos(azimuth)};
}

Circle MinimalEnclosingCircle(std::span<const PlanarPoint> points) {
  if (points.empty()) return {};
  std::vector<PlanarPoint> pts(points.begin(), points.end());
  // Fixed shuffle: expected linear time, reproducible result.
  std::mt19937_64 rng(0x5eed);
  std::shuffle(pts.begin(), pts.end(), rng);

  Circle c{pts[0], 0.0};
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (Contains(c, pts[i])) continue;
    c = {pts[i], 0.0};
    for (std::size_t j = 0; j < i; ++j) {
      if (Contains(c, pts[j])) continue;
      c = FromTwo(pts[i], pts[j]);
      for (std::size_t k = 0; k < j; ++k) {
        if (!Contains(c, pts[k])) c = FromThree(pts[i], pts[j], pts[k]);
      }
    }
  }
  return c;
}

}  // namespace phonetraits::geo
