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

#ifndef PHONETRAITS_TESTS_TEST_SUPPORT_H_
#define PHONETRAITS_TESTS_TEST_SUPPORT_H_

// Independent reference implementations shared by the unit tests and the
// acceptance runner. None of these call into the library code they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "phonetraits/features.h"
#include "phonetraits/geo.h"
#include "phonetraits/types.h"

namespace phonetraits::test {

inline Eigen::MatrixXd RandomNormal(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = normal(rng);
  return m;
}

inline Eigen::VectorXd RandomUnit(int n, std::mt19937_64& rng) {
  Eigen::VectorXd v = RandomNormal(n, 1, rng);
  return v / v.norm();
}

// -sum p log2 p over raw counts.
inline double EntropyOracle(const std::vector<double>& counts) {
  double total = 0.0;
  for (double c : counts) total += c;
  double h = 0.0;
  for (double c : counts) {
    if (c <= 0) continue;
    const double p = c / total;
    h -= p * std::log2(p);
  }
  return h;
}

struct OracleCircle {
  double x = 0.0;
  double y = 0.0;
  double r = 0.0;
};

// Smallest circle among all 2- and 3-point support circles that encloses
// every point.
inline OracleCircle MecOracle(const std::vector<geo::PlanarPoint>& pts) {
  const int n = static_cast<int>(pts.size());
  if (n == 0) return {};
  if (n == 1) return {pts[0].x, pts[0].y, 0.0};
  double scale = 0.0;
  for (const auto& p : pts) scale = std::max({scale, std::abs(p.x), std::abs(p.y)});
  const double slack = 1e-9 * std::max(scale, 1.0);
  auto encloses = [&](const OracleCircle& c) {
    for (const auto& p : pts)
      if (std::hypot(p.x - c.x, p.y - c.y) > c.r + slack) return false;
    return true;
  };
  OracleCircle best{0, 0, std::numeric_limits<double>::infinity()};
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      OracleCircle c{(pts[i].x + pts[j].x) / 2, (pts[i].y + pts[j].y) / 2,
                     std::hypot(pts[i].x - pts[j].x, pts[i].y - pts[j].y) / 2};
      if (c.r < best.r && encloses(c)) best = c;
      for (int k = j + 1; k < n; ++k) {
        const double ax = pts[i].x, ay = pts[i].y;
        const double bx = pts[j].x, by = pts[j].y;
        const double cx = pts[k].x, cy = pts[k].y;
        const double d = 2 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by));
        if (std::abs(d) < 1e-12) continue;
        const double a2 = ax * ax + ay * ay, b2 = bx * bx + by * by,
                     c2 = cx * cx + cy * cy;
        const double ux = (a2 * (by - cy) + b2 * (cy - ay) + c2 * (ay - by)) / d;
        const double uy = (a2 * (cx - bx) + b2 * (ax - cx) + c2 * (bx - ax)) / d;
        OracleCircle t{ux, uy, std::hypot(ax - ux, ay - uy)};
        if (t.r < best.r && encloses(t)) best = t;
      }
    }
  }
  return best;
}

inline double HaversineOracle(double lat1, double lon1, double lat2, double lon2) {
  const double r = 6371000.0;
  const double rad = std::numbers::pi / 180.0;
  const double dlat = (lat2 - lat1) * rad;
  const double dlon = (lon2 - lon1) * rad;
  const double a = std::pow(std::sin(dlat / 2), 2) +
                   std::cos(lat1 * rad) * std::cos(lat2 * rad) * std::pow(std::sin(dlon / 2), 2);
  return 2 * r * std::asin(std::min(1.0, std::sqrt(a)));
}

struct DbscanOracleResult {
  std::vector<bool> core;
  // Cluster of each core point as the smallest core index in its component.
  std::vector<int> core_root;
  // Allowed roots for each non-core point; empty means noise.
  std::vector<std::set<int>> border_roots;
};

// Textbook DBSCAN over an all-pairs neighbor matrix (a point is its own
// neighbor).
inline DbscanOracleResult DbscanOracle(const std::vector<GpsPoint>& pts,
                                       double eps, int min_points) {
  const int n = static_cast<int>(pts.size());
  std::vector<std::vector<bool>> near(n, std::vector<bool>(n, false));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      near[i][j] = HaversineOracle(pts[i].latitude, pts[i].longitude, pts[j].latitude,
                                   pts[j].longitude) <= eps;
  DbscanOracleResult r;
  r.core.assign(n, false);
  r.core_root.assign(n, -1);
  r.border_roots.assign(n, {});
  for (int i = 0; i < n; ++i) {
    int count = 0;
    for (int j = 0; j < n; ++j) count += near[i][j];
    r.core[i] = count >= min_points;
  }
  // Union-find over core-core edges.
  std::vector<int> parent(n);
  for (int i = 0; i < n; ++i) parent[i] = i;
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (r.core[i] && r.core[j] && near[i][j]) {
        const int a = find(i), b = find(j);
        parent[std::max(a, b)] = std::min(a, b);
      }
  for (int i = 0; i < n; ++i)
    if (r.core[i]) r.core_root[i] = find(i);
  for (int i = 0; i < n; ++i) {
    if (r.core[i]) continue;
    for (int j = 0; j < n; ++j)
      if (r.core[j] && near[i][j]) r.border_roots[i].insert(r.core_root[j]);
  }
  return r;
}

// Empty string when the library labeling agrees with the oracle: identical
// core flags, identical core partition up to relabeling, border points in one
// of their admissible clusters, identical noise set.
inline std::string CompareDbscan(const DbscanResult& got, const DbscanOracleResult& want) {
  const int n = static_cast<int>(want.core.size());
  if (static_cast<int>(got.labels.size()) != n) return "label count differs";
  std::map<int, int> root_to_label, label_to_root;
  for (int i = 0; i < n; ++i) {
    if (got.core[i] != want.core[i]) return "core flag differs at " + std::to_string(i);
    if (!want.core[i]) continue;
    const int label = got.labels[i];
    if (label < 0) return "core point labeled noise at " + std::to_string(i);
    auto [it, fresh] = root_to_label.emplace(want.core_root[i], label);
    if (!fresh && it->second != label) return "core component split at " + std::to_string(i);
    auto [jt, fresh2] = label_to_root.emplace(label, want.core_root[i]);
    if (!fresh2 && jt->second != want.core_root[i])
      return "core components merged at " + std::to_string(i);
  }
  for (int i = 0; i < n; ++i) {
    if (want.core[i]) continue;
    if (want.border_roots[i].empty()) {
      if (got.labels[i] != kNoiseCluster) return "noise point clustered at " + std::to_string(i);
      continue;
    }
    auto it = label_to_root.find(got.labels[i]);
    if (it == label_to_root.end() || !want.border_roots[i].contains(it->second))
      return "border point in an inadmissible cluster at " + std::to_string(i);
  }
  return "";
}

// x_t = mu + sum phi_i x_{t-i} + e_t with standard normal noise and burn-in.
inline std::vector<double> SimulateAr(const std::vector<double>& phi, double mu, int n,
                                      double noise, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const int p = static_cast<int>(phi.size());
  const int burn = 500;
  std::vector<double> x(n + burn, 0.0);
  for (int t = p; t < n + burn; ++t) {
    double v = mu + noise * normal(rng);
    for (int i = 0; i < p; ++i) v += phi[i] * x[t - 1 - i];
    x[t] = v;
  }
  return {x.begin() + burn, x.end()};
}

inline double AutocovarianceOracle(const std::vector<double>& x, int lag) {
  const int n = static_cast<int>(x.size());
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= n;
  double s = 0.0;
  for (int t = 0; t + lag < n; ++t) s += (x[t] - mean) * (x[t + lag] - mean);
  return s / n;
}

// Answers in [1, 5] for a synthetic record.
inline Answers ConstantAnswers(int value) {
  Answers a;
  a.fill(value);
  return a;
}

// User meeting every filter threshold exactly.
inline UserRecord MinimalUser(const std::string& id, int texts = 10, int calls = 5,
                              int gps = 100, int friends = 1, bool answers = true) {
  UserRecord u;
  u.user_id = id;
  for (int i = 0; i < texts; ++i)
    u.texts.push_back({1000 + 60 * i, "c" + std::to_string(i % 3), Direction::kOut});
  for (int i = 0; i < calls; ++i)
    u.calls.push_back({2000 + 60 * i, "c" + std::to_string(i % 2), Direction::kIn, 30.0});
  for (int i = 0; i < gps; ++i) u.gps.push_back({3000 + 600 * i, 55.0, 12.0 + 1e-5 * i});
  u.facebook_friends = friends;
  if (answers) u.answers = ConstantAnswers(3);
  return u;
}

}  // namespace phonetraits::test

#endif  // PHONETRAITS_TESTS_TEST_SUPPORT_H_
