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

#ifndef PHONETRAITS_FEATURES_H_
#define PHONETRAITS_FEATURES_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "phonetraits/types.h"

namespace phonetraits {

/// Every tunable constant of feature extraction. Defaults follow the study
/// setup: six-hour bins, AR(16), 00:00-06:00 nights, 100 m / 5-point DBSCAN,
/// Danish local time (UTC+1).
struct FeatureConfig {
  std::int64_t utc_offset_seconds = 3600;
  std::int64_t bin_width_seconds = 6 * 3600;
  int ar_order = 16;
  int night_start_hour = 0;
  int night_end_hour = 6;
  std::int64_t response_window_seconds = 3600;
  std::int64_t early_window_seconds = 91 * 86400;  // "first three months"
  std::int64_t contact_entropy_bin_seconds = 86400;
  double stationary_max_speed = 0.5;  // m/s
  std::int64_t gps_min_gap_seconds = 500;
  double dbscan_epsilon_meters = 100.0;
  int dbscan_min_points = 5;
  std::vector<int> autocovariance_lags = {1, 2, 3, 4};
};

/// Raw per-user features; a disengaged optional marks a missing value.
struct RawFeatures {
  std::string user_id;
  std::map<std::string, std::optional<double>> values;
};

/// Complete, finite feature values for one user.
struct FeatureVector {
  std::string user_id;
  std::map<std::string, double> values;
};

struct ActivitySeries {
  Timestamp bin_start = 0;
  std::int64_t bin_width = 6 * 3600;
  std::vector<double> counts;
};

struct ArFit {
  int order = 0;
  double mean = 0.0;  // intercept of the regression
  std::vector<double> coefficients;
  double residual_variance = 0.0;
};

inline constexpr int kNoiseCluster = -1;

struct LocationCluster {
  int cluster_id = 0;
  std::vector<int> member_points;  // indices into the clustered point list
  double centroid_latitude = 0.0;
  double centroid_longitude = 0.0;
};

struct DbscanResult {
  std::vector<int> labels;  // cluster id per point, kNoiseCluster for noise
  std::vector<bool> core;
  std::vector<LocationCluster> clusters;
};

struct InterEventStats {
  double median = 0.0;
  double stddev = 0.0;
};

struct MobilityStats {
  double distance_median = 0.0;
  double distance_std = 0.0;
  double gyration_median = 0.0;
  double gyration_std = 0.0;
  int days = 0;
};

struct HomeMetrics {
  int home_cluster = kNoiseCluster;
  double home_fraction = 0.0;
  bool fell_back_to_largest = false;
};

struct ProximityFeatures {
  std::optional<double> fraction_with_contact;
  std::optional<double> entropy;
  std::map<int, std::optional<double>> autocovariance;  // lag -> value
  std::optional<ArFit> ar;
};

// Shannon entropy in bits of a count distribution; empty or all-zero input
// yields nullopt. Non-negative; 0 iff a single category.
std::optional<double> EntropyBits(std::span<const double> counts);

std::optional<double> InteractionEntropy(
    const std::map<std::string, int>& interaction_counts);

// Median and population standard deviation of consecutive gaps. Needs at
// least three events.
std::optional<InterEventStats> ComputeInterEventStats(
    std::span<const Timestamp> sorted_timestamps);

// Counts per bin from the bin holding the first event to the bin holding the
// last one; bins are aligned to local midnight.
ActivitySeries BinActivity(std::span<const Timestamp> timestamps,
                           std::int64_t bin_width,
                           std::int64_t utc_offset_seconds);

// Least-squares AR(p) with intercept. Requires series length >= 3p; a
// rank-deficient design is solved in the minimum-norm sense.
std::optional<ArFit> FitAr(std::span<const double> series, int order);

// Sample autocovariance normalized by series length.
std::optional<double> Autocovariance(std::span<const double> series, int lag);

// Greedy 500 s subsampling followed by the velocity test against the next
// retained point.
std::vector<GpsPoint> SubsampleGps(std::span<const GpsPoint> gps,
                                   std::int64_t min_gap_seconds);
std::vector<GpsPoint> StationaryPoints(std::span<const GpsPoint> gps,
                                       const FeatureConfig& config = {});

DbscanResult ClusterLocations(std::span<const GpsPoint> points,
                              double epsilon_meters, int min_points);

std::optional<double> LocationEntropy(
    std::span<const LocationCluster> clusters);

std::optional<MobilityStats> DailyMobilityStats(
    std::span<const GpsPoint> gps, const FeatureConfig& config = {});

// Home is the cluster holding most weeknight (Mon-Fri, night window)
// stationary points; the fraction is over all stationary points.
std::optional<HomeMetrics> ComputeHomeMetrics(
    std::span<const GpsPoint> stationary, const DbscanResult& clustering,
    const FeatureConfig& config = {});

ProximityFeatures ComputeProximityFeatures(
    std::span<const ProximityScan> scans, const FeatureConfig& config = {});

// Call/text counts, ratios, response and night fractions, durations and the
// friend count.
std::map<std::string, std::optional<double>> SimpleRatios(
    const UserRecord& user, const FeatureConfig& config = {});

// Canonical, ordered feature-name set emitted for every user.
std::vector<std::string> CanonicalFeatureNames(const FeatureConfig& config);

// Human-readable feature description -> canonical feature name.
const std::vector<std::pair<std::string, std::string>>& FeatureDescriptionMap();

RawFeatures ExtractUser(const UserRecord& user, const FeatureConfig& config);

// Local calendar helpers shared with the generator.
std::int64_t LocalDayIndex(Timestamp t, std::int64_t utc_offset_seconds);
int LocalHour(Timestamp t, std::int64_t utc_offset_seconds);
// 0 = Monday ... 6 = Sunday.
int LocalWeekday(Timestamp t, std::int64_t utc_offset_seconds);

}  // namespace phonetraits

#endif  // PHONETRAITS_FEATURES_H_
