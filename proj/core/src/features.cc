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

#include "phonetraits/features.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>
#include <set>
#include <unordered_map>

#include <Eigen/Dense>

#include "phonetraits/geo.h"
#include "phonetraits/linalg.h"

namespace phonetraits {
namespace {

constexpr std::int64_t kDay = 86400;

std::int64_t FloorDiv(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

using FeatureMap = std::map<std::string, std::optional<double>>;

std::optional<double> Ratio(double num, double den) {
  if (den <= 0.0) return std::nullopt;
  return num / den;
}

std::string Indexed(const std::string& prefix, int i) {
  return prefix + std::to_string(i);
}

// Incoming events that got an outgoing event to the same counterpart
// afterwards. Returns (responded within window, incoming count, delays).
template <typename Event>
void ResponseStats(const std::vector<Event>& events, std::int64_t window,
                   int& responded, int& incoming, std::vector<double>& delays) {
  std::unordered_map<std::string, std::vector<Timestamp>> outgoing;
  for (const Event& e : events)
    if (e.direction == Direction::kOut) outgoing[e.counterpart].push_back(e.timestamp);
  responded = 0;
  incoming = 0;
  for (const Event& e : events) {
    if (e.direction != Direction::kIn) continue;
    ++incoming;
    auto it = outgoing.find(e.counterpart);
    if (it == outgoing.end()) continue;
    auto next = std::upper_bound(it->second.begin(), it->second.end(), e.timestamp);
    if (next == it->second.end()) continue;
    const double delay = static_cast<double>(*next - e.timestamp);
    delays.push_back(delay);
    if (delay <= static_cast<double>(window)) ++responded;
  }
}

template <typename Event>
std::vector<Timestamp> Timestamps(const std::vector<Event>& events) {
  std::vector<Timestamp> ts;
  ts.reserve(events.size());
  for (const Event& e : events) ts.push_back(e.timestamp);
  return ts;
}

template <typename Event>
std::map<std::string, int> ContactCounts(const std::vector<Event>& events) {
  std::map<std::string, int> counts;
  for (const Event& e : events) ++counts[e.counterpart];
  return counts;
}

struct CombinedEvent {
  Timestamp timestamp;
  const std::string* counterpart;
  Direction direction;
};

std::vector<CombinedEvent> Combine(const UserRecord& user) {
  std::vector<CombinedEvent> all;
  all.reserve(user.calls.size() + user.texts.size());
  for (const auto& c : user.calls) all.push_back({c.timestamp, &c.counterpart, c.direction});
  for (const auto& t : user.texts) all.push_back({t.timestamp, &t.counterpart, t.direction});
  std::stable_sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
    return a.timestamp < b.timestamp;
  });
  return all;
}

void PutInterEvent(FeatureMap& out, const std::string& prefix,
                   std::span<const Timestamp> ts) {
  const auto stats = ComputeInterEventStats(ts);
  out[prefix + "_iet_median"] = stats ? std::optional(stats->median) : std::nullopt;
  out[prefix + "_iet_std"] = stats ? std::optional(stats->stddev) : std::nullopt;
}

void PutAr(FeatureMap& out, const std::string& prefix, int order,
           const std::optional<ArFit>& fit) {
  for (int i = 1; i <= order; ++i) {
    out[Indexed(prefix, i)] =
        fit ? std::optional(fit->coefficients[i - 1]) : std::nullopt;
  }
}

std::optional<ArFit> ArOfTimestamps(std::span<const Timestamp> ts,
                                    const FeatureConfig& config) {
  if (ts.empty()) return std::nullopt;
  const ActivitySeries s =
      BinActivity(ts, config.bin_width_seconds, config.utc_offset_seconds);
  return FitAr(s.counts, config.ar_order);
}

std::optional<double> ContactEntropyPerBin(
    const std::vector<CombinedEvent>& events, const FeatureConfig& config) {
  std::map<std::int64_t, std::map<std::string, int>> per_bin;
  for (const auto& e : events) {
    const std::int64_t bin = FloorDiv(e.timestamp + config.utc_offset_seconds,
                                      config.contact_entropy_bin_seconds);
    ++per_bin[bin][*e.counterpart];
  }
  if (per_bin.empty()) return std::nullopt;
  double total = 0.0;
  for (const auto& [bin, counts] : per_bin) total += *InteractionEntropy(counts);
  return total / static_cast<double>(per_bin.size());
}

}  // namespace

std::int64_t LocalDayIndex(Timestamp t, std::int64_t utc_offset_seconds) {
  return FloorDiv(t + utc_offset_seconds, kDay);
}

int LocalHour(Timestamp t, std::int64_t utc_offset_seconds) {
  const std::int64_t local = t + utc_offset_seconds;
  return static_cast<int>((local - FloorDiv(local, kDay) * kDay) / 3600);
}

int LocalWeekday(Timestamp t, std::int64_t utc_offset_seconds) {
  // 1970-01-01 was a Thursday.
  const std::int64_t day = LocalDayIndex(t, utc_offset_seconds);
  return static_cast<int>(((day + 3) % 7 + 7) % 7);
}

std::optional<double> EntropyBits(std::span<const double> counts) {
  double total = 0.0;
  for (double c : counts) total += c;
  if (!(total > 0.0)) return std::nullopt;
  double h = 0.0;
  for (double c : counts) {
    if (c <= 0.0) continue;
    const double p = c / total;
    h -= p * std::log2(p);
  }
  return std::max(0.0, h);
}

std::optional<double> InteractionEntropy(
    const std::map<std::string, int>& interaction_counts) {
  std::vector<double> counts;
  counts.reserve(interaction_counts.size());
  for (const auto& [contact, n] : interaction_counts) counts.push_back(n);
  return EntropyBits(counts);
}

std::optional<InterEventStats> ComputeInterEventStats(
    std::span<const Timestamp> sorted_timestamps) {
  if (sorted_timestamps.size() < 3) return std::nullopt;
  std::vector<double> gaps;
  gaps.reserve(sorted_timestamps.size() - 1);
  for (std::size_t i = 1; i < sorted_timestamps.size(); ++i)
    gaps.push_back(static_cast<double>(sorted_timestamps[i] - sorted_timestamps[i - 1]));
  return InterEventStats{Median(gaps), PopulationStd(gaps)};
}

ActivitySeries BinActivity(std::span<const Timestamp> timestamps,
                           std::int64_t bin_width,
                           std::int64_t utc_offset_seconds) {
  if (bin_width <= 0) throw InvalidArgument("bin width must be positive");
  ActivitySeries series;
  series.bin_width = bin_width;
  if (timestamps.empty()) return series;
  const auto [lo, hi] = std::minmax_element(timestamps.begin(), timestamps.end());
  const std::int64_t first = FloorDiv(*lo + utc_offset_seconds, bin_width);
  const std::int64_t last = FloorDiv(*hi + utc_offset_seconds, bin_width);
  series.bin_start = first * bin_width - utc_offset_seconds;
  series.counts.assign(static_cast<std::size_t>(last - first + 1), 0.0);
  for (Timestamp t : timestamps)
    series.counts[FloorDiv(t + utc_offset_seconds, bin_width) - first] += 1.0;
  return series;
}

std::optional<ArFit> FitAr(std::span<const double> series, int order) {
  if (order < 1) throw InvalidArgument("AR order must be >= 1");
  const auto n = static_cast<Eigen::Index>(series.size());
  if (n < 3 * order) return std::nullopt;
  const Eigen::Index rows = n - order;
  Eigen::MatrixXd design(rows, order + 1);
  Eigen::VectorXd target(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Eigen::Index t = r + order;
    design(r, 0) = 1.0;
    for (int i = 1; i <= order; ++i) design(r, i) = series[t - i];
    target(r) = series[t];
  }
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(design);
  const Eigen::VectorXd beta = cod.solve(target);
  ArFit fit;
  fit.order = order;
  fit.mean = beta(0);
  fit.coefficients.assign(beta.data() + 1, beta.data() + 1 + order);
  fit.residual_variance =
      (target - design * beta).squaredNorm() / static_cast<double>(rows);
  return fit;
}

std::optional<double> Autocovariance(std::span<const double> series, int lag) {
  if (lag < 1) throw InvalidArgument("lag must be >= 1");
  const auto n = series.size();
  if (n <= static_cast<std::size_t>(lag)) return std::nullopt;
  const double mean = Mean(series);
  double acc = 0.0;
  for (std::size_t t = 0; t + lag < n; ++t)
    acc += (series[t] - mean) * (series[t + lag] - mean);
  return acc / static_cast<double>(n);
}

std::vector<GpsPoint> SubsampleGps(std::span<const GpsPoint> gps,
                                   std::int64_t min_gap_seconds) {
  std::vector<GpsPoint> kept;
  for (const GpsPoint& p : gps) {
    if (kept.empty() || p.timestamp - kept.back().timestamp >= min_gap_seconds)
      kept.push_back(p);
  }
  return kept;
}

std::vector<GpsPoint> StationaryPoints(std::span<const GpsPoint> gps,
                                       const FeatureConfig& config) {
  const std::vector<GpsPoint> sub = SubsampleGps(gps, config.gps_min_gap_seconds);
  std::vector<GpsPoint> stationary;
  if (sub.size() < 2) return stationary;
  for (std::size_t i = 0; i + 1 < sub.size(); ++i) {
    const double d = geo::HaversineMeters(sub[i].latitude, sub[i].longitude,
                                          sub[i + 1].latitude, sub[i + 1].longitude);
    const double dt = static_cast<double>(sub[i + 1].timestamp - sub[i].timestamp);
    if (d / dt <= config.stationary_max_speed) stationary.push_back(sub[i]);
  }
  return stationary;
}

DbscanResult ClusterLocations(std::span<const GpsPoint> points,
                              double epsilon_meters, int min_points) {
  if (!(epsilon_meters > 0.0) || min_points < 1)
    throw InvalidArgument("DBSCAN needs epsilon > 0 and min_points >= 1");
  const int n = static_cast<int>(points.size());
  DbscanResult result;
  result.labels.assign(n, kNoiseCluster);
  result.core.assign(n, false);
  if (n == 0) return result;

  // Latitude-sorted sweep bounds the candidate pairs.
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return points[a].latitude < points[b].latitude;
  });
  const double lat_window =
      epsilon_meters / geo::kEarthRadiusMeters * 180.0 / std::numbers::pi * 1.0001;
  std::vector<std::vector<int>> neighbors(n);
  for (int a = 0; a < n; ++a) {
    const GpsPoint& pa = points[order[a]];
    for (int b = a; b < n; ++b) {
      const GpsPoint& pb = points[order[b]];
      if (pb.latitude - pa.latitude > lat_window) break;
      if (geo::HaversineMeters(pa.latitude, pa.longitude, pb.latitude,
                               pb.longitude) <= epsilon_meters) {
        neighbors[order[a]].push_back(order[b]);
        if (b != a) neighbors[order[b]].push_back(order[a]);
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    std::sort(neighbors[i].begin(), neighbors[i].end());
    result.core[i] = static_cast<int>(neighbors[i].size()) >= min_points;
  }

  std::vector<bool> visited(n, false);
  int next_id = 0;
  for (int i = 0; i < n; ++i) {
    if (visited[i] || !result.core[i]) continue;
    const int id = next_id++;
    std::deque<int> queue{i};
    visited[i] = true;
    result.labels[i] = id;
    while (!queue.empty()) {
      const int p = queue.front();
      queue.pop_front();
      if (!result.core[p]) continue;
      for (int q : neighbors[p]) {
        if (result.labels[q] == kNoiseCluster) result.labels[q] = id;
        if (!visited[q] && result.core[q]) {
          visited[q] = true;
          queue.push_back(q);
        }
      }
    }
  }

  result.clusters.resize(next_id);
  for (int c = 0; c < next_id; ++c) result.clusters[c].cluster_id = c;
  for (int i = 0; i < n; ++i) {
    if (result.labels[i] == kNoiseCluster) continue;
    LocationCluster& c = result.clusters[result.labels[i]];
    c.member_points.push_back(i);
    c.centroid_latitude += points[i].latitude;
    c.centroid_longitude += points[i].longitude;
  }
  for (LocationCluster& c : result.clusters) {
    c.centroid_latitude /= static_cast<double>(c.member_points.size());
    c.centroid_longitude /= static_cast<double>(c.member_points.size());
  }
  return result;
}

std::optional<double> LocationEntropy(std::span<const LocationCluster> clusters) {
  std::vector<double> counts;
  for (const LocationCluster& c : clusters)
    if (!c.member_points.empty()) counts.push_back(static_cast<double>(c.member_points.size()));
  return EntropyBits(counts);
}

std::optional<MobilityStats> DailyMobilityStats(std::span<const GpsPoint> gps,
                                                const FeatureConfig& config) {
  const std::vector<GpsPoint> sub = SubsampleGps(gps, config.gps_min_gap_seconds);
  std::map<std::int64_t, std::vector<GpsPoint>> days;
  for (const GpsPoint& p : sub)
    days[LocalDayIndex(p.timestamp, config.utc_offset_seconds)].push_back(p);

  std::vector<double> distances;
  std::vector<double> gyrations;
  for (const auto& [day, pts] : days) {
    if (pts.size() < 2) continue;
    double distance = 0.0;
    double lat0 = 0.0, lon0 = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      lat0 += pts[i].latitude;
      lon0 += pts[i].longitude;
      if (i > 0)
        distance += geo::HaversineMeters(pts[i - 1].latitude, pts[i - 1].longitude,
                                         pts[i].latitude, pts[i].longitude);
    }
    lat0 /= static_cast<double>(pts.size());
    lon0 /= static_cast<double>(pts.size());
    std::vector<geo::PlanarPoint> planar;
    planar.reserve(pts.size());
    for (const GpsPoint& p : pts)
      planar.push_back(geo::ProjectAzimuthalEquidistant(lat0, lon0, p.latitude, p.longitude));
    distances.push_back(distance);
    gyrations.push_back(geo::MinimalEnclosingCircle(planar).radius);
  }
  if (distances.empty()) return std::nullopt;
  MobilityStats s;
  s.distance_median = Median(distances);
  s.distance_std = PopulationStd(distances);
  s.gyration_median = Median(gyrations);
  s.gyration_std = PopulationStd(gyrations);
  s.days = static_cast<int>(distances.size());
  return s;
}

std::optional<HomeMetrics> ComputeHomeMetrics(std::span<const GpsPoint> stationary,
                                              const DbscanResult& clustering,
                                              const FeatureConfig& config) {
  if (clustering.clusters.empty() || stationary.empty()) return std::nullopt;
  const std::size_t k = clustering.clusters.size();
  std::vector<int> night(k, 0);
  for (std::size_t i = 0; i < stationary.size(); ++i) {
    const int label = clustering.labels[i];
    if (label == kNoiseCluster) continue;
    const int hour = LocalHour(stationary[i].timestamp, config.utc_offset_seconds);
    const int weekday = LocalWeekday(stationary[i].timestamp, config.utc_offset_seconds);
    if (weekday <= 4 && hour >= config.night_start_hour && hour < config.night_end_hour)
      ++night[label];
  }
  HomeMetrics m;
  const auto best_night = std::max_element(night.begin(), night.end());
  if (*best_night > 0) {
    m.home_cluster = static_cast<int>(best_night - night.begin());
  } else {
    m.fell_back_to_largest = true;
    std::size_t best = 0;
    for (std::size_t c = 1; c < k; ++c)
      if (clustering.clusters[c].member_points.size() >
          clustering.clusters[best].member_points.size())
        best = c;
    m.home_cluster = static_cast<int>(best);
  }
  m.home_fraction =
      static_cast<double>(clustering.clusters[m.home_cluster].member_points.size()) /
      static_cast<double>(stationary.size());
  return m;
}

ProximityFeatures ComputeProximityFeatures(std::span<const ProximityScan> scans,
                                           const FeatureConfig& config) {
  ProximityFeatures f;
  for (int lag : config.autocovariance_lags) f.autocovariance[lag] = std::nullopt;
  if (scans.empty()) return f;

  std::map<std::string, int> peer_counts;
  int with_contact = 0;
  std::vector<Timestamp> timestamps;
  std::vector<Timestamp> contact_times;
  for (const ProximityScan& s : scans) {
    timestamps.push_back(s.timestamp);
    if (s.detected.empty()) continue;
    ++with_contact;
    contact_times.push_back(s.timestamp);
    for (const std::string& peer : s.detected) ++peer_counts[peer];
  }
  f.fraction_with_contact =
      static_cast<double>(with_contact) / static_cast<double>(scans.size());
  f.entropy = InteractionEntropy(peer_counts);

  // Binary per-bin series over the whole scanning period.
  const ActivitySeries all =
      BinActivity(timestamps, config.bin_width_seconds, config.utc_offset_seconds);
  std::vector<double> binary(all.counts.size(), 0.0);
  for (Timestamp t : contact_times) {
    const std::int64_t idx =
        FloorDiv(t - all.bin_start, config.bin_width_seconds);
    binary[static_cast<std::size_t>(idx)] = 1.0;
  }
  for (int lag : config.autocovariance_lags) f.autocovariance[lag] = Autocovariance(binary, lag);
  f.ar = FitAr(binary, config.ar_order);
  return f;
}

FeatureMap SimpleRatios(const UserRecord& user, const FeatureConfig& config) {
  FeatureMap out;
  const double n_calls = static_cast<double>(user.calls.size());
  const double n_texts = static_cast<double>(user.texts.size());
  out["n_calls"] = n_calls;
  out["n_texts"] = n_texts;
  out["n_calltext"] = n_calls + n_texts;
  out["facebook_friends"] = static_cast<double>(user.facebook_friends);

  const auto outgoing = [](const auto& events) {
    return static_cast<double>(std::count_if(events.begin(), events.end(), [](const auto& e) {
      return e.direction == Direction::kOut;
    }));
  };
  out["call_outgoing_fraction"] = Ratio(outgoing(user.calls), n_calls);
  out["text_outgoing_fraction"] = Ratio(outgoing(user.texts), n_texts);

  const auto call_contacts = ContactCounts(user.calls);
  const auto text_contacts = ContactCounts(user.texts);
  std::set<std::string> all_contacts;
  for (const auto& [c, n] : call_contacts) all_contacts.insert(c);
  for (const auto& [c, n] : text_contacts) all_contacts.insert(c);
  out["n_contacts"] = static_cast<double>(all_contacts.size());
  out["call_contact_ratio"] = Ratio(static_cast<double>(call_contacts.size()), n_calls);
  out["text_contact_ratio"] = Ratio(static_cast<double>(text_contacts.size()), n_texts);
  out["calltext_contact_ratio"] =
      Ratio(static_cast<double>(all_contacts.size()), n_calls + n_texts);

  const auto combined = Combine(user);
  if (combined.empty()) {
    out["n_contacts_first_3_months"] = 0.0;
  } else {
    const Timestamp cutoff = combined.front().timestamp + config.early_window_seconds;
    std::set<std::string> early;
    for (const auto& e : combined)
      if (e.timestamp < cutoff) early.insert(*e.counterpart);
    out["n_contacts_first_3_months"] = static_cast<double>(early.size());
  }

  int responded = 0, incoming = 0;
  std::vector<double> delays;
  ResponseStats(user.calls, config.response_window_seconds, responded, incoming, delays);
  out["call_response_fraction"] = Ratio(responded, incoming);
  delays.clear();
  ResponseStats(user.texts, config.response_window_seconds, responded, incoming, delays);
  out["text_response_fraction"] = Ratio(responded, incoming);
  out["text_response_time_median"] =
      delays.empty() ? std::nullopt : std::optional(Median(delays));

  int night = 0;
  for (const CallEvent& c : user.calls) {
    const int hour = LocalHour(c.timestamp, config.utc_offset_seconds);
    if (hour >= config.night_start_hour && hour < config.night_end_hour) ++night;
  }
  out["night_call_fraction"] = Ratio(night, n_calls);

  if (user.calls.empty()) {
    out["call_duration_median"] = std::nullopt;
    out["call_duration_std"] = std::nullopt;
  } else {
    std::vector<double> durations;
    for (const CallEvent& c : user.calls) durations.push_back(c.duration);
    out["call_duration_median"] = Median(durations);
    out["call_duration_std"] = PopulationStd(durations);
  }
  return out;
}

std::vector<std::string> CanonicalFeatureNames(const FeatureConfig& config) {
  std::vector<std::string> names = {
      "n_calls", "n_texts", "n_calltext", "facebook_friends",
      "call_outgoing_fraction", "text_outgoing_fraction", "n_contacts",
      "n_contacts_first_3_months", "call_contact_ratio", "text_contact_ratio",
      "calltext_contact_ratio", "call_response_fraction",
      "text_response_fraction", "text_response_time_median",
      "night_call_fraction", "call_duration_median", "call_duration_std",
      "call_iet_median", "call_iet_std", "text_iet_median", "text_iet_std",
      "calltext_iet_median", "calltext_iet_std", "call_entropy",
      "text_entropy", "calltext_entropy", "contact_entropy_24h",
      "location_entropy", "n_location_clusters", "home_fraction",
      "daily_distance_median", "daily_distance_std", "gyration_median",
      "gyration_std", "bt_contact_fraction", "bt_entropy"};
  for (int lag : config.autocovariance_lags) names.push_back(Indexed("bt_autocov_lag_", lag));
  for (int i = 1; i <= config.ar_order; ++i) names.push_back(Indexed("ar_in_coef_", i));
  for (int i = 1; i <= config.ar_order; ++i) names.push_back(Indexed("ar_out_coef_", i));
  for (int i = 1; i <= config.ar_order; ++i) names.push_back(Indexed("bt_ar_coef_", i));
  return names;
}

const std::vector<std::pair<std::string, std::string>>& FeatureDescriptionMap() {
  static const std::vector<std::pair<std::string, std::string>> kMap = {
      {"Bluetooth autocovariance coefficient", "bt_autocov_lag_1"},
      {"Contact entropy using 24-hour bins", "contact_entropy_24h"},
      {"Call duration (median)", "call_duration_median"},
      {"Call duration (standard deviation)", "call_duration_std"},
      {"Call inter-event time (standard deviation)", "call_iet_std"},
      {"Percent of a user's calls initiated by themselves", "call_outgoing_fraction"},
      {"Call/text contact-interaction ratio", "calltext_contact_ratio"},
      {"Call/text inter-event time median", "calltext_iet_median"},
      {"Combined call/text inter-event time (standard deviation)", "calltext_iet_std"},
      {"Ingoing call/text autoregressive series coefficient 13", "ar_in_coef_13"},
      {"Ingoing call/text autoregressive series coefficient 4", "ar_in_coef_4"},
      {"Number of contacts during the first three months", "n_contacts_first_3_months"},
      {"Number of call/text events", "n_calltext"},
      {"Number of texts", "n_texts"},
      {"Number of Facebook friends", "facebook_friends"},
      {"Outgoing call/text AR series coefficient 2", "ar_out_coef_2"},
      {"Outgoing call/text AR series coefficient 4", "ar_out_coef_4"},
      {"Text contact/interaction ratio", "text_contact_ratio"},
      {"Text inter-event time (median)", "text_iet_median"},
      {"Text inter-event time (standard deviation)", "text_iet_std"},
      {"Median text response time", "text_response_time_median"},
      {"Fraction of texts that were outgoing", "text_outgoing_fraction"},
      {"fraction of texts responded to within an hour", "text_response_fraction"},
  };
  return kMap;
}

RawFeatures ExtractUser(const UserRecord& user, const FeatureConfig& config) {
  RawFeatures raw;
  raw.user_id = user.user_id;
  FeatureMap& out = raw.values;
  out = SimpleRatios(user, config);

  const auto call_ts = Timestamps(user.calls);
  const auto text_ts = Timestamps(user.texts);
  const auto combined = Combine(user);
  std::vector<Timestamp> combined_ts, in_ts, out_ts;
  std::map<std::string, int> combined_counts;
  for (const auto& e : combined) {
    combined_ts.push_back(e.timestamp);
    (e.direction == Direction::kIn ? in_ts : out_ts).push_back(e.timestamp);
    ++combined_counts[*e.counterpart];
  }
  PutInterEvent(out, "call", call_ts);
  PutInterEvent(out, "text", text_ts);
  PutInterEvent(out, "calltext", combined_ts);
  out["call_entropy"] = InteractionEntropy(ContactCounts(user.calls));
  out["text_entropy"] = InteractionEntropy(ContactCounts(user.texts));
  out["calltext_entropy"] = InteractionEntropy(combined_counts);
  out["contact_entropy_24h"] = ContactEntropyPerBin(combined, config);

  PutAr(out, "ar_in_coef_", config.ar_order, ArOfTimestamps(in_ts, config));
  PutAr(out, "ar_out_coef_", config.ar_order, ArOfTimestamps(out_ts, config));

  const auto stationary = StationaryPoints(user.gps, config);
  const DbscanResult clusters = ClusterLocations(
      stationary, config.dbscan_epsilon_meters, config.dbscan_min_points);
  out["location_entropy"] = LocationEntropy(clusters.clusters);
  out["n_location_clusters"] = static_cast<double>(clusters.clusters.size());
  const auto home = ComputeHomeMetrics(stationary, clusters, config);
  out["home_fraction"] = home ? std::optional(home->home_fraction) : std::nullopt;
  const auto mobility = DailyMobilityStats(user.gps, config);
  out["daily_distance_median"] = mobility ? std::optional(mobility->distance_median) : std::nullopt;
  out["daily_distance_std"] = mobility ? std::optional(mobility->distance_std) : std::nullopt;
  out["gyration_median"] = mobility ? std::optional(mobility->gyration_median) : std::nullopt;
  out["gyration_std"] = mobility ? std::optional(mobility->gyration_std) : std::nullopt;

  const ProximityFeatures prox = ComputeProximityFeatures(user.scans, config);
  out["bt_contact_fraction"] = prox.fraction_with_contact;
  out["bt_entropy"] = prox.entropy;
  for (const auto& [lag, value] : prox.autocovariance)
    out[Indexed("bt_autocov_lag_", lag)] = value;
  PutAr(out, "bt_ar_coef_", config.ar_order, prox.ar);

  for (auto& [name, value] : out)
    if (value && !std::isfinite(*value)) value.reset();
  return raw;
}

}  // namespace phonetraits
