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

#include "phonetraits/synth.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <ostream>
#include <random>

#include "json.hpp"
#include "phonetraits/features.h"
#include "phonetraits/linalg.h"
#include "phonetraits/scoring.h"

namespace phonetraits {
namespace {

constexpr double kEarthRadius = 6371000.0;

// Stream identifiers for the keyed generators.
enum Stream : std::uint64_t {
  kProfile = 1,
  kTexts,
  kCalls,
  kGps,
  kScans,
  kPeers,
  kAnswers,
  kPlanted,
};

using Rng = std::mt19937_64;

Rng StreamRng(std::uint64_t seed, std::uint64_t user, Stream stream) {
  return Rng(MixSeed(seed, user, stream));
}

std::string UserId(int u) {
  std::string id = std::to_string(u);
  return "u" + std::string(id.size() < 4 ? 4 - id.size() : 0, '0') + id;
}

struct Place {
  double latitude;
  double longitude;
};

Place Offset(const Place& origin, double east_m, double north_m) {
  const double lat = origin.latitude + north_m / kEarthRadius * 180.0 / std::numbers::pi;
  const double lon = origin.longitude +
                     east_m / (kEarthRadius * std::cos(origin.latitude * std::numbers::pi / 180.0)) *
                         180.0 / std::numbers::pi;
  return {lat, lon};
}

Place UniformInDisc(const Place& center, double radius, Rng& rng) {
  std::uniform_real_distribution<double> unit;
  const double r = radius * std::sqrt(unit(rng));
  const double a = 2.0 * std::numbers::pi * unit(rng);
  return Offset(center, r * std::cos(a), r * std::sin(a));
}

// Relative event intensity per local hour: quiet nights, busy evenings.
const std::vector<double>& HourWeights() {
  static const std::vector<double> kWeights = {
      0.3, 0.15, 0.1, 0.1, 0.1, 0.2, 0.5, 1.0, 1.3, 1.4, 1.4, 1.5,
      1.6, 1.5, 1.4, 1.4, 1.5, 1.7, 1.9, 2.0, 2.0, 1.8, 1.3, 0.7};
  return kWeights;
}

std::vector<double> ZipfWeights(int contacts, double exponent) {
  std::vector<double> w(contacts);
  for (int i = 0; i < contacts; ++i) w[i] = std::pow(static_cast<double>(i + 1), -exponent);
  return w;
}

struct UserPlan {
  UserTruth truth;
  double text_out_probability = 0.5;
  double call_out_probability = 0.5;
  double zipf_exponent = 0.0;
  Place errand{};
};

Timestamp RandomEventTime(const SynthConfig& cfg, Rng& rng) {
  std::uniform_int_distribution<int> day(0, cfg.days - 1);
  std::discrete_distribution<int> hour(HourWeights().begin(), HourWeights().end());
  std::uniform_int_distribution<int> second(0, 3599);
  return cfg.start + static_cast<Timestamp>(day(rng)) * 86400 +
         static_cast<Timestamp>(hour(rng)) * 3600 + second(rng);
}

UserPlan PlanUser(const SynthConfig& cfg, int u) {
  Rng rng = StreamRng(cfg.seed, u, kProfile);
  UserPlan plan;
  plan.truth.user_id = UserId(u);
  std::lognormal_distribution<double> spread(0.0, cfg.rate_spread);
  plan.truth.text_rate_per_day = std::max(cfg.min_rate_per_day, cfg.text_rate_per_day * spread(rng));
  plan.truth.call_rate_per_day = std::max(cfg.min_rate_per_day, cfg.call_rate_per_day * spread(rng));
  std::uniform_int_distribution<int> contacts(cfg.min_contacts, cfg.max_contacts);
  plan.truth.contacts = contacts(rng);
  std::uniform_real_distribution<double> unit;
  plan.zipf_exponent = cfg.max_zipf_exponent * unit(rng);
  plan.truth.contact_entropy_bits = ZipfEntropyBits(plan.truth.contacts, plan.zipf_exponent);
  plan.text_out_probability = 0.25 + 0.5 * unit(rng);
  plan.call_out_probability = 0.25 + 0.5 * unit(rng);
  const Place city{cfg.city_latitude, cfg.city_longitude};
  const Place home = UniformInDisc(city, cfg.city_radius_meters, rng);
  const Place work = UniformInDisc(city, cfg.city_radius_meters, rng);
  plan.errand = UniformInDisc(city, cfg.city_radius_meters, rng);
  plan.truth.home_latitude = home.latitude;
  plan.truth.home_longitude = home.longitude;
  plan.truth.work_latitude = work.latitude;
  plan.truth.work_longitude = work.longitude;
  return plan;
}

std::string ContactId(int u, int c) { return "c" + std::to_string(u) + "_" + std::to_string(c); }

void GenerateTexts(const SynthConfig& cfg, int u, const UserPlan& plan, UserRecord& rec) {
  Rng rng = StreamRng(cfg.seed, u, kTexts);
  std::poisson_distribution<int> count(plan.truth.text_rate_per_day * cfg.days);
  const auto weights = ZipfWeights(plan.truth.contacts, plan.zipf_exponent);
  std::discrete_distribution<int> contact(weights.begin(), weights.end());
  std::bernoulli_distribution outgoing(plan.text_out_probability);
  std::bernoulli_distribution reply(cfg.reply_probability);
  std::exponential_distribution<double> delay(1.0 / cfg.mean_reply_delay_seconds);
  const int n = count(rng);
  for (int i = 0; i < n; ++i) {
    TextEvent e;
    e.timestamp = RandomEventTime(cfg, rng);
    e.counterpart = ContactId(u, contact(rng));
    e.direction = outgoing(rng) ? Direction::kOut : Direction::kIn;
    const bool replied = e.direction == Direction::kIn && reply(rng);
    const double wait = delay(rng);
    rec.texts.push_back(e);
    if (replied) {
      TextEvent r = e;
      r.direction = Direction::kOut;
      r.timestamp = e.timestamp + 1 + static_cast<Timestamp>(wait);
      rec.texts.push_back(std::move(r));
    }
  }
  std::sort(rec.texts.begin(), rec.texts.end());
}

void GenerateCalls(const SynthConfig& cfg, int u, const UserPlan& plan, UserRecord& rec) {
  Rng rng = StreamRng(cfg.seed, u, kCalls);
  std::poisson_distribution<int> count(plan.truth.call_rate_per_day * cfg.days);
  const auto weights = ZipfWeights(plan.truth.contacts, plan.zipf_exponent);
  std::discrete_distribution<int> contact(weights.begin(), weights.end());
  std::bernoulli_distribution outgoing(plan.call_out_probability);
  std::exponential_distribution<double> duration(1.0 / cfg.mean_call_duration_seconds);
  const int n = count(rng);
  for (int i = 0; i < n; ++i) {
    CallEvent e;
    e.timestamp = RandomEventTime(cfg, rng);
    e.counterpart = ContactId(u, contact(rng));
    e.direction = outgoing(rng) ? Direction::kOut : Direction::kIn;
    e.duration = std::round(duration(rng));
    rec.calls.push_back(std::move(e));
  }
  std::sort(rec.calls.begin(), rec.calls.end());
}

// Nights and evenings at home, weekday office hours at work, Saturday
// afternoons at a user-specific errand spot.
void GenerateGps(const SynthConfig& cfg, int u, const UserPlan& plan, UserRecord& rec) {
  Rng rng = StreamRng(cfg.seed, u, kGps);
  std::normal_distribution<double> jitter(0.0, cfg.jitter_meters / 2.0);
  const Place home{plan.truth.home_latitude, plan.truth.home_longitude};
  const Place work{plan.truth.work_latitude, plan.truth.work_longitude};
  const Timestamp end = cfg.start + static_cast<Timestamp>(cfg.days) * 86400;
  for (Timestamp t = cfg.start; t < end; t += cfg.gps_interval_seconds) {
    const int hour = LocalHour(t, cfg.utc_offset_seconds);
    const int weekday = LocalWeekday(t, cfg.utc_offset_seconds);
    const Place* at = &home;
    if (weekday < 5 && hour >= 9 && hour < 17) at = &work;
    if (weekday == 5 && hour >= 12 && hour < 16) at = &plan.errand;
    double east = jitter(rng), north = jitter(rng);
    const double r = std::hypot(east, north);
    if (r > cfg.jitter_meters) {
      east *= cfg.jitter_meters / r;
      north *= cfg.jitter_meters / r;
    }
    const Place p = Offset(*at, east, north);
    rec.gps.push_back({t, p.latitude, p.longitude});
  }
}

void GenerateScans(const SynthConfig& cfg, int u, const std::vector<std::string>& peers,
                   UserRecord& rec) {
  Rng rng = StreamRng(cfg.seed, u, kScans);
  std::bernoulli_distribution seen(cfg.proximity_probability);
  std::bernoulli_distribution second(0.3);
  const Timestamp end = cfg.start + static_cast<Timestamp>(cfg.days) * 86400;
  for (Timestamp t = cfg.start; t < end; t += cfg.scan_interval_seconds) {
    ProximityScan scan;
    scan.timestamp = t;
    if (!peers.empty() && seen(rng)) {
      std::uniform_int_distribution<std::size_t> pick(0, peers.size() - 1);
      scan.detected.push_back(peers[pick(rng)]);
      if (second(rng)) scan.detected.push_back(peers[pick(rng)]);
      std::sort(scan.detected.begin(), scan.detected.end());
      scan.detected.erase(std::unique(scan.detected.begin(), scan.detected.end()),
                          scan.detected.end());
    }
    rec.scans.push_back(std::move(scan));
  }
}

std::vector<std::string> PeersOf(const SynthConfig& cfg, int u) {
  std::vector<int> others;
  for (int v = 0; v < cfg.n_users; ++v)
    if (v != u) others.push_back(v);
  Rng rng = StreamRng(cfg.seed, u, kPeers);
  std::shuffle(others.begin(), others.end(), rng);
  others.resize(std::min<std::size_t>(others.size(), cfg.peers_per_user));
  std::vector<std::string> ids;
  for (int v : others) ids.push_back(UserId(v));
  return ids;
}

// Unit direction of the signed key items of one trait.
Eigen::VectorXd KeyDirection(const ScoringKey& key, int trait) {
  Eigen::VectorXd v(kNumQuestions);
  for (int q = 0; q < kNumQuestions; ++q)
    v(q) = key.reverse_coded[q] ? -key.weights(trait, q) : key.weights(trait, q);
  return v.normalized();
}

Eigen::VectorXd PlantedDirection(const SynthConfig& cfg) {
  if (cfg.p_star.size() > 0) {
    if (cfg.p_star.size() != kNumQuestions) throw InvalidArgument("p_star must have 44 entries");
    if (cfg.p_star.norm() == 0.0) throw InvalidArgument("p_star must be nonzero");
    return cfg.p_star.normalized();
  }
  Rng rng = StreamRng(cfg.seed, 0, kPlanted);
  std::normal_distribution<double> normal;
  Eigen::VectorXd p(kNumQuestions);
  for (int q = 0; q < kNumQuestions; ++q) p(q) = normal(rng);
  p.normalize();
  if (cfg.key_alignment > 0.0) {
    const ScoringKey key = DefaultBfi44Key();
    const Eigen::VectorXd keyed =
        (KeyDirection(key, key.TraitIndex("E")) + KeyDirection(key, key.TraitIndex("N")))
            .normalized();
    p = ((1.0 - cfg.key_alignment) * p + cfg.key_alignment * keyed).normalized();
  }
  return p;
}

double SignalValue(const UserRecord& rec, const std::string& name, const FeatureConfig& fc) {
  auto simple = SimpleRatios(rec, fc);
  auto it = simple.find(name);
  std::optional<double> value;
  if (it != simple.end()) {
    value = it->second;
  } else {
    const RawFeatures raw = ExtractUser(rec, fc);
    auto jt = raw.values.find(name);
    if (jt == raw.values.end()) throw InvalidArgument("unknown signal feature: " + name);
    value = jt->second;
  }
  return value ? *value : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

double ZipfEntropyBits(int contacts, double exponent) {
  const auto w = ZipfWeights(contacts, exponent);
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  double h = 0.0;
  for (double x : w) h -= (x / total) * std::log2(x / total);
  return h;
}

SynthOutput GenerateCorpus(const SynthConfig& cfg) {
  if (cfg.n_users < 1 || cfg.days < 1) throw InvalidArgument("need at least one user and day");
  if (cfg.min_contacts < 1 || cfg.max_contacts < cfg.min_contacts)
    throw InvalidArgument("contact range is invalid");
  if (cfg.text_rate_per_day <= 0 || cfg.call_rate_per_day <= 0 || cfg.gps_interval_seconds <= 0 ||
      cfg.scan_interval_seconds <= 0)
    throw InvalidArgument("rates and intervals must be positive");
  if (cfg.sigma < 0 || cfg.noise_scale < 0) throw InvalidArgument("noise scales must be >= 0");

  SynthOutput out;
  GroundTruthRecord& truth = out.truth;
  const int n = cfg.n_users;
  out.records.resize(n);
  for (int u = 0; u < n; ++u) {
    const UserPlan plan = PlanUser(cfg, u);
    UserRecord& rec = out.records[u];
    rec.user_id = plan.truth.user_id;
    GenerateTexts(cfg, u, plan, rec);
    GenerateCalls(cfg, u, plan, rec);
    GenerateGps(cfg, u, plan, rec);
    GenerateScans(cfg, u, PeersOf(cfg, u), rec);
    Rng rng = StreamRng(cfg.seed, u, kProfile);
    rng.discard(64);
    std::lognormal_distribution<double> friends(std::log(cfg.facebook_friends_mean) - 0.18, 0.6);
    rec.facebook_friends = std::max(1, static_cast<int>(std::lround(friends(rng))));
    truth.users.push_back(plan.truth);
  }

  // Planted relation on the standardized realized signal features.
  FeatureConfig fc;
  fc.utc_offset_seconds = cfg.utc_offset_seconds;
  const auto m = static_cast<Eigen::Index>(cfg.signal_features.size());
  truth.signal_features = cfg.signal_features;
  truth.signal_values.resize(n, m);
  for (int u = 0; u < n; ++u)
    for (Eigen::Index j = 0; j < m; ++j)
      truth.signal_values(u, j) = SignalValue(out.records[u], cfg.signal_features[j], fc);
  for (Eigen::Index j = 0; j < m; ++j) {
    std::vector<double> present;
    for (int u = 0; u < n; ++u)
      if (std::isfinite(truth.signal_values(u, j))) present.push_back(truth.signal_values(u, j));
    const double fill = present.empty() ? 0.0 : Median(present);
    for (int u = 0; u < n; ++u)
      if (!std::isfinite(truth.signal_values(u, j))) truth.signal_values(u, j) = fill;
  }
  const Eigen::MatrixXd xs = Standardizer::Fit(truth.signal_values).Apply(truth.signal_values);

  truth.p_star = PlantedDirection(cfg);
  if (cfg.alpha_star.size() > 0) {
    if (cfg.alpha_star.size() != m) throw InvalidArgument("alpha_star length must match signals");
    truth.alpha_star = cfg.alpha_star;
  } else {
    Rng rng = StreamRng(cfg.seed, 1, kPlanted);
    std::normal_distribution<double> normal;
    truth.alpha_star.resize(m);
    for (Eigen::Index j = 0; j < m; ++j) truth.alpha_star(j) = normal(rng);
    const Eigen::VectorXd t = xs * truth.alpha_star;
    const double sd = std::sqrt((t.array() - t.mean()).square().mean());
    if (sd > 0) truth.alpha_star *= cfg.signal_scale / sd;
  }
  truth.planted_target = xs * truth.alpha_star;

  const ScoringKey key = DefaultBfi44Key();
  std::array<Eigen::VectorXd, kNumTraits> trait_dirs;
  for (int t = 0; t < kNumTraits; ++t) trait_dirs[t] = KeyDirection(key, t);
  const Eigen::VectorXd& p = truth.p_star;
  const Eigen::MatrixXd complement =
      Eigen::MatrixXd::Identity(kNumQuestions, kNumQuestions) - p * p.transpose();
  Eigen::MatrixXd z(n, kNumQuestions);
  for (int u = 0; u < n; ++u) {
    Rng rng = StreamRng(cfg.seed, u, kAnswers);
    std::normal_distribution<double> normal;
    const double e = normal(rng);
    Eigen::VectorXd nuisance = Eigen::VectorXd::Zero(kNumQuestions);
    for (int t = 0; t < kNumTraits; ++t)
      nuisance += cfg.trait_loading * normal(rng) * trait_dirs[t] * std::sqrt(8.0);
    for (int q = 0; q < kNumQuestions; ++q) nuisance(q) += cfg.noise_scale * normal(rng);
    const double along = truth.planted_target(u) + cfg.sigma * e;
    z.row(u) = (along * p + complement * nuisance + cfg.overlap * p.dot(nuisance) * p).transpose();
  }

  // Shrink the latent scale when too many entries would be clipped.
  const auto clipped = [&](double s) {
    return static_cast<double>(((s * z).array().abs() > 2.0).count()) /
           static_cast<double>(z.size());
  };
  if (clipped(1.0) > cfg.max_clip_fraction) {
    std::vector<double> mags(z.data(), z.data() + z.size());
    for (double& v : mags) v = std::abs(v);
    const auto rank = static_cast<std::size_t>(
        std::floor((1.0 - cfg.max_clip_fraction) * static_cast<double>(mags.size() - 1)));
    std::nth_element(mags.begin(), mags.begin() + rank, mags.end());
    truth.rescale = mags[rank] > 0 ? 2.0 / mags[rank] : 1.0;
    truth.warnings.push_back("latent answers rescaled by " + std::to_string(truth.rescale) +
                             " to limit clipping");
    z *= truth.rescale;
  }
  truth.latent_answers = z;
  for (int u = 0; u < n; ++u) {
    Answers a{};
    for (int q = 0; q < kNumQuestions; ++q)
      a[q] = static_cast<int>(std::lround(std::clamp(3.0 + z(u, q), 1.0, 5.0)));
    out.records[u].answers = a;
  }
  return out;
}

GroundTruthRecord GroundTruth(const SynthConfig& config) {
  return GenerateCorpus(config).truth;
}

void WriteGroundTruth(const GroundTruthRecord& truth, std::ostream& out) {
  using nlohmann::json;
  auto vec = [](const Eigen::VectorXd& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
  };
  json j;
  j["p_star"] = vec(truth.p_star);
  j["alpha_star"] = vec(truth.alpha_star);
  j["signal_features"] = truth.signal_features;
  j["rescale"] = truth.rescale;
  j["warnings"] = truth.warnings;
  json users = json::array();
  for (std::size_t u = 0; u < truth.users.size(); ++u) {
    const UserTruth& t = truth.users[u];
    json row = {{"user", t.user_id},
                {"home", {t.home_latitude, t.home_longitude}},
                {"work", {t.work_latitude, t.work_longitude}},
                {"contacts", t.contacts},
                {"contact_entropy_bits", t.contact_entropy_bits},
                {"text_rate_per_day", t.text_rate_per_day},
                {"call_rate_per_day", t.call_rate_per_day}};
    if (static_cast<Eigen::Index>(u) < truth.planted_target.size())
      row["planted_target"] = truth.planted_target(u);
    users.push_back(std::move(row));
  }
  j["users"] = std::move(users);
  out << j.dump(1) << '\n';
}

}  // namespace phonetraits
