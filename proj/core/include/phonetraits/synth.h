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

#ifndef PHONETRAITS_SYNTH_H_
#define PHONETRAITS_SYNTH_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "phonetraits/types.h"

namespace phonetraits {

// Synthetic corpus generator with planted ground truth.
//
// Questionnaire answers are built from a latent 44-vector
//   z = (t + sigma * e) p* + P(n) + overlap * (p* . n) p*
// where t = X_signal alpha* uses the standardized realized signal features,
// n is nuisance (five questionnaire trait factors on the fixed key's items
// plus isotropic noise) and P projects onto the complement of p*. With
// overlap = 0 the relation z . p* = t + sigma * e holds exactly. Answers are
// round(clip(3 + z, 1, 5)).
struct SynthConfig {
  int n_users = 100;
  std::uint64_t seed = 1;
  int days = 28;
  Timestamp start = 1378076400;  // Monday 2013-09-02 00:00 local (UTC+1)
  std::int64_t utc_offset_seconds = 3600;

  double text_rate_per_day = 6.0;
  double call_rate_per_day = 2.5;
  double rate_spread = 0.5;       // lognormal sigma of per-user rates
  double min_rate_per_day = 1.5;  // floor keeps users above filter thresholds
  double reply_probability = 0.6;
  double mean_reply_delay_seconds = 900.0;
  double mean_call_duration_seconds = 120.0;
  int min_contacts = 3;
  int max_contacts = 25;
  double max_zipf_exponent = 1.5;  // per-user exponent drawn in [0, max]

  double facebook_friends_mean = 250.0;

  double city_latitude = 55.6761;
  double city_longitude = 12.5683;
  double city_radius_meters = 6000.0;
  double jitter_meters = 30.0;
  std::int64_t gps_interval_seconds = 1200;

  std::int64_t scan_interval_seconds = 1800;
  int peers_per_user = 6;
  double proximity_probability = 0.35;

  // Planted questionnaire relation. Empty vectors are drawn from the seed.
  Eigen::VectorXd p_star;
  Eigen::VectorXd alpha_star;
  std::vector<std::string> signal_features = {
      "n_texts", "n_calls", "facebook_friends", "text_outgoing_fraction"};
  double signal_scale = 1.0;    // standard deviation of t
  double sigma = 0.0;
  double trait_loading = 0.0;   // loading of the five trait factors
  double noise_scale = 0.5;     // isotropic nuisance per item
  double overlap = 0.0;
  // When set, p* mixes the given weight of the extraversion/neuroticism key
  // directions into an otherwise random direction.
  double key_alignment = 0.0;
  double max_clip_fraction = 0.05;
};

struct UserTruth {
  std::string user_id;
  double home_latitude = 0.0;
  double home_longitude = 0.0;
  double work_latitude = 0.0;
  double work_longitude = 0.0;
  int contacts = 0;
  double contact_entropy_bits = 0.0;
  double text_rate_per_day = 0.0;
  double call_rate_per_day = 0.0;
};

struct GroundTruthRecord {
  Eigen::VectorXd p_star;
  Eigen::VectorXd alpha_star;
  std::vector<std::string> signal_features;
  Eigen::MatrixXd signal_values;     // users x signal features, raw
  Eigen::MatrixXd latent_answers;    // users x 44, z before offset/discretizing
  Eigen::VectorXd planted_target;    // t per user
  double rescale = 1.0;              // applied when clipping was excessive
  std::vector<UserTruth> users;
  std::vector<std::string> warnings;
};

struct SynthOutput {
  std::vector<UserRecord> records;
  GroundTruthRecord truth;
};

SynthOutput GenerateCorpus(const SynthConfig& config);
GroundTruthRecord GroundTruth(const SynthConfig& config);

// Entropy in bits of the Zipf contact distribution with the given exponent.
double ZipfEntropyBits(int contacts, double exponent);

void WriteGroundTruth(const GroundTruthRecord& truth, std::ostream& out);

}  // namespace phonetraits

#endif  // PHONETRAITS_SYNTH_H_
