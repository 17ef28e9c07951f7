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

#ifndef PHONETRAITS_TYPES_H_
#define PHONETRAITS_TYPES_H_

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace phonetraits {

// Seconds since the Unix epoch, UTC.
using Timestamp = std::int64_t;

inline constexpr int kNumQuestions = 44;
inline constexpr int kNumTraits = 5;

enum class Direction { kIn, kOut };

struct CallEvent {
  Timestamp timestamp = 0;
  std::string counterpart;
  Direction direction = Direction::kIn;
  double duration = 0.0;  // seconds

  friend auto operator<=>(const CallEvent&, const CallEvent&) = default;
};

struct TextEvent {
  Timestamp timestamp = 0;
  std::string counterpart;
  Direction direction = Direction::kIn;

  friend auto operator<=>(const TextEvent&, const TextEvent&) = default;
};

struct GpsPoint {
  Timestamp timestamp = 0;
  double latitude = 0.0;   // degrees, [-90, 90]
  double longitude = 0.0;  // degrees, [-180, 180]

  friend auto operator<=>(const GpsPoint&, const GpsPoint&) = default;
};

// One Bluetooth scan. The detected ids are kept sorted and never contain the
// scanning user.
struct ProximityScan {
  Timestamp timestamp = 0;
  std::vector<std::string> detected;

  friend auto operator<=>(const ProximityScan&, const ProximityScan&) = default;
};

using Answers = std::array<int, kNumQuestions>;

struct UserRecord {
  std::string user_id;
  std::vector<CallEvent> calls;
  std::vector<TextEvent> texts;
  std::vector<GpsPoint> gps;
  std::vector<ProximityScan> scans;
  int facebook_friends = 0;
  std::optional<Answers> answers;

  friend bool operator==(const UserRecord&, const UserRecord&) = default;
};

// Thrown for unreadable inputs and files that cannot be partially recovered.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Thrown when arguments violate a documented precondition.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace phonetraits

#endif  // PHONETRAITS_TYPES_H_
