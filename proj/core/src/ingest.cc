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

#include "phonetraits/ingest.h"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>
#include <unordered_map>

#include "json.hpp"

namespace phonetraits {
namespace {

using nlohmann::json;

constexpr std::size_t kMaxDiagnostics = 20;

struct MalformedLine : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Direction ParseDirection(const json& j) {
  const auto& s = j.at("direction").get_ref<const std::string&>();
  if (s == "in") return Direction::kIn;
  if (s == "out") return Direction::kOut;
  throw MalformedLine("direction must be \"in\" or \"out\"");
}

Timestamp ParseTimestamp(const json& j) {
  const json& t = j.at("timestamp");
  if (!t.is_number_integer()) throw MalformedLine("timestamp must be an integer");
  return t.get<Timestamp>();
}

std::string ParseContact(const json& j) {
  const json& c = j.at("counterpart");
  if (!c.is_string() || c.get_ref<const std::string&>().empty())
    throw MalformedLine("counterpart must be a non-empty string");
  return c.get<std::string>();
}

class CorpusBuilder {
 public:
  explicit CorpusBuilder(Corpus& corpus) : corpus_(corpus) {}

  void AddLine(std::string_view line) {
    ++corpus_.stats.lines;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) return;
    try {
      AddRecord(json::parse(line));
    } catch (const std::exception& e) {
      ++corpus_.stats.malformed;
      if (corpus_.stats.diagnostics.size() < kMaxDiagnostics) {
        corpus_.stats.diagnostics.push_back(
            "line " + std::to_string(corpus_.stats.lines) + ": " + e.what());
      }
    }
  }

  void Finish() {
    for (UserRecord& user : corpus_.users)
      corpus_.stats.duplicates += NormalizeRecord(user);
  }

 private:
  UserRecord& User(const std::string& id) {
    auto [it, inserted] = index_.try_emplace(id, corpus_.users.size());
    if (inserted) {
      corpus_.users.emplace_back();
      corpus_.users.back().user_id = id;
    }
    return corpus_.users[it->second];
  }

  void AddRecord(const json& j) {
    if (!j.is_object()) throw MalformedLine("record is not an object");
    const json& user_field = j.at("user");
    if (!user_field.is_string() || user_field.get_ref<const std::string&>().empty())
      throw MalformedLine("user must be a non-empty string");
    const std::string user_id = user_field.get<std::string>();
    const auto& stream = j.at("stream").get_ref<const std::string&>();

    if (stream == "call") {
      CallEvent e{ParseTimestamp(j), ParseContact(j), ParseDirection(j),
                  j.at("duration").get<double>()};
      if (!(e.duration >= 0.0)) throw MalformedLine("negative call duration");
      User(user_id).calls.push_back(std::move(e));
    } else if (stream == "text") {
      TextEvent e{ParseTimestamp(j), ParseContact(j), ParseDirection(j)};
      User(user_id).texts.push_back(std::move(e));
    } else if (stream == "gps") {
      GpsPoint p{ParseTimestamp(j), j.at("latitude").get<double>(),
                 j.at("longitude").get<double>()};
      if (!(p.latitude >= -90.0 && p.latitude <= 90.0) ||
          !(p.longitude >= -180.0 && p.longitude <= 180.0))
        throw MalformedLine("coordinate out of range");
      User(user_id).gps.push_back(p);
    } else if (stream == "scan") {
      ProximityScan s{ParseTimestamp(j), {}};
      for (const json& d : j.at("detected")) {
        auto id = d.get<std::string>();
        if (id != user_id) s.detected.push_back(std::move(id));
      }
      std::sort(s.detected.begin(), s.detected.end());
      s.detected.erase(std::unique(s.detected.begin(), s.detected.end()),
                       s.detected.end());
      User(user_id).scans.push_back(std::move(s));
    } else if (stream == "profile") {
      const int friends = j.at("facebook_friends").get<int>();
      if (friends < 0) throw MalformedLine("negative friend count");
      User(user_id).facebook_friends = friends;
    } else if (stream == "questionnaire") {
      const json& a = j.at("answers");
      if (!a.is_array() || a.size() != kNumQuestions)
        throw MalformedLine("answers must hold 44 entries");
      Answers answers{};
      for (int q = 0; q < kNumQuestions; ++q) {
        if (!a[q].is_number_integer()) throw MalformedLine("answer not an integer");
        answers[q] = a[q].get<int>();
        if (answers[q] < 1 || answers[q] > 5)
          throw MalformedLine("answer outside [1, 5]");
      }
      User(user_id).answers = answers;
    } else {
      throw MalformedLine("unknown stream '" + stream + "'");
    }
  }

  Corpus& corpus_;
  std::unordered_map<std::string, std::size_t> index_;
};

const char* DirectionName(Direction d) { return d == Direction::kIn ? "in" : "out"; }

template <typename T>
std::size_t SortUnique(std::vector<T>& v) {
  std::sort(v.begin(), v.end(), [](const T& a, const T& b) {
    if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
    return a < b;
  });
  const std::size_t before = v.size();
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return before - v.size();
}

}  // namespace

std::size_t NormalizeRecord(UserRecord& user) {
  return SortUnique(user.calls) + SortUnique(user.texts) +
         SortUnique(user.gps) + SortUnique(user.scans);
}

Corpus ParseCorpus(std::istream& in) {
  Corpus corpus;
  CorpusBuilder builder(corpus);
  std::string line;
  while (std::getline(in, line)) builder.AddLine(line);
  builder.Finish();
  return corpus;
}

Corpus ParseCorpus(const std::filesystem::path& path) {
  std::error_code ec;
  std::vector<std::filesystem::path> files;
  if (std::filesystem::is_directory(path, ec)) {
    for (const auto& entry : std::filesystem::directory_iterator(path, ec))
      if (entry.is_regular_file()) files.push_back(entry.path());
    std::sort(files.begin(), files.end());
  } else {
    files.push_back(path);
  }
  if (ec) throw IoError("cannot read corpus path " + path.string());

  Corpus corpus;
  CorpusBuilder builder(corpus);
  for (const auto& file : files) {
    std::ifstream in(file);
    if (!in) throw IoError("cannot open corpus file " + file.string());
    std::string line;
    while (std::getline(in, line)) builder.AddLine(line);
    if (in.bad()) throw IoError("error reading " + file.string());
  }
  builder.Finish();
  return corpus;
}

void WriteCorpus(std::span<const UserRecord> users, std::ostream& out) {
  for (const UserRecord& u : users) {
    out << json{{"user", u.user_id},
                {"stream", "profile"},
                {"facebook_friends", u.facebook_friends}}
               .dump()
        << '\n';
    if (u.answers) {
      out << json{{"user", u.user_id},
                  {"stream", "questionnaire"},
                  {"answers", *u.answers}}
                 .dump()
          << '\n';
    }
    for (const CallEvent& e : u.calls) {
      out << json{{"user", u.user_id},     {"stream", "call"},
                  {"timestamp", e.timestamp}, {"counterpart", e.counterpart},
                  {"direction", DirectionName(e.direction)},
                  {"duration", e.duration}}
                 .dump()
          << '\n';
    }
    for (const TextEvent& e : u.texts) {
      out << json{{"user", u.user_id},
                  {"stream", "text"},
                  {"timestamp", e.timestamp},
                  {"counterpart", e.counterpart},
                  {"direction", DirectionName(e.direction)}}
                 .dump()
          << '\n';
    }
    for (const GpsPoint& p : u.gps) {
      out << json{{"user", u.user_id},
                  {"stream", "gps"},
                  {"timestamp", p.timestamp},
                  {"latitude", p.latitude},
                  {"longitude", p.longitude}}
                 .dump()
          << '\n';
    }
    for (const ProximityScan& s : u.scans) {
      out << json{{"user", u.user_id},
                  {"stream", "scan"},
                  {"timestamp", s.timestamp},
                  {"detected", s.detected}}
                 .dump()
          << '\n';
    }
  }
}

void WriteCorpus(std::span<const UserRecord> users,
                 const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  WriteCorpus(users, out);
  if (!out) throw IoError("error writing " + path.string());
}

bool PassesFilter(const UserRecord& user, const FilterThresholds& t) {
  return static_cast<int>(user.texts.size()) >= t.min_texts &&
         static_cast<int>(user.calls.size()) >= t.min_calls &&
         static_cast<int>(user.gps.size()) >= t.min_gps &&
         user.facebook_friends >= t.min_friends && user.answers.has_value();
}

std::vector<UserRecord> FilterParticipants(std::span<const UserRecord> records,
                                           const FilterThresholds& thresholds) {
  std::vector<UserRecord> kept;
  for (const UserRecord& u : records)
    if (PassesFilter(u, thresholds)) kept.push_back(u);
  return kept;
}

}  // namespace phonetraits
