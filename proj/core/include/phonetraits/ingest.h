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

#ifndef PHONETRAITS_INGEST_H_
#define PHONETRAITS_INGEST_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "phonetraits/types.h"

namespace phonetraits {

/// Counters reported by the corpus parser. Malformed lines are skipped, not
/// fatal; the first few diagnostics are kept verbatim.
struct ParseStats {
  std::size_t lines = 0;
  std::size_t malformed = 0;
  std::size_t duplicates = 0;
  std::vector<std::string> diagnostics;
};

struct Corpus {
  std::vector<UserRecord> users;  // ordered by first appearance of user id
  ParseStats stats;
};

/// Parses a line-delimited corpus. \p path may be a single file or a
/// directory; directories are read file by file in lexicographic order.
/// Throws IoError when the path cannot be read.
Corpus ParseCorpus(const std::filesystem::path& path);
Corpus ParseCorpus(std::istream& in);

/// Writes records in the corpus format. Parsing the output reproduces
/// \p users exactly.
void WriteCorpus(std::span<const UserRecord> users, std::ostream& out);
void WriteCorpus(std::span<const UserRecord> users,
                 const std::filesystem::path& path);

/// Sorts every event list by its full tuple and drops exact duplicates.
/// Returns the number of duplicates removed.
std::size_t NormalizeRecord(UserRecord& user);

struct FilterThresholds {
  int min_texts = 10;
  int min_calls = 5;
  int min_gps = 100;
  int min_friends = 1;
};

bool PassesFilter(const UserRecord& user, const FilterThresholds& thresholds);

/// Keeps users with enough texts, calls, GPS points and Facebook friends and
/// a complete questionnaire. Order is preserved.
std::vector<UserRecord> FilterParticipants(
    std::span<const UserRecord> records,
    const FilterThresholds& thresholds = {});

}  // namespace phonetraits

#endif  // PHONETRAITS_INGEST_H_
