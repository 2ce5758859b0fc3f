// Copyright (c) 2026 the oovtool authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef OOV_COUNT_TABLE_HPP
#define OOV_COUNT_TABLE_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <unordered_map>

#include "oov/date.hpp"

namespace oov {

// Hash usable with string_view lookups into string-keyed containers.
struct StringHash {
  using is_transparent = void;
  size_t operator()(std::string_view s) const noexcept {
    return std::hash<std::string_view>{}(s);
  }
};

using WordCountMap = std::unordered_map<std::string, std::uint64_t, StringHash, std::equal_to<>>;

// 1-gram occurrence counts over one training window. Every key is a
// normalized word, every count >= 1, and the counts sum to total_tokens.
struct CountTable {
  WordCountMap counts;
  std::uint64_t total_tokens = 0;
  std::uint64_t total_queries = 0;
  TimeWindow window{};

  std::uint64_t count_of(std::string_view word) const {
    auto it = counts.find(word);
    return it == counts.end() ? 0 : it->second;
  }
  std::uint64_t distinct_words() const { return counts.size(); }

  // Adds one occurrence of `word`.
  void bump(std::string_view word) {
    auto it = counts.find(word);
    if (it == counts.end()) {
      counts.emplace(std::string(word), 1);
    } else {
      ++it->second;
    }
    ++total_tokens;
  }

  // Pointwise-sums the other table into this one; window metadata is kept.
  void absorb(const CountTable& other);

  bool operator==(const CountTable&) const = default;
};

// Pointwise sum of two shards of the same training window; throws
// WindowMismatch when the windows differ.
CountTable merge_counts(const CountTable& a, const CountTable& b);

}  // namespace oov

#endif  // OOV_COUNT_TABLE_HPP
