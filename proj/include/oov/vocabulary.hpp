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

#ifndef OOV_VOCABULARY_HPP
#define OOV_VOCABULARY_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_set>

#include "oov/count_table.hpp"
#include "oov/date.hpp"
#include "oov/normalizer.hpp"

namespace oov {

using WordSet = std::unordered_set<std::string, StringHash, std::equal_to<>>;

// Lowest count threshold the tool accepts without an explicit override: a
// word a single user could have typed alone never enters a vocabulary.
inline constexpr std::uint64_t kPrivacyFloor = 15;

// The word set induced by a training window and a count threshold: the
// words repeated at least `threshold` times in the window. Immutable after
// construction; safe to share across threads.
struct Vocabulary {
  WordSet words;
  std::uint64_t threshold = 1;
  TimeWindow window{};

  std::uint64_t size() const { return words.size(); }
  bool contains(std::string_view w) const { return words.find(w) != words.end(); }

  bool operator==(const Vocabulary&) const = default;
};

// words = { w : counts[w] >= threshold }. "C or more" is inclusive.
// Throws Error when threshold < 1. The privacy floor is enforced at the
// CLI boundary, not here.
Vocabulary build_vocabulary(const CountTable& table, std::uint64_t threshold);

// Vocabulary file format: UTF-8 text; `#`-prefixed header lines carrying
// `# window=YYYY-MM-DD..YYYY-MM-DD`, `# threshold=C`, `# size=N`; body is
// one word per line, lexicographically sorted, no duplicates. This is the
// only artifact derived from training data that is ever persisted.
void write_vocabulary(const Vocabulary& v, std::ostream& out);
void write_vocabulary(const Vocabulary& v, const std::string& path);  // throws IoFailure

struct VocabReadOptions {
  // In strict mode an unsorted or duplicated body is a FormatError; words
  // violating the word invariant are rejected in either mode.
  bool strict = false;
  NormalizeOptions norm{};
};

Vocabulary read_vocabulary(std::istream& in, const VocabReadOptions& opts = {});
Vocabulary read_vocabulary(const std::string& path, const VocabReadOptions& opts = {});

}  // namespace oov

#endif  // OOV_VOCABULARY_HPP
