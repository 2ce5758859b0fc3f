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

#ifndef OOV_NORMALIZER_HPP
#define OOV_NORMALIZER_HPP

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace oov {

// Deliberately conservative normalization: queries are split on whitespace
// runs and only purely alphabetic words are kept ("4chan" and "gawker.com"
// are dropped whole). No spelling correction, no number verbalization, no
// URL decomposition.
struct NormalizeOptions {
  // Fold kept words to lowercase so "Pizza" and "pizza" are one entry.
  bool case_fold = true;
  // Widen "alphabetic" from ASCII [A-Za-z] to Unicode letters. Off by
  // default: with ASCII rules an accented word such as "café" is rejected.
  bool unicode_alpha = false;

  bool operator==(const NormalizeOptions&) const = default;
};

// Splits on runs of Unicode whitespace. No character transformation, no
// punctuation splitting ("gawker.com" stays one token). Bytes that do not
// form a valid UTF-8 sequence are treated as token characters.
std::vector<std::string> tokenize(std::string_view text);

// Returns the normalized word, or nullopt when the token contains any
// non-alphabetic character and is rejected whole.
std::optional<std::string> normalize_token(std::string_view token,
                                           const NormalizeOptions& opts = {});

// tokenize + normalize_token; rejected tokens are dropped, order and
// multiplicity of the survivors are preserved.
std::vector<std::string> normalize_query(std::string_view text,
                                         const NormalizeOptions& opts = {});

// Streaming form of normalize_query for hot loops; invokes fn once per
// surviving word. The view is only valid during the call.
void for_each_normalized(std::string_view text, const NormalizeOptions& opts,
                         const std::function<void(std::string_view)>& fn);

// True iff the string is already a normalized word under these options
// (normalize_token would return it unchanged).
bool is_word(std::string_view s, const NormalizeOptions& opts = {});

}  // namespace oov

#endif  // OOV_NORMALIZER_HPP
