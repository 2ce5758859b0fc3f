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

#ifndef OOV_RATIO_HPP
#define OOV_RATIO_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace oov {

// Non-negative exact rational. OoV rates are kept as integer ratios and
// rendered as decimals only at output, so comparisons at a threshold
// boundary (rate <= 0.01) are never subject to float rounding.
struct Ratio {
  std::uint64_t num = 0;
  std::uint64_t den = 1;  // >= 1, gcd(num, den) == 1

  // Reduces n/d; throws Error when d == 0.
  static Ratio of(std::uint64_t n, std::uint64_t d);

  // Accepts "0", "1", "0.01", ".5", "1.0"; rejects anything else.
  static std::optional<Ratio> try_parse_decimal(std::string_view s);

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

  bool operator==(const Ratio&) const = default;
};

// -1, 0, +1 for a < b, a == b, a > b. Exact (128-bit cross multiply).
int ratio_cmp(Ratio a, Ratio b);

inline bool ratio_le(Ratio a, Ratio b) { return ratio_cmp(a, b) <= 0; }

// a <= n/d without constructing a reduced Ratio.
bool ratio_le_raw(std::uint64_t an, std::uint64_t ad, std::uint64_t bn, std::uint64_t bd);

// Fixed 6 fractional digits, round-half-even (e.g. 1/4 -> "0.250000").
std::string to_decimal6(Ratio r);

// Shortest exact decimal when the reduced denominator is of the form
// 2^a * 5^b (e.g. 1/100 -> "0.01", 1/1 -> "1"); falls back to to_decimal6.
std::string to_decimal_shortest(Ratio r);

}  // namespace oov

#endif  // OOV_RATIO_HPP
