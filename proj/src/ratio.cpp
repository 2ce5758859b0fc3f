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

#include "oov/ratio.hpp"

#include <cstdio>
#include <numeric>

#include "oov/error.hpp"

namespace oov {

using u128 = unsigned __int128;

Ratio Ratio::of(std::uint64_t n, std::uint64_t d) {
  if (d == 0) throw Error("ratio with zero denominator");
  std::uint64_t g = std::gcd(n, d);
  return Ratio{n / g, d / g};
}

std::optional<Ratio> Ratio::try_parse_decimal(std::string_view s) {
  if (s.empty()) return std::nullopt;
  std::string_view ip = s, fp;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    ip = s.substr(0, dot);
    fp = s.substr(dot + 1);
    if (fp.empty()) return std::nullopt;
  }
  if (ip.empty() && fp.empty()) return std::nullopt;
  if (fp.size() > 18) return std::nullopt;
  std::uint64_t num = 0;
  for (char c : ip) {
    if (c < '0' || c > '9') return std::nullopt;
    if (num > (UINT64_MAX - 9) / 10) return std::nullopt;
    num = num * 10 + static_cast<std::uint64_t>(c - '0');
  }
  std::uint64_t den = 1;
  for (char c : fp) {
    if (c < '0' || c > '9') return std::nullopt;
    if (num > (UINT64_MAX - 9) / 10) return std::nullopt;
    num = num * 10 + static_cast<std::uint64_t>(c - '0');
    den *= 10;
  }
  return Ratio::of(num, den);
}

int ratio_cmp(Ratio a, Ratio b) {
  u128 lhs = static_cast<u128>(a.num) * b.den;
  u128 rhs = static_cast<u128>(b.num) * a.den;
  if (lhs < rhs) return -1;
  if (lhs > rhs) return 1;
  return 0;
}

bool ratio_le_raw(std::uint64_t an, std::uint64_t ad, std::uint64_t bn, std::uint64_t bd) {
  return static_cast<u128>(an) * bd <= static_cast<u128>(bn) * ad;
}

std::string to_decimal6(Ratio r) {
  constexpr std::uint64_t kScale = 1000000;
  u128 scaled = static_cast<u128>(r.num) * kScale;
  u128 q = scaled / r.den;
  u128 rem = scaled % r.den;
  u128 twice = rem * 2;
  if (twice > r.den || (twice == r.den && (q & 1))) ++q;
  auto ip = static_cast<std::uint64_t>(q / kScale);
  auto frac = static_cast<std::uint64_t>(q % kScale);
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%llu.%06llu", static_cast<unsigned long long>(ip),
                static_cast<unsigned long long>(frac));
  return buf;
}

std::string to_decimal_shortest(Ratio r) {
  // Strip factors of 2 and 5 out of the denominator.
  std::uint64_t d = r.den, pow10 = 1;
  int twos = 0, fives = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++twos;
  }
  while (d % 5 == 0) {
    d /= 5;
    ++fives;
  }
  if (d != 1) return to_decimal6(r);
  int digits = twos > fives ? twos : fives;
  if (digits > 18) return to_decimal6(r);
  for (int i = 0; i < digits; ++i) pow10 *= 10;
  u128 scaled = static_cast<u128>(r.num) * (pow10 / r.den);
  auto ip = static_cast<std::uint64_t>(scaled / pow10);
  auto frac = static_cast<std::uint64_t>(scaled % pow10);
  char buf[64];
  if (digits == 0) {
    std::snprintf(buf, sizeof(buf), "%llu", static_cast<unsigned long long>(ip));
  } else {
    std::snprintf(buf, sizeof(buf), "%llu.%0*llu", static_cast<unsigned long long>(ip), digits,
                  static_cast<unsigned long long>(frac));
  }
  return buf;
}

}  // namespace oov
