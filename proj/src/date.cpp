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

#include "oov/date.hpp"

#include <cstdio>

#include "oov/error.hpp"

namespace oov {

namespace {

bool all_digits(std::string_view s) {
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return !s.empty();
}

unsigned to_uint(std::string_view s) {
  unsigned v = 0;
  for (char c : s) v = v * 10 + static_cast<unsigned>(c - '0');
  return v;
}

}  // namespace

std::optional<Day> try_parse_day(std::string_view s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
  std::string_view ys = s.substr(0, 4), ms = s.substr(5, 2), ds = s.substr(8, 2);
  if (!all_digits(ys) || !all_digits(ms) || !all_digits(ds)) return std::nullopt;
  std::chrono::year_month_day ymd{std::chrono::year{static_cast<int>(to_uint(ys))},
                                  std::chrono::month{to_uint(ms)},
                                  std::chrono::day{to_uint(ds)}};
  if (!ymd.ok()) return std::nullopt;
  return Day{ymd};
}

Day parse_day(std::string_view s) {
  auto d = try_parse_day(s);
  if (!d) throw FormatError("bad date (expected YYYY-MM-DD): '" + std::string(s) + "'");
  return *d;
}

std::string format_day(Day d) {
  std::chrono::year_month_day ymd{d};
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

TimeWindow make_window(Day start, Day end) {
  if (start > end) {
    throw Error("time window start " + format_day(start) + " is after end " + format_day(end));
  }
  return TimeWindow{start, end};
}

std::optional<TimeWindow> intersect(TimeWindow a, TimeWindow b) {
  Day s = std::max(a.start, b.start);
  Day e = std::min(a.end, b.end);
  if (s > e) return std::nullopt;
  return TimeWindow{s, e};
}

bool validate_disjoint(TimeWindow train, TimeWindow test) {
  return test.start > train.end;
}

std::string format_window(TimeWindow w) {
  return format_day(w.start) + ".." + format_day(w.end);
}

std::optional<TimeWindow> try_parse_window(std::string_view s) {
  if (s.size() != 22 || s.substr(10, 2) != "..") return std::nullopt;
  auto start = try_parse_day(s.substr(0, 10));
  auto end = try_parse_day(s.substr(12));
  if (!start || !end || *start > *end) return std::nullopt;
  return TimeWindow{*start, *end};
}

}  // namespace oov
