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

#ifndef OOV_DATE_HPP
#define OOV_DATE_HPP

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace oov {

// Calendar day at UTC granularity.
using Day = std::chrono::sys_days;

// Strict ISO `YYYY-MM-DD` (zero-padded, valid calendar date).
std::optional<Day> try_parse_day(std::string_view s);

// Throws FormatError on bad input.
Day parse_day(std::string_view s);

std::string format_day(Day d);

// Inclusive date range [start, end].
struct TimeWindow {
  Day start{};
  Day end{};

  bool contains(Day d) const { return start <= d && d <= end; }
  int length_days() const {
    return static_cast<int>((end - start).count()) + 1;
  }
  bool operator==(const TimeWindow&) const = default;
};

// Throws Error when start > end.
TimeWindow make_window(Day start, Day end);

inline TimeWindow single_day(Day d) { return TimeWindow{d, d}; }

std::optional<TimeWindow> intersect(TimeWindow a, TimeWindow b);

// True iff the test window starts strictly after the training window ends.
bool validate_disjoint(TimeWindow train, TimeWindow test);

// "YYYY-MM-DD..YYYY-MM-DD"
std::string format_window(TimeWindow w);
std::optional<TimeWindow> try_parse_window(std::string_view s);

}  // namespace oov

#endif  // OOV_DATE_HPP
