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

#ifndef OOV_SWEEPER_HPP
#define OOV_SWEEPER_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "oov/oovmeter.hpp"
#include "oov/vocabulary.hpp"

namespace oov {

enum class SweepKind { Size, Freshness, Timeframe };

std::string_view sweep_kind_name(SweepKind k);
std::optional<SweepKind> parse_sweep_kind(std::string_view s);

// One experiment family over (train windows x count thresholds x test
// days). Validation rejects any test day not strictly after every train
// window and, unless overridden, thresholds below the privacy floor.
struct SweepSpec {
  SweepKind kind = SweepKind::Size;
  std::vector<TimeWindow> train_windows;
  std::vector<std::uint64_t> thresholds;
  std::vector<Day> test_days;
  std::vector<Ratio> oov_thresholds = {Ratio{1, 100}};
  bool allow_low_count = false;

  // Throws Error on structural problems, PrivacyViolation on thresholds
  // below the floor without allow_low_count.
  void validate() const;
};

struct SweepOptions {
  EvalOptions eval{};
};

struct SweepResult {
  SweepKind kind = SweepKind::Size;
  // Canonical per-cookie rate thresholds shared by every row.
  std::vector<Ratio> oov_thresholds;
  // Sorted by (vocab_size, test_day, window start, threshold).
  std::vector<OovReport> rows;
  // Test days whose evaluation failed; the sweep result is partial when
  // this is non-empty.
  std::vector<std::string> errors;

  bool partial() const { return !errors.empty(); }
};

// Fixed train window, one vocabulary per threshold (all cut from a single
// CountTable), evaluated on one test day.
SweepResult run_size_sweep(TimeWindow train, const std::vector<std::uint64_t>& thresholds,
                           Day test_day, const std::vector<std::string>& logs,
                           const SweepOptions& opts = {});

// Prebuilt vocabularies (sharing one train window) evaluated on every
// test day; days must be strictly ascending. A day whose evaluation fails
// is recorded in `errors` and the remaining days still run.
SweepResult run_freshness_sweep(const std::vector<Vocabulary>& vocabularies,
                                const std::vector<Day>& test_days,
                                const std::vector<std::string>& logs,
                                const SweepOptions& opts = {});

// Nested train windows sharing an end date, each swept over the
// thresholds. Count tables are built incrementally: each longer window
// adds only the days the previous window did not cover.
SweepResult run_timeframe_sweep(const std::vector<TimeWindow>& train_windows,
                                const std::vector<std::uint64_t>& thresholds, Day test_day,
                                const std::vector<std::string>& logs,
                                const SweepOptions& opts = {});

// CSV: the per-vocabulary report schema plus a trailing sweep_kind column.
void emit_csv(const SweepResult& result, std::ostream& out);
void emit_csv(const SweepResult& result, const std::string& path);  // throws IoFailure

// Two-column series (log10 vocab_size, metric) per series key and metric,
// written as `<kind>_<key>_<metric>.dat` under dir. The key is the test
// day, except for timeframe sweeps where each train window is its own
// series. Size-zero vocabularies are skipped. Returns the paths written.
std::vector<std::string> emit_plotdata(const SweepResult& result, const std::string& dir);

// Inverse of emit_csv up to decimal rendering: integer fields round-trip
// exactly, rates come back as the printed 6-digit decimals.
SweepResult parse_sweep_csv(std::istream& in);
SweepResult parse_sweep_csv(const std::string& path);

}  // namespace oov

#endif  // OOV_SWEEPER_HPP
