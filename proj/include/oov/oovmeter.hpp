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

#ifndef OOV_OOVMETER_HPP
#define OOV_OOVMETER_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "oov/counting.hpp"
#include "oov/date.hpp"
#include "oov/querylog.hpp"
#include "oov/ratio.hpp"
#include "oov/vocabulary.hpp"

namespace oov {

// One cookie's test-day tallies. The (cookie_id, day) pair is the session
// key; on a single test day the cookie id alone identifies the session.
struct CookieStats {
  std::string cookie_id;
  std::uint64_t tokens = 0;
  std::uint64_t oov_tokens = 0;

  bool operator==(const CookieStats&) const = default;
};

// Bucketed per-cookie OoV rates: exact tallies at 0 and 1 plus 1000
// uniform buckets; bucket i holds rates in (i/1000, (i+1)/1000], so any
// threshold that is a multiple of 0.001 resolves exactly.
struct OovHistogram {
  std::uint64_t at_zero = 0;
  std::uint64_t at_one = 0;
  std::array<std::uint64_t, 1000> buckets{};

  bool operator==(const OovHistogram&) const = default;
};

struct OovReport {
  std::uint64_t vocabulary_size = 0;
  std::uint64_t threshold = 0;  // the vocabulary's count threshold
  TimeWindow train_window{};
  Day test_day{};
  std::uint64_t total_tokens = 0;
  std::uint64_t total_oov_tokens = 0;
  std::uint64_t eligible_cookies = 0;  // cookies with >= 1 normalized token
  std::uint64_t empty_cookies = 0;     // observed but zero normalized tokens
  // (threshold, fraction of eligible cookies with rate <= threshold),
  // exact rationals, requested thresholds only.
  std::vector<std::pair<Ratio, Ratio>> fractions;
  OovHistogram histogram;

  Ratio aggregate_oov() const { return Ratio::of(total_oov_tokens, total_tokens); }

  bool operator==(const OovReport&) const = default;
};

struct AggregateResult {
  std::uint64_t total_tokens = 0;
  std::uint64_t total_oov_tokens = 0;

  Ratio rate() const { return Ratio::of(total_oov_tokens, total_tokens); }
};

struct EvalOptions {
  PipelineOptions pipeline{};
  // Per-cookie OoV-rate thresholds; 0.01 is always included. Fractions use
  // the inclusive comparison rate <= t.
  std::vector<Ratio> oov_thresholds = {Ratio{1, 100}};
};

// Dedupes, forces 0.01 to the front, sorts the rest ascending.
std::vector<Ratio> canonical_thresholds(std::vector<Ratio> ts);

// Aggregate OoV rate over all normalized tokens of the given test records.
// Throws EmptyTestSet when no tokens survive normalization.
AggregateResult eval_aggregate(const Vocabulary& vocab, const std::vector<QueryRecord>& records,
                               const NormalizeOptions& norm = {});

// Streaming aggregate over a log file filtered to the test day.
AggregateResult eval_aggregate_log(const Vocabulary& vocab, const std::string& path, Day test_day,
                                   const PipelineOptions& opts = {}, ReadStats* stats = nullptr);

// In-memory serial reference for the per-cookie evaluation. Cookies whose
// normalized token count is zero are reported separately and excluded from
// the fraction denominators. Records off the test day are ignored. Throws
// NoEligibleCookies when every cookie is empty. `detail`, when given,
// receives per-cookie stats sorted by id.
OovReport eval_per_cookie(const Vocabulary& vocab, const std::vector<QueryRecord>& records,
                          Day test_day, const std::vector<Ratio>& thresholds,
                          const NormalizeOptions& norm = {},
                          std::vector<CookieStats>* detail = nullptr);

// Streaming evaluation of several vocabularies in one pass over the test
// day (per-cookie grouping is done once; membership is tested per vocab).
// Bit-identical results for any worker count.
std::vector<OovReport> eval_multi_log(const std::vector<Vocabulary>& vocabs,
                                      const std::string& path, Day test_day,
                                      const EvalOptions& opts = {}, ReadStats* stats = nullptr);

// Same, grouping cookies across several log files.
std::vector<OovReport> eval_multi_log(const std::vector<Vocabulary>& vocabs,
                                      const std::vector<std::string>& paths, Day test_day,
                                      const EvalOptions& opts = {}, ReadStats* stats = nullptr);

OovReport eval_per_cookie_log(const Vocabulary& vocab, const std::string& path, Day test_day,
                              const EvalOptions& opts = {}, ReadStats* stats = nullptr);

// The stored fraction for a requested threshold, or the exact value
// derived from the histogram when t is a multiple of 0.001; otherwise
// throws UnknownThreshold.
Ratio fraction_at_or_below(const OovReport& report, Ratio t);

// Report CSV: header
// vocab_size,threshold_C,train_window,test_day,total_tokens,oov_tokens,
// aggregate_oov,eligible_cookies,empty_cookies,frac_le_0.01[,frac_le_*...]
// Rates are rendered with 6 fractional digits, round-half-even.
std::string report_csv_header(const std::vector<Ratio>& thresholds);
std::string report_csv_row(const OovReport& report);

}  // namespace oov

#endif  // OOV_OOVMETER_HPP
