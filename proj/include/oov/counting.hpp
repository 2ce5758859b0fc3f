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

#ifndef OOV_COUNTING_HPP
#define OOV_COUNTING_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "oov/count_table.hpp"
#include "oov/date.hpp"
#include "oov/normalizer.hpp"
#include "oov/querylog.hpp"

namespace oov {

struct PipelineOptions {
  NormalizeOptions norm{};
  MalformedPolicy on_malformed = MalformedPolicy::Skip;
  // Number of parallel chunks per input batch. Results are bit-identical
  // for any value >= 1; 1 selects the serial reference path.
  int workers = 1;
  std::size_t batch_lines = 1 << 16;
};

struct ReadStats {
  std::uint64_t lines = 0;
  std::uint64_t malformed = 0;
  std::uint64_t records_in_window = 0;
};

// In-memory reference: counts each normalized word occurrence of the
// records inside the window. Multiplicity is counted; an in-window record
// whose words are all rejected still increments total_queries.
CountTable count_words(const std::vector<QueryRecord>& records, TimeWindow window,
                       const NormalizeOptions& norm = {});

// Single-pass streaming count over a log file, filtered to the window.
// Memory is proportional to the number of distinct words, not tokens.
CountTable count_log_serial(const std::string& path, TimeWindow window,
                            const PipelineOptions& opts = {}, ReadStats* stats = nullptr);

// OpenMP kernel: batches of lines are split into `workers` chunks counted
// into thread-local tables and merged in chunk order. Output is
// bit-identical to the serial reference for any worker count.
CountTable count_log_parallel(const std::string& path, TimeWindow window,
                              const PipelineOptions& opts = {}, ReadStats* stats = nullptr);

// Dispatches on opts.workers.
CountTable count_log(const std::string& path, TimeWindow window, const PipelineOptions& opts = {},
                     ReadStats* stats = nullptr);

// Counts several log files into one table; stats accumulate across files.
CountTable count_logs(const std::vector<std::string>& paths, TimeWindow window,
                      const PipelineOptions& opts = {}, ReadStats* stats = nullptr);

}  // namespace oov

#endif  // OOV_COUNTING_HPP
