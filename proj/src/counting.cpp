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

#include "oov/counting.hpp"

#include <omp.h>

#include <limits>
#include <utility>

#include "oov/error.hpp"

namespace oov {

namespace {

struct ChunkError {
  std::uint64_t line_no = std::numeric_limits<std::uint64_t>::max();
  std::string message;
  bool set() const { return line_no != std::numeric_limits<std::uint64_t>::max(); }
};

// Counts one raw line into `table`. Returns false (and fills err once) on a
// malformed line.
bool tally_line(std::string_view line, std::uint64_t line_no, TimeWindow window,
                const NormalizeOptions& norm, CountTable& table, std::uint64_t& in_window,
                ChunkError& err) {
  std::string why;
  auto rec = try_parse_log_line(line, &why);
  if (!rec) {
    if (!err.set()) {
      err.line_no = line_no;
      err.message = why;
    }
    return false;
  }
  if (!window.contains(rec->day)) return true;
  ++in_window;
  ++table.total_queries;
  for_each_normalized(rec->text, norm, [&](std::string_view w) { table.bump(w); });
  return true;
}

[[noreturn]] void throw_malformed(const ChunkError& err) {
  throw MalformedRecord("malformed log line " + std::to_string(err.line_no) + " (" + err.message +
                        ")");
}

// Reads up to n lines; returns number read.
std::size_t read_batch(LineReader& reader, std::size_t n, std::vector<std::string>& lines) {
  lines.clear();
  std::string line;
  while (lines.size() < n && reader.next(line)) lines.push_back(std::move(line));
  return lines.size();
}

}  // namespace

CountTable count_words(const std::vector<QueryRecord>& records, TimeWindow window,
                       const NormalizeOptions& norm) {
  CountTable table;
  table.window = window;
  for (const auto& r : records) {
    if (!window.contains(r.day)) continue;
    ++table.total_queries;
    for_each_normalized(r.text, norm, [&](std::string_view w) { table.bump(w); });
  }
  return table;
}

CountTable count_log_serial(const std::string& path, TimeWindow window,
                            const PipelineOptions& opts, ReadStats* stats) {
  LineReader reader(path);
  CountTable table;
  table.window = window;
  ReadStats st;
  std::string line;
  while (reader.next(line)) {
    ++st.lines;
    ChunkError err;
    if (!tally_line(line, st.lines, window, opts.norm, table, st.records_in_window, err)) {
      if (opts.on_malformed == MalformedPolicy::Strict) throw_malformed(err);
      ++st.malformed;
    }
  }
  if (stats) *stats = st;
  return table;
}

CountTable count_log_parallel(const std::string& path, TimeWindow window,
                              const PipelineOptions& opts, ReadStats* stats) {
  const int workers = opts.workers > 1 ? opts.workers : 1;
  LineReader reader(path);
  CountTable table;
  table.window = window;
  ReadStats st;
  std::vector<std::string> lines;
  std::vector<CountTable> locals(static_cast<std::size_t>(workers));
  std::vector<std::uint64_t> local_in_window(static_cast<std::size_t>(workers));
  std::vector<std::uint64_t> local_malformed(static_cast<std::size_t>(workers));
  std::vector<ChunkError> local_err(static_cast<std::size_t>(workers));
  while (read_batch(reader, opts.batch_lines, lines) > 0) {
    const std::uint64_t base = st.lines;
    const std::size_t n = lines.size();
    for (int c = 0; c < workers; ++c) {
      locals[c].counts.clear();
      locals[c].total_tokens = 0;
      locals[c].total_queries = 0;
      local_in_window[c] = 0;
      local_malformed[c] = 0;
      local_err[c] = ChunkError{};
    }
#pragma omp parallel for schedule(static, 1) num_threads(workers)
    for (int c = 0; c < workers; ++c) {
      const std::size_t lo = n * static_cast<std::size_t>(c) / workers;
      const std::size_t hi = n * static_cast<std::size_t>(c + 1) / workers;
      for (std::size_t i = lo; i < hi; ++i) {
        ChunkError err;
        if (!tally_line(lines[i], base + i + 1, window, opts.norm, locals[c],
                        local_in_window[c], err)) {
          ++local_malformed[c];
          if (!local_err[c].set()) local_err[c] = err;
        }
      }
    }
    // Merge in chunk order; integer sums make the result independent of
    // the split.
    for (int c = 0; c < workers; ++c) {
      if (local_err[c].set() && opts.on_malformed == MalformedPolicy::Strict) {
        throw_malformed(local_err[c]);
      }
      st.malformed += local_malformed[c];
      st.records_in_window += local_in_window[c];
      table.absorb(locals[c]);
    }
    st.lines += n;
  }
  if (stats) *stats = st;
  return table;
}

CountTable count_log(const std::string& path, TimeWindow window, const PipelineOptions& opts,
                     ReadStats* stats) {
  if (opts.workers <= 1) return count_log_serial(path, window, opts, stats);
  return count_log_parallel(path, window, opts, stats);
}

CountTable count_logs(const std::vector<std::string>& paths, TimeWindow window,
                      const PipelineOptions& opts, ReadStats* stats) {
  CountTable table;
  table.window = window;
  ReadStats total;
  for (const auto& path : paths) {
    ReadStats st;
    table.absorb(count_log(path, window, opts, &st));
    total.lines += st.lines;
    total.malformed += st.malformed;
    total.records_in_window += st.records_in_window;
  }
  if (stats) *stats = total;
  return table;
}

}  // namespace oov
