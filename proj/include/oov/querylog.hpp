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

#ifndef OOV_QUERYLOG_HPP
#define OOV_QUERYLOG_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "oov/date.hpp"

namespace oov {

// One logged query. The log format is tab-separated
// `YYYY-MM-DD<TAB>cookie_id<TAB>query text`, one record per line, UTF-8,
// LF line endings. Query text may contain any characters except tab and
// newline, and may be empty.
struct QueryRecord {
  Day day{};
  std::string cookie_id;
  std::string text;

  bool operator==(const QueryRecord&) const = default;
};

// Zero-copy view of one parsed line; valid only while the line buffer is.
struct RecordView {
  Day day{};
  std::string_view cookie_id;
  std::string_view text;
};

// Returns nullopt on wrong field count, unparseable date, or empty cookie
// id; `why` (when given) receives a short reason.
std::optional<RecordView> try_parse_log_line(std::string_view line, std::string* why = nullptr);

// Throws MalformedRecord. Caller policy decides skip-and-count vs abort.
QueryRecord parse_log_line(std::string_view line);

std::string serialize_record(const QueryRecord& r);

inline QueryRecord materialize(const RecordView& v) {
  return QueryRecord{v.day, std::string(v.cookie_id), std::string(v.text)};
}

// Keeps exactly the records with window.start <= day <= window.end,
// preserving input order.
std::vector<QueryRecord> filter_window(const std::vector<QueryRecord>& records, TimeWindow window);

// What to do with a corrupt input line.
enum class MalformedPolicy {
  Skip,    // count and continue
  Strict,  // abort with MalformedRecord
};

// Line-oriented reader over a log file; transparently inflates files whose
// path ends in ".gz". Lines are returned without the trailing newline.
class LineReader {
 public:
  explicit LineReader(const std::string& path);  // throws IoFailure
  ~LineReader();
  LineReader(const LineReader&) = delete;
  LineReader& operator=(const LineReader&) = delete;

  // False at end of input.
  bool next(std::string& line);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace oov

#endif  // OOV_QUERYLOG_HPP
