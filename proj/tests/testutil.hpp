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

#ifndef OOV_TESTS_TESTUTIL_HPP
#define OOV_TESTS_TESTUTIL_HPP

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oov/date.hpp"
#include "oov/normalizer.hpp"
#include "oov/querylog.hpp"

namespace testutil {

// Self-deleting scratch directory.
class TempDir {
 public:
  TempDir() {
    std::string tmpl = (std::filesystem::temp_directory_path() / "oovtest-XXXXXX").string();
    std::vector<char> buf(tmpl.begin(), tmpl.end());
    buf.push_back('\0');
    if (!mkdtemp(buf.data())) throw std::runtime_error("mkdtemp failed");
    path_ = buf.data();
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::string& path() const { return path_; }
  std::string file(const std::string& name) const { return path_ + "/" + name; }

 private:
  std::string path_;
};

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("open failed: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Path of the CLI under test, exported by the build as OOVTOOL.
inline std::string oovtool_path() {
  const char* p = std::getenv("OOVTOOL");
  if (!p || !*p) throw std::runtime_error("OOVTOOL environment variable not set");
  return p;
}

inline std::string shell_quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) {
    if (c == '\'') {
      q += "'\\''";
    } else {
      q.push_back(c);
    }
  }
  q.push_back('\'');
  return q;
}

struct CommandResult {
  int exit_code = -1;
  std::string out;
};

// Runs a shell command, capturing stdout. Callers append `2>...` when the
// diagnostics matter.
inline CommandResult run_command(const std::string& cmd) {
  CommandResult r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) throw std::runtime_error("popen failed");
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof(buf), p)) > 0) r.out.append(buf, n);
  int status = pclose(p);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

// ---- independent oracle -----------------------------------------------

// Full-materialization recomputation of counting and evaluation with plain
// ordered containers and direct 128-bit arithmetic. Shares only the
// normalizer with the production code.

inline std::map<std::string, std::uint64_t> naive_counts(
    const std::vector<oov::QueryRecord>& records, oov::TimeWindow window,
    const oov::NormalizeOptions& norm = {}) {
  std::map<std::string, std::uint64_t> counts;
  for (const auto& r : records) {
    if (r.day < window.start || r.day > window.end) continue;
    for (const auto& w : oov::normalize_query(r.text, norm)) ++counts[w];
  }
  return counts;
}

inline std::set<std::string> naive_vocab(const std::map<std::string, std::uint64_t>& counts,
                                         std::uint64_t min_count) {
  std::set<std::string> vocab;
  for (const auto& [w, n] : counts) {
    if (n >= min_count) vocab.insert(w);
  }
  return vocab;
}

struct NaiveCookie {
  std::uint64_t tokens = 0;
  std::uint64_t oov = 0;
};

struct NaiveEval {
  std::uint64_t total_tokens = 0;
  std::uint64_t total_oov = 0;
  std::uint64_t eligible = 0;
  std::uint64_t empty = 0;
  std::map<std::string, NaiveCookie> cookies;

  // |{eligible cookies : oov/tokens <= num/den}|, exact.
  std::uint64_t at_or_below(std::uint64_t num, std::uint64_t den) const {
    std::uint64_t k = 0;
    for (const auto& [id, c] : cookies) {
      if (c.tokens == 0) continue;
      unsigned __int128 lhs = static_cast<unsigned __int128>(c.oov) * den;
      unsigned __int128 rhs = static_cast<unsigned __int128>(c.tokens) * num;
      if (lhs <= rhs) ++k;
    }
    return k;
  }
};

inline NaiveEval naive_eval(const std::vector<oov::QueryRecord>& records,
                            const std::set<std::string>& vocab, oov::Day test_day,
                            const oov::NormalizeOptions& norm = {}) {
  NaiveEval e;
  for (const auto& r : records) {
    if (r.day != test_day) continue;
    NaiveCookie& c = e.cookies[r.cookie_id];
    for (const auto& w : oov::normalize_query(r.text, norm)) {
      ++c.tokens;
      if (vocab.find(w) == vocab.end()) ++c.oov;
    }
  }
  for (const auto& [id, c] : e.cookies) {
    if (c.tokens == 0) {
      ++e.empty;
    } else {
      ++e.eligible;
      e.total_tokens += c.tokens;
      e.total_oov += c.oov;
    }
  }
  return e;
}

// ---- randomized corpora -------------------------------------------------

struct RandomCorpus {
  std::vector<oov::QueryRecord> records;  // the well-formed lines, in file order
  oov::TimeWindow train{};
  oov::Day test_day{};
  std::string log_text;
  std::uint64_t malformed_lines = 0;
};

// Alphabetic spelling of a rank, so pool words survive normalization.
inline std::string pool_word(std::size_t rank) {
  std::string w = "w";
  do {
    w.push_back(static_cast<char>('a' + rank % 26));
    rank /= 26;
  } while (rank != 0);
  return w;
}

// Random session-tagged corpus exercising empty queries, rejected tokens,
// mixed case, ragged whitespace, and (optionally) malformed lines.
inline RandomCorpus make_random_corpus(std::uint32_t seed, bool with_malformed = true,
                                       std::size_t max_queries = 4000,
                                       std::size_t max_cookies = 1000) {
  std::mt19937 rng(seed);
  RandomCorpus c;
  oov::Day base = oov::parse_day("2026-03-01");
  c.train.start = base + std::chrono::days(rng() % 5);
  c.train.end = c.train.start + std::chrono::days(rng() % 7);
  c.test_day = c.train.end + std::chrono::days(1 + rng() % 3);

  const std::size_t n_cookies = 1 + rng() % max_cookies;
  const std::size_t n_queries = 1 + rng() % max_queries;
  const std::size_t pool = 50 + rng() % 400;
  const char* junk[] = {"4chan", "gawker.com", "a1b", "x-y", "42", "f00d"};
  const char* cased[] = {"Pizza", "BABY", "StAtUs", "Food"};

  std::ostringstream log;
  const int total_days = static_cast<int>((c.test_day - c.train.start).count()) + 1;
  for (std::size_t q = 0; q < n_queries; ++q) {
    if (with_malformed && rng() % 50 == 0) {
      const char* bad[] = {"not a record", "2026-03-01\tonly two fields",
                           "2026-13-01\tc1\tbad month", "2026-3-01\tc1\tunpadded",
                           "\tc1\tempty date", "2026-03-01\t\tempty cookie"};
      log << bad[rng() % 6] << '\n';
      ++c.malformed_lines;
    }
    oov::QueryRecord r;
    r.day = c.train.start + std::chrono::days(rng() % total_days);
    r.cookie_id = "c" + std::to_string(rng() % n_cookies);
    std::string text;
    const std::size_t words = rng() % 6;
    for (std::size_t w = 0; w < words; ++w) {
      if (!text.empty()) text += (rng() % 8 == 0) ? "  " : " ";
      const std::uint32_t kind = rng() % 100;
      if (kind < 70) {
        // Skewed pick from the clean pool: min of two draws piles weight
        // on low ranks, giving count-threshold ladders something to cut.
        std::size_t rank = std::min(rng() % pool, rng() % pool);
        text += pool_word(rank);
      } else if (kind < 85) {
        text += junk[rng() % 6];
      } else {
        text += cased[rng() % 4];
      }
    }
    if (rng() % 10 == 0) text = " " + text;
    r.text = text;
    c.records.push_back(r);
    log << oov::serialize_record(r) << '\n';
  }
  c.log_text = log.str();
  return c;
}

}  // namespace testutil

#endif  // OOV_TESTS_TESTUTIL_HPP
