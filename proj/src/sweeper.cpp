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

#include "oov/sweeper.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "oov/counting.hpp"
#include "oov/error.hpp"

namespace oov {
namespace {

// Deterministic row order for reproducible diffs.
void sort_rows(std::vector<OovReport>& rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const OovReport& a, const OovReport& b) {
    if (a.vocabulary_size != b.vocabulary_size) return a.vocabulary_size < b.vocabulary_size;
    if (a.test_day != b.test_day) return a.test_day < b.test_day;
    if (a.train_window.start != b.train_window.start)
      return a.train_window.start < b.train_window.start;
    return a.threshold < b.threshold;
  });
}

void check_thresholds(const std::vector<std::uint64_t>& thresholds) {
  if (thresholds.empty()) throw Error("sweep needs at least one count threshold");
  for (auto c : thresholds)
    if (c < 1) throw Error("count threshold must be >= 1");
}

void eval_day_into(const std::vector<Vocabulary>& vocabs, const std::vector<std::string>& logs,
                   Day day, const SweepOptions& opts, SweepResult& result) {
  try {
    auto reports = eval_multi_log(vocabs, logs, day, opts.eval);
    for (auto& r : reports) result.rows.push_back(std::move(r));
  } catch (const Error& e) {
    result.errors.push_back(format_day(day) + ": " + e.what());
  }
}

void finish(SweepResult& result) {
  if (result.rows.empty() && !result.errors.empty()) {
    std::string all;
    for (const auto& e : result.errors) {
      if (!all.empty()) all += "; ";
      all += e;
    }
    throw Error("sweep produced no rows: " + all);
  }
  sort_rows(result.rows);
}

std::string fmt_log10(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

}  // namespace

std::string_view sweep_kind_name(SweepKind k) {
  switch (k) {
    case SweepKind::Size:
      return "size";
    case SweepKind::Freshness:
      return "freshness";
    case SweepKind::Timeframe:
      return "timeframe";
  }
  return "size";
}

std::optional<SweepKind> parse_sweep_kind(std::string_view s) {
  if (s == "size") return SweepKind::Size;
  if (s == "freshness") return SweepKind::Freshness;
  if (s == "timeframe") return SweepKind::Timeframe;
  return std::nullopt;
}

void SweepSpec::validate() const {
  if (train_windows.empty()) throw Error("sweep needs at least one train window");
  if (test_days.empty()) throw Error("sweep needs at least one test day");
  check_thresholds(thresholds);
  for (const auto& w : train_windows) {
    for (Day d : test_days) {
      if (!validate_disjoint(w, single_day(d))) {
        throw Error("test day " + format_day(d) + " does not start strictly after train window " +
                    format_window(w));
      }
    }
  }
  if (!allow_low_count) {
    for (auto c : thresholds) {
      if (c < kPrivacyFloor) {
        throw PrivacyViolation("count threshold " + std::to_string(c) +
                               " is below the privacy floor " + std::to_string(kPrivacyFloor));
      }
    }
  }
  if (kind == SweepKind::Timeframe) {
    for (const auto& w : train_windows) {
      if (w.end != train_windows.front().end)
        throw Error("timeframe sweep windows must share an end date");
    }
  }
  for (Ratio t : oov_thresholds) {
    if (ratio_cmp(t, Ratio{1, 1}) > 0) throw Error("per-cookie rate threshold must be <= 1");
  }
}

SweepResult run_size_sweep(TimeWindow train, const std::vector<std::uint64_t>& thresholds,
                           Day test_day, const std::vector<std::string>& logs,
                           const SweepOptions& opts) {
  check_thresholds(thresholds);
  if (!validate_disjoint(train, single_day(test_day)))
    throw Error("test day must start strictly after the train window");
  CountTable table = count_logs(logs, train, opts.eval.pipeline);
  std::vector<Vocabulary> vocabs;
  vocabs.reserve(thresholds.size());
  for (auto c : thresholds) vocabs.push_back(build_vocabulary(table, c));

  SweepResult result;
  result.kind = SweepKind::Size;
  result.oov_thresholds = canonical_thresholds(opts.eval.oov_thresholds);
  eval_day_into(vocabs, logs, test_day, opts, result);
  finish(result);
  return result;
}

SweepResult run_freshness_sweep(const std::vector<Vocabulary>& vocabularies,
                                const std::vector<Day>& test_days,
                                const std::vector<std::string>& logs, const SweepOptions& opts) {
  if (vocabularies.empty()) throw Error("sweep needs at least one vocabulary");
  if (test_days.empty()) throw Error("sweep needs at least one test day");
  const TimeWindow train = vocabularies.front().window;
  for (const auto& v : vocabularies) {
    if (v.window != train)
      throw WindowMismatch("freshness sweep vocabularies must share one train window");
  }
  for (std::size_t i = 1; i < test_days.size(); ++i) {
    if (!(test_days[i - 1] < test_days[i]))
      throw Error("test days must be strictly ascending");
  }
  for (Day d : test_days) {
    if (!validate_disjoint(train, single_day(d)))
      throw Error("test day " + format_day(d) + " does not start strictly after train window " +
                  format_window(train));
  }

  SweepResult result;
  result.kind = SweepKind::Freshness;
  result.oov_thresholds = canonical_thresholds(opts.eval.oov_thresholds);
  for (Day d : test_days) eval_day_into(vocabularies, logs, d, opts, result);
  finish(result);
  return result;
}

SweepResult run_timeframe_sweep(const std::vector<TimeWindow>& train_windows,
                                const std::vector<std::uint64_t>& thresholds, Day test_day,
                                const std::vector<std::string>& logs, const SweepOptions& opts) {
  if (train_windows.empty()) throw Error("sweep needs at least one train window");
  check_thresholds(thresholds);
  const Day end = train_windows.front().end;
  for (const auto& w : train_windows) {
    if (w.end != end) throw WindowMismatch("timeframe sweep windows must share an end date");
    if (!validate_disjoint(w, single_day(test_day)))
      throw Error("test day must start strictly after every train window");
  }

  // Distinct windows shortest first; each step counts only the uncovered
  // prefix days and folds them into the running table.
  std::vector<Day> starts;
  for (const auto& w : train_windows) starts.push_back(w.start);
  std::sort(starts.begin(), starts.end(), std::greater<>());
  starts.erase(std::unique(starts.begin(), starts.end()), starts.end());

  std::map<Day, CountTable> tables;  // keyed by window start
  CountTable acc;
  Day covered_from = end;  // exclusive lower edge once the first fold runs
  bool first = true;
  for (Day s : starts) {
    TimeWindow segment = first ? TimeWindow{s, end}
                               : TimeWindow{s, covered_from - std::chrono::days(1)};
    CountTable part = count_logs(logs, segment, opts.eval.pipeline);
    acc.absorb(part);
    acc.window = TimeWindow{s, end};
    covered_from = s;
    first = false;
    tables.emplace(s, acc);
  }

  std::vector<Vocabulary> vocabs;
  vocabs.reserve(train_windows.size() * thresholds.size());
  for (const auto& w : train_windows) {
    const CountTable& table = tables.at(w.start);
    for (auto c : thresholds) vocabs.push_back(build_vocabulary(table, c));
  }

  SweepResult result;
  result.kind = SweepKind::Timeframe;
  result.oov_thresholds = canonical_thresholds(opts.eval.oov_thresholds);
  eval_day_into(vocabs, logs, test_day, opts, result);
  finish(result);
  return result;
}

void emit_csv(const SweepResult& result, std::ostream& out) {
  out << report_csv_header(result.oov_thresholds) << ",sweep_kind\n";
  for (const auto& row : result.rows) {
    out << report_csv_row(row) << ',' << sweep_kind_name(result.kind) << '\n';
  }
  if (!out) throw IoFailure("sweep csv write failed");
}

void emit_csv(const SweepResult& result, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoFailure("cannot open for writing: " + path);
  emit_csv(result, out);
  out.close();
  if (!out) throw IoFailure("close failed: " + path);
}

std::vector<std::string> emit_plotdata(const SweepResult& result, const std::string& dir) {
  // Series key: test day, or the train window for timeframe sweeps.
  auto key_of = [&](const OovReport& r) {
    return result.kind == SweepKind::Timeframe ? format_window(r.train_window)
                                               : format_day(r.test_day);
  };
  std::vector<std::string> metrics;
  metrics.push_back("aggregate_oov");
  for (Ratio t : result.oov_thresholds) metrics.push_back("frac_le_" + to_decimal_shortest(t));

  // Rows are pre-sorted by vocab_size, so each series is emitted in x
  // order; duplicate sizes within a series are the same vocabulary again
  // and are dropped to keep x strictly increasing.
  std::vector<std::string> keys;
  for (const auto& row : result.rows) {
    std::string k = key_of(row);
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
  }
  std::sort(keys.begin(), keys.end());

  std::vector<std::string> written;
  for (const auto& key : keys) {
    for (std::size_t m = 0; m < metrics.size(); ++m) {
      std::string path = dir + "/" + std::string(sweep_kind_name(result.kind)) + "_" + key + "_" +
                         metrics[m] + ".dat";
      std::ofstream out(path, std::ios::binary);
      if (!out) throw IoFailure("cannot open for writing: " + path);
      out << "# " << sweep_kind_name(result.kind) << " sweep, series " << key << "\n";
      out << "# log10_vocab_size " << metrics[m] << "\n";
      std::uint64_t prev_size = 0;
      bool have_prev = false;
      for (const auto& row : result.rows) {
        if (key_of(row) != key) continue;
        if (row.vocabulary_size == 0) continue;
        if (have_prev && row.vocabulary_size == prev_size) continue;
        prev_size = row.vocabulary_size;
        have_prev = true;
        Ratio y = m == 0 ? row.aggregate_oov()
                         : fraction_at_or_below(row, result.oov_thresholds[m - 1]);
        out << fmt_log10(std::log10(static_cast<double>(row.vocabulary_size))) << ' '
            << to_decimal6(y) << '\n';
      }
      out.close();
      if (!out) throw IoFailure("write failed: " + path);
      written.push_back(std::move(path));
    }
  }
  return written;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t pos = 0;
  for (;;) {
    std::size_t comma = line.find(',', pos);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(pos));
      return fields;
    }
    fields.push_back(line.substr(pos, comma - pos));
    pos = comma + 1;
  }
}

std::uint64_t parse_u64_field(const std::string& s, const char* what) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw FormatError(std::string("bad ") + what + " field: " + s);
  return v;
}

Ratio parse_rate_field(const std::string& s, const char* what) {
  auto r = Ratio::try_parse_decimal(s);
  if (!r) throw FormatError(std::string("bad ") + what + " field: " + s);
  return *r;
}

}  // namespace

SweepResult parse_sweep_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("sweep csv is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  auto header = split_csv_line(line);
  const std::vector<std::string> fixed = {
      "vocab_size", "threshold_C",      "train_window",     "test_day",     "total_tokens",
      "oov_tokens", "aggregate_oov",    "eligible_cookies", "empty_cookies"};
  if (header.size() < fixed.size() + 2 || header.back() != "sweep_kind")
    throw FormatError("unrecognized sweep csv header");
  for (std::size_t i = 0; i < fixed.size(); ++i) {
    if (header[i] != fixed[i]) throw FormatError("unrecognized sweep csv header");
  }
  SweepResult result;
  for (std::size_t i = fixed.size(); i + 1 < header.size(); ++i) {
    const std::string& col = header[i];
    if (col.rfind("frac_le_", 0) != 0) throw FormatError("unrecognized sweep csv column: " + col);
    result.oov_thresholds.push_back(parse_rate_field(col.substr(8), "frac_le threshold"));
  }
  if (result.oov_thresholds.empty()) throw FormatError("sweep csv has no frac_le column");

  bool kind_seen = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto f = split_csv_line(line);
    if (f.size() != header.size())
      throw FormatError("sweep csv row has " + std::to_string(f.size()) + " fields, expected " +
                        std::to_string(header.size()));
    OovReport row;
    row.vocabulary_size = parse_u64_field(f[0], "vocab_size");
    row.threshold = parse_u64_field(f[1], "threshold_C");
    auto w = try_parse_window(f[2]);
    if (!w) throw FormatError("bad train_window field: " + f[2]);
    row.train_window = *w;
    row.test_day = parse_day(f[3]);
    row.total_tokens = parse_u64_field(f[4], "total_tokens");
    row.total_oov_tokens = parse_u64_field(f[5], "oov_tokens");
    parse_rate_field(f[6], "aggregate_oov");  // derived column, validated only
    row.eligible_cookies = parse_u64_field(f[7], "eligible_cookies");
    row.empty_cookies = parse_u64_field(f[8], "empty_cookies");
    for (std::size_t t = 0; t < result.oov_thresholds.size(); ++t) {
      row.fractions.emplace_back(result.oov_thresholds[t],
                                 parse_rate_field(f[9 + t], "frac_le"));
    }
    auto kind = parse_sweep_kind(f.back());
    if (!kind) throw FormatError("bad sweep_kind field: " + f.back());
    if (kind_seen && *kind != result.kind) throw FormatError("mixed sweep_kind values");
    result.kind = *kind;
    kind_seen = true;
    result.rows.push_back(std::move(row));
  }
  return result;
}

SweepResult parse_sweep_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot open: " + path);
  return parse_sweep_csv(in);
}

}  // namespace oov
