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

#include "oov/oovmeter.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <unordered_map>

#include "oov/error.hpp"

namespace oov {

namespace {

using u128 = unsigned __int128;

// Per-cookie tallies against a list of vocabularies: token total plus one
// OoV counter per vocabulary.
struct MultiTally {
  std::uint64_t tokens = 0;
  std::vector<std::uint64_t> oov;

  explicit MultiTally(std::size_t nvocab) : oov(nvocab, 0) {}
};

using CookieMap = std::unordered_map<std::string, MultiTally, StringHash, std::equal_to<>>;

void tally_record(std::string_view cookie, std::string_view text,
                  const std::vector<Vocabulary>& vocabs, const NormalizeOptions& norm,
                  CookieMap& map) {
  auto it = map.find(cookie);
  if (it == map.end()) it = map.emplace(std::string(cookie), MultiTally(vocabs.size())).first;
  MultiTally& tally = it->second;
  for_each_normalized(text, norm, [&](std::string_view w) {
    ++tally.tokens;
    for (std::size_t v = 0; v < vocabs.size(); ++v) {
      if (!vocabs[v].contains(w)) ++tally.oov[v];
    }
  });
}

void merge_cookie_maps(CookieMap& into, CookieMap&& from) {
  for (auto& [cookie, tally] : from) {
    auto it = into.find(cookie);
    if (it == into.end()) {
      into.emplace(cookie, std::move(tally));
    } else {
      it->second.tokens += tally.tokens;
      for (std::size_t v = 0; v < tally.oov.size(); ++v) it->second.oov[v] += tally.oov[v];
    }
  }
}

// (i/1000, (i+1)/1000] bucket for a rate strictly between 0 and 1.
std::size_t bucket_index(std::uint64_t num, std::uint64_t den) {
  u128 k = (static_cast<u128>(num) * 1000 + den - 1) / den;  // ceil
  return static_cast<std::size_t>(k) - 1;
}

// Builds the per-vocabulary reports from the grouped cookie tallies. All
// accumulations are integer sums, so the result does not depend on map
// iteration order.
std::vector<OovReport> finalize_reports(const std::vector<Vocabulary>& vocabs,
                                        const CookieMap& cookies, Day test_day,
                                        const std::vector<Ratio>& thresholds) {
  const std::size_t nv = vocabs.size();
  std::uint64_t eligible = 0, empty = 0, total_tokens = 0;
  for (const auto& [id, tally] : cookies) {
    if (tally.tokens == 0) {
      ++empty;
    } else {
      ++eligible;
      total_tokens += tally.tokens;
    }
  }
  if (eligible == 0) {
    throw NoEligibleCookies("every cookie on " + format_day(test_day) +
                            " had zero normalized tokens");
  }
  std::vector<OovReport> reports(nv);
  std::vector<std::vector<std::uint64_t>> at_or_below(nv,
                                                      std::vector<std::uint64_t>(thresholds.size(), 0));
  for (std::size_t v = 0; v < nv; ++v) {
    OovReport& rep = reports[v];
    rep.vocabulary_size = vocabs[v].size();
    rep.threshold = vocabs[v].threshold;
    rep.train_window = vocabs[v].window;
    rep.test_day = test_day;
    rep.total_tokens = total_tokens;
    rep.eligible_cookies = eligible;
    rep.empty_cookies = empty;
  }
  for (const auto& [id, tally] : cookies) {
    if (tally.tokens == 0) continue;
    for (std::size_t v = 0; v < nv; ++v) {
      OovReport& rep = reports[v];
      const std::uint64_t oov = tally.oov[v];
      rep.total_oov_tokens += oov;
      if (oov == 0) {
        ++rep.histogram.at_zero;
      } else if (oov == tally.tokens) {
        ++rep.histogram.at_one;
      } else {
        ++rep.histogram.buckets[bucket_index(oov, tally.tokens)];
      }
      for (std::size_t t = 0; t < thresholds.size(); ++t) {
        if (ratio_le_raw(oov, tally.tokens, thresholds[t].num, thresholds[t].den)) {
          ++at_or_below[v][t];
        }
      }
    }
  }
  for (std::size_t v = 0; v < nv; ++v) {
    for (std::size_t t = 0; t < thresholds.size(); ++t) {
      reports[v].fractions.emplace_back(thresholds[t], Ratio::of(at_or_below[v][t], eligible));
    }
  }
  return reports;
}

}  // namespace

std::vector<Ratio> canonical_thresholds(std::vector<Ratio> ts) {
  const Ratio pct1{1, 100};
  std::sort(ts.begin(), ts.end(),
            [](Ratio a, Ratio b) { return ratio_cmp(a, b) < 0; });
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  std::erase(ts, pct1);
  ts.insert(ts.begin(), pct1);
  return ts;
}

AggregateResult eval_aggregate(const Vocabulary& vocab, const std::vector<QueryRecord>& records,
                               const NormalizeOptions& norm) {
  AggregateResult res;
  for (const auto& r : records) {
    for_each_normalized(r.text, norm, [&](std::string_view w) {
      ++res.total_tokens;
      if (!vocab.contains(w)) ++res.total_oov_tokens;
    });
  }
  if (res.total_tokens == 0) throw EmptyTestSet("no normalized tokens in test set");
  return res;
}

AggregateResult eval_aggregate_log(const Vocabulary& vocab, const std::string& path, Day test_day,
                                   const PipelineOptions& opts, ReadStats* stats) {
  LineReader reader(path);
  AggregateResult res;
  ReadStats st;
  const TimeWindow window = single_day(test_day);
  std::string line;
  while (reader.next(line)) {
    ++st.lines;
    std::string why;
    auto rec = try_parse_log_line(line, &why);
    if (!rec) {
      if (opts.on_malformed == MalformedPolicy::Strict) {
        throw MalformedRecord("malformed log line " + std::to_string(st.lines) + " (" + why + ")");
      }
      ++st.malformed;
      continue;
    }
    if (!window.contains(rec->day)) continue;
    ++st.records_in_window;
    for_each_normalized(rec->text, opts.norm, [&](std::string_view w) {
      ++res.total_tokens;
      if (!vocab.contains(w)) ++res.total_oov_tokens;
    });
  }
  if (stats) *stats = st;
  if (res.total_tokens == 0) throw EmptyTestSet("no normalized tokens on " + format_day(test_day));
  return res;
}

OovReport eval_per_cookie(const Vocabulary& vocab, const std::vector<QueryRecord>& records,
                          Day test_day, const std::vector<Ratio>& thresholds,
                          const NormalizeOptions& norm, std::vector<CookieStats>* detail) {
  std::vector<Vocabulary> one{vocab};
  CookieMap cookies;
  for (const auto& r : records) {
    if (r.day != test_day) continue;
    tally_record(r.cookie_id, r.text, one, norm, cookies);
  }
  if (detail) {
    detail->clear();
    for (const auto& [id, tally] : cookies) {
      detail->push_back(CookieStats{id, tally.tokens, tally.oov[0]});
    }
    std::sort(detail->begin(), detail->end(),
              [](const CookieStats& a, const CookieStats& b) { return a.cookie_id < b.cookie_id; });
  }
  auto reports = finalize_reports(one, cookies, test_day, canonical_thresholds(thresholds));
  return std::move(reports[0]);
}

namespace {

// One file's test-day records tallied into the shared cookie map. Line
// numbers in errors are per file.
void scan_log_into(const std::string& path, TimeWindow window,
                   const std::vector<Vocabulary>& vocabs, const PipelineOptions& pipeline,
                   CookieMap& cookies, ReadStats& st) {
  const int workers = pipeline.workers > 1 ? pipeline.workers : 1;
  LineReader reader(path);
  std::vector<std::string> lines;
  std::string line;
  std::uint64_t file_lines = 0;
  if (workers == 1) {
    while (reader.next(line)) {
      ++file_lines;
      std::string why;
      auto rec = try_parse_log_line(line, &why);
      if (!rec) {
        if (pipeline.on_malformed == MalformedPolicy::Strict) {
          throw MalformedRecord(path + ":" + std::to_string(file_lines) + ": " + why);
        }
        ++st.malformed;
        continue;
      }
      if (!window.contains(rec->day)) continue;
      ++st.records_in_window;
      tally_record(rec->cookie_id, rec->text, vocabs, pipeline.norm, cookies);
    }
  } else {
    std::vector<CookieMap> locals(static_cast<std::size_t>(workers));
    std::vector<std::uint64_t> local_in_window(static_cast<std::size_t>(workers));
    std::vector<std::uint64_t> local_malformed(static_cast<std::size_t>(workers));
    std::vector<std::pair<std::uint64_t, std::string>> local_err(
        static_cast<std::size_t>(workers));
    for (;;) {
      lines.clear();
      while (lines.size() < pipeline.batch_lines && reader.next(line)) {
        lines.push_back(std::move(line));
      }
      if (lines.empty()) break;
      const std::size_t n = lines.size();
      const std::uint64_t base = file_lines;
      for (int c = 0; c < workers; ++c) {
        locals[c].clear();
        local_in_window[c] = 0;
        local_malformed[c] = 0;
        local_err[c] = {0, std::string()};
      }
#pragma omp parallel for schedule(static, 1) num_threads(workers)
      for (int c = 0; c < workers; ++c) {
        const std::size_t lo = n * static_cast<std::size_t>(c) / workers;
        const std::size_t hi = n * static_cast<std::size_t>(c + 1) / workers;
        for (std::size_t i = lo; i < hi; ++i) {
          std::string why;
          auto rec = try_parse_log_line(lines[i], &why);
          if (!rec) {
            ++local_malformed[c];
            if (local_err[c].first == 0) local_err[c] = {base + i + 1, why};
            continue;
          }
          if (!window.contains(rec->day)) continue;
          ++local_in_window[c];
          tally_record(rec->cookie_id, rec->text, vocabs, pipeline.norm, locals[c]);
        }
      }
      for (int c = 0; c < workers; ++c) {
        if (local_err[c].first != 0 && pipeline.on_malformed == MalformedPolicy::Strict) {
          throw MalformedRecord(path + ":" + std::to_string(local_err[c].first) + ": " +
                                local_err[c].second);
        }
        st.malformed += local_malformed[c];
        st.records_in_window += local_in_window[c];
        merge_cookie_maps(cookies, std::move(locals[c]));
      }
      file_lines += n;
    }
  }
  st.lines += file_lines;
}

}  // namespace

std::vector<OovReport> eval_multi_log(const std::vector<Vocabulary>& vocabs,
                                      const std::string& path, Day test_day,
                                      const EvalOptions& opts, ReadStats* stats) {
  return eval_multi_log(vocabs, std::vector<std::string>{path}, test_day, opts, stats);
}

std::vector<OovReport> eval_multi_log(const std::vector<Vocabulary>& vocabs,
                                      const std::vector<std::string>& paths, Day test_day,
                                      const EvalOptions& opts, ReadStats* stats) {
  const TimeWindow window = single_day(test_day);
  ReadStats st;
  CookieMap cookies;
  for (const auto& path : paths) {
    scan_log_into(path, window, vocabs, opts.pipeline, cookies, st);
  }
  if (stats) *stats = st;
  return finalize_reports(vocabs, cookies, test_day, canonical_thresholds(opts.oov_thresholds));
}

OovReport eval_per_cookie_log(const Vocabulary& vocab, const std::string& path, Day test_day,
                              const EvalOptions& opts, ReadStats* stats) {
  auto reports = eval_multi_log({vocab}, path, test_day, opts, stats);
  return std::move(reports[0]);
}

Ratio fraction_at_or_below(const OovReport& report, Ratio t) {
  for (const auto& [threshold, fraction] : report.fractions) {
    if (threshold == t) return fraction;
  }
  // Derivable when t is a multiple of 0.001.
  u128 scaled = static_cast<u128>(t.num) * 1000;
  if (t.den != 0 && scaled % t.den == 0 && ratio_le_raw(t.num, t.den, 1, 1)) {
    auto k = static_cast<std::uint64_t>(scaled / t.den);
    std::uint64_t count = report.histogram.at_zero;
    for (std::uint64_t i = 0; i < k; ++i) count += report.histogram.buckets[i];
    if (k == 1000) count += report.histogram.at_one;
    return Ratio::of(count, report.eligible_cookies);
  }
  throw UnknownThreshold("threshold not requested and not a multiple of 0.001");
}

std::string report_csv_header(const std::vector<Ratio>& thresholds) {
  std::string h =
      "vocab_size,threshold_C,train_window,test_day,total_tokens,oov_tokens,"
      "aggregate_oov,eligible_cookies,empty_cookies";
  for (const auto& t : canonical_thresholds(thresholds)) {
    h += ",frac_le_";
    h += to_decimal_shortest(t);
  }
  return h;
}

std::string report_csv_row(const OovReport& report) {
  std::ostringstream out;
  out << report.vocabulary_size << ',' << report.threshold << ','
      << format_window(report.train_window) << ',' << format_day(report.test_day) << ','
      << report.total_tokens << ',' << report.total_oov_tokens << ','
      << to_decimal6(report.aggregate_oov()) << ',' << report.eligible_cookies << ','
      << report.empty_cookies;
  for (const auto& [t, f] : report.fractions) out << ',' << to_decimal6(f);
  return out.str();
}

}  // namespace oov
