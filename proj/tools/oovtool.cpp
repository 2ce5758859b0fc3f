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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "oov/counting.hpp"
#include "oov/error.hpp"
#include "oov/normalizer.hpp"
#include "oov/oovmeter.hpp"
#include "oov/sweeper.hpp"
#include "oov/syngen.hpp"
#include "oov/vocabulary.hpp"

namespace {

using namespace oov;

constexpr int kExitOk = 0;
constexpr int kExitData = 1;
constexpr int kExitUsage = 2;
constexpr int kExitPrivacy = 3;

int default_workers() {
  if (const char* env = std::getenv("OOV_WORKERS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end && *end == '\0' && v >= 1 && v <= 1024) return static_cast<int>(v);
    std::cerr << "warning: ignoring invalid OOV_WORKERS value '" << env << "'\n";
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Flag-level problems collected before anything executes. A privacy
// problem outranks plain usage problems in the exit code.
struct Violations {
  std::vector<std::string> usage;
  std::vector<std::string> privacy;

  bool any() const { return !usage.empty() || !privacy.empty(); }
  int report() const {
    for (const auto& m : privacy) std::cerr << "error: " << m << "\n";
    for (const auto& m : usage) std::cerr << "error: " << m << "\n";
    return privacy.empty() ? kExitUsage : kExitPrivacy;
  }
};

struct Common {
  int workers = default_workers();
  bool strict = false;
  bool no_case_fold = false;
  bool unicode_alpha = false;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--workers", c.workers, "Parallel worker count (default: OOV_WORKERS or cores)")
      ->check(CLI::Range(1, 1024));
  sub->add_flag("--strict", c.strict, "Abort on the first malformed log line");
  sub->add_flag("--no-case-fold", c.no_case_fold, "Keep letter case instead of lowercasing");
  sub->add_flag("--unicode-alpha", c.unicode_alpha,
                "Accept Unicode letters, not just ASCII [A-Za-z]");
}

PipelineOptions pipeline_of(const Common& c) {
  PipelineOptions p;
  p.norm.case_fold = !c.no_case_fold;
  p.norm.unicode_alpha = c.unicode_alpha;
  p.on_malformed = c.strict ? MalformedPolicy::Strict : MalformedPolicy::Skip;
  p.workers = c.workers;
  return p;
}

void check_files_exist(const std::vector<std::string>& paths, Violations& v) {
  for (const auto& p : paths) {
    if (!std::filesystem::exists(p)) v.usage.push_back("no such file: " + p);
  }
}

std::optional<TimeWindow> parse_window_flags(const std::string& from, const std::string& to,
                                             Violations& v) {
  auto a = try_parse_day(from);
  auto b = try_parse_day(to);
  if (!a) v.usage.push_back("bad --from date: " + from);
  if (!b) v.usage.push_back("bad --to date: " + to);
  if (!a || !b) return std::nullopt;
  if (*a > *b) {
    v.usage.push_back("--from " + from + " is after --to " + to);
    return std::nullopt;
  }
  return TimeWindow{*a, *b};
}

std::vector<Ratio> parse_rate_flags(const std::vector<std::string>& raw, Violations& v) {
  std::vector<Ratio> out;
  for (const auto& s : raw) {
    auto r = Ratio::try_parse_decimal(s);
    if (!r || ratio_cmp(*r, Ratio{1, 1}) > 0) {
      v.usage.push_back("bad --oov-threshold (want a decimal in [0, 1]): " + s);
      continue;
    }
    out.push_back(*r);
  }
  return out;
}

void check_privacy_floor(const std::vector<std::uint64_t>& thresholds, std::uint64_t floor,
                         bool allow_low_count, Violations& v) {
  if (allow_low_count) return;
  for (auto c : thresholds) {
    if (c < floor) {
      v.privacy.push_back("count threshold " + std::to_string(c) +
                          " is below the privacy floor " + std::to_string(floor) +
                          " (use --allow-low-count to override)");
    }
  }
}

// Header-only peek at a vocabulary file's train window, for pre-execution
// validation; body problems surface later during the real read.
std::optional<TimeWindow> peek_vocab_window(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] != '#') break;
    if (line.rfind("# window=", 0) == 0) return try_parse_window(line.substr(9));
  }
  return std::nullopt;
}

void write_text(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoFailure("cannot open for writing: " + path);
  out << body;
  out.close();
  if (!out) throw IoFailure("write failed: " + path);
}

// ---- build-vocab ----------------------------------------------------------

struct BuildArgs {
  Common common;
  std::vector<std::string> logs;
  std::string from, to;
  std::uint64_t min_count = 0;
  std::string out;
  std::uint64_t privacy_floor = kPrivacyFloor;
  bool allow_low_count = false;
};

int run_build_vocab(const BuildArgs& a) {
  Violations v;
  check_files_exist(a.logs, v);
  auto window = parse_window_flags(a.from, a.to, v);
  if (a.min_count < 1) v.usage.push_back("--min-count must be >= 1");
  if (a.privacy_floor < 1) v.usage.push_back("--privacy-floor must be >= 1");
  check_privacy_floor({a.min_count}, a.privacy_floor, a.allow_low_count, v);
  if (v.any()) return v.report();

  ReadStats stats;
  CountTable table = count_logs(a.logs, *window, pipeline_of(a.common), &stats);
  Vocabulary vocab = build_vocabulary(table, a.min_count);
  write_vocabulary(vocab, a.out);
  std::cerr << "counted " << table.total_tokens << " tokens (" << table.distinct_words()
            << " distinct) from " << stats.records_in_window << " records in "
            << format_window(*window) << "\n";
  if (stats.malformed > 0) std::cerr << "skipped " << stats.malformed << " malformed lines\n";
  std::cerr << "vocabulary of " << vocab.size() << " words (min count " << a.min_count
            << ") written to " << a.out << "\n";
  return kExitOk;
}

// ---- eval-oov --------------------------------------------------------------

struct EvalArgs {
  Common common;
  std::vector<std::string> logs;
  std::string vocab;
  std::string test_day;
  std::vector<std::string> oov_thresholds = {"0.01"};
  std::string out;
};

int run_eval_oov(const EvalArgs& a) {
  Violations v;
  check_files_exist(a.logs, v);
  check_files_exist({a.vocab}, v);
  auto day = try_parse_day(a.test_day);
  if (!day) v.usage.push_back("bad --test-day date: " + a.test_day);
  auto thresholds = parse_rate_flags(a.oov_thresholds, v);
  if (day) {
    if (auto w = peek_vocab_window(a.vocab); w && !validate_disjoint(*w, single_day(*day))) {
      v.usage.push_back("test day " + a.test_day + " does not start strictly after train window " +
                        format_window(*w));
    }
  }
  if (v.any()) return v.report();

  EvalOptions opts;
  opts.pipeline = pipeline_of(a.common);
  opts.oov_thresholds = thresholds;
  VocabReadOptions vr;
  vr.strict = a.common.strict;
  vr.norm = opts.pipeline.norm;
  Vocabulary vocab = read_vocabulary(a.vocab, vr);
  if (!validate_disjoint(vocab.window, single_day(*day))) {
    std::cerr << "error: test day " << a.test_day
              << " does not start strictly after train window " << format_window(vocab.window)
              << "\n";
    return kExitUsage;
  }
  ReadStats stats;
  auto reports = eval_multi_log({vocab}, a.logs, *day, opts, &stats);
  std::string csv = report_csv_header(opts.oov_thresholds) + "\n" + report_csv_row(reports[0]) +
                    "\n";
  if (a.out.empty()) {
    std::cout << csv;
  } else {
    write_text(a.out, csv);
  }
  if (stats.malformed > 0) std::cerr << "skipped " << stats.malformed << " malformed lines\n";
  std::cerr << "evaluated " << reports[0].total_tokens << " tokens from "
            << reports[0].eligible_cookies << " cookies on " << a.test_day << "\n";
  return kExitOk;
}

// ---- sweep -----------------------------------------------------------------

struct SweepArgs {
  Common common;
  std::string kind;
  std::vector<std::string> logs;
  std::vector<std::string> train;
  std::vector<std::uint64_t> min_counts;
  std::vector<std::string> test_days;
  std::vector<std::string> oov_thresholds = {"0.01"};
  std::string out;
  std::string plotdata;
  std::uint64_t privacy_floor = kPrivacyFloor;
  bool allow_low_count = false;
};

int run_sweep(const SweepArgs& a) {
  Violations v;
  auto kind = parse_sweep_kind(a.kind);
  if (!kind) v.usage.push_back("bad --kind (want size, freshness, or timeframe): " + a.kind);
  check_files_exist(a.logs, v);

  std::vector<TimeWindow> windows;
  for (const auto& s : a.train) {
    auto w = try_parse_window(s);
    if (!w) {
      v.usage.push_back("bad --train window (want YYYY-MM-DD..YYYY-MM-DD): " + s);
      continue;
    }
    windows.push_back(*w);
  }
  std::vector<Day> days;
  for (const auto& s : a.test_days) {
    auto d = try_parse_day(s);
    if (!d) {
      v.usage.push_back("bad --test-day date: " + s);
      continue;
    }
    days.push_back(*d);
  }
  auto rates = parse_rate_flags(a.oov_thresholds, v);
  if (a.privacy_floor < 1) v.usage.push_back("--privacy-floor must be >= 1");
  check_privacy_floor(a.min_counts, a.privacy_floor, a.allow_low_count, v);

  if (kind) {
    if (*kind != SweepKind::Timeframe && windows.size() != 1 && !a.train.empty()) {
      v.usage.push_back(a.kind + " sweep takes exactly one --train window");
    }
    if (*kind != SweepKind::Freshness && days.size() != 1 && !a.test_days.empty()) {
      v.usage.push_back(a.kind + " sweep takes exactly one --test-day");
    }
    if (a.train.empty()) v.usage.push_back("--train is required");
    if (a.test_days.empty()) v.usage.push_back("--test-day is required");
    if (a.min_counts.empty()) v.usage.push_back("--min-count is required");
  }
  if (v.any()) return v.report();

  SweepSpec spec;
  spec.kind = *kind;
  spec.train_windows = windows;
  spec.thresholds = a.min_counts;
  spec.test_days = days;
  spec.oov_thresholds = rates;
  spec.allow_low_count = true;  // the configurable floor was enforced above
  try {
    spec.validate();
  } catch (const Error& e) {
    v.usage.push_back(e.what());
    return v.report();
  }

  SweepOptions opts;
  opts.eval.pipeline = pipeline_of(a.common);
  opts.eval.oov_thresholds = rates;

  SweepResult result;
  switch (*kind) {
    case SweepKind::Size:
      result = run_size_sweep(windows[0], a.min_counts, days[0], a.logs, opts);
      break;
    case SweepKind::Freshness: {
      CountTable table = count_logs(a.logs, windows[0], opts.eval.pipeline);
      std::vector<Vocabulary> vocabs;
      vocabs.reserve(a.min_counts.size());
      for (auto c : a.min_counts) vocabs.push_back(build_vocabulary(table, c));
      result = run_freshness_sweep(vocabs, days, a.logs, opts);
      break;
    }
    case SweepKind::Timeframe:
      result = run_timeframe_sweep(windows, a.min_counts, days[0], a.logs, opts);
      break;
  }
  for (const auto& e : result.errors) std::cerr << "warning: " << e << "\n";

  if (a.out.empty()) {
    emit_csv(result, std::cout);
  } else {
    emit_csv(result, a.out);
    std::cerr << "sweep csv (" << result.rows.size() << " rows) written to " << a.out << "\n";
  }
  if (!a.plotdata.empty()) {
    std::filesystem::create_directories(a.plotdata);
    auto files = emit_plotdata(result, a.plotdata);
    std::cerr << files.size() << " plotdata files written to " << a.plotdata << "\n";
  }
  return kExitOk;
}

// ---- gen -------------------------------------------------------------------

struct GenArgs {
  std::uint64_t seed = 1;
  std::string from, to;
  std::uint64_t cookies_per_day = 100;
  std::string queries_per_cookie = "fixed:4";
  std::string words_per_query = "fixed:3";
  double zipf_exponent = 1.05;
  double zipf_shift = 2.7;
  std::uint64_t type_universe = 10000;
  double drift_rate = 0.0;
  double noise_rate = 0.0;
  std::string out;
  std::string manifest;
};

int run_gen(const GenArgs& a) {
  Violations v;
  auto window = parse_window_flags(a.from, a.to, v);
  SynSpec spec;
  spec.seed = a.seed;
  if (window) {
    for (Day d = window->start; d <= window->end; d += std::chrono::days(1))
      spec.days.push_back(d);
  }
  spec.cookies_per_day = a.cookies_per_day;
  if (auto d = DistSpec::parse(a.queries_per_cookie)) {
    spec.queries_per_cookie = *d;
  } else {
    v.usage.push_back("bad --queries-per-cookie (want fixed:N or geom:M): " +
                      a.queries_per_cookie);
  }
  if (auto d = DistSpec::parse(a.words_per_query)) {
    spec.words_per_query = *d;
  } else {
    v.usage.push_back("bad --words-per-query (want fixed:N or geom:M): " + a.words_per_query);
  }
  spec.zipf_exponent = a.zipf_exponent;
  spec.zipf_shift = a.zipf_shift;
  spec.type_universe = a.type_universe;
  spec.drift_rate = a.drift_rate;
  spec.noise_rate = a.noise_rate;
  if (!v.any()) {
    try {
      spec.validate();
    } catch (const Error& e) {
      v.usage.push_back(e.what());
    }
  }
  if (v.any()) return v.report();

  std::string manifest = a.manifest.empty() ? a.out + ".manifest" : a.manifest;
  GenSummary sum = gen_stream(spec, a.out, manifest);
  std::cerr << "wrote " << sum.records << " records (" << sum.tokens << " tokens) over "
            << spec.days.size() << " days to " << a.out << "\n";
  std::cerr << "manifest written to " << manifest << "\n";
  return kExitOk;
}

// ---- normalize -------------------------------------------------------------

struct NormalizeArgs {
  bool no_case_fold = false;
  bool unicode_alpha = false;
};

int run_normalize(const NormalizeArgs& a) {
  NormalizeOptions norm;
  norm.case_fold = !a.no_case_fold;
  norm.unicode_alpha = a.unicode_alpha;
  std::ios::sync_with_stdio(false);
  std::string line, out;
  while (std::getline(std::cin, line)) {
    out.clear();
    for_each_normalized(line, norm, [&](std::string_view w) {
      if (!out.empty()) out.push_back(' ');
      out.append(w.data(), w.size());
    });
    out.push_back('\n');
    std::cout << out;
  }
  return kExitOk;
}

int guarded(const std::function<int()>& f) {
  try {
    return f();
  } catch (const PrivacyViolation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitPrivacy;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Count-threshold vocabularies and out-of-vocabulary rates over query logs"};
  app.require_subcommand(1);

  BuildArgs build;
  CLI::App* sub_build =
      app.add_subcommand("build-vocab", "Count words in a training window and write the "
                                        "vocabulary of words seen at least --min-count times");
  sub_build->add_option("--logs", build.logs, "Query log files (.gz accepted)")->required();
  sub_build->add_option("--from", build.from, "Training window start (YYYY-MM-DD)")->required();
  sub_build->add_option("--to", build.to, "Training window end (YYYY-MM-DD)")->required();
  sub_build->add_option("--min-count", build.min_count, "Count threshold C")->required();
  sub_build->add_option("--out", build.out, "Vocabulary file to write")->required();
  sub_build->add_option("--privacy-floor", build.privacy_floor,
                        "Lowest count threshold accepted without override");
  sub_build->add_flag("--allow-low-count", build.allow_low_count,
                      "Permit thresholds below the privacy floor");
  add_common(sub_build, build.common);

  EvalArgs eval;
  CLI::App* sub_eval = app.add_subcommand(
      "eval-oov", "Evaluate a vocabulary on one test day: aggregate and per-cookie OoV rates");
  sub_eval->add_option("--logs", eval.logs, "Query log files (.gz accepted)")->required();
  sub_eval->add_option("--vocab", eval.vocab, "Vocabulary file")->required();
  sub_eval->add_option("--test-day", eval.test_day, "Test day (YYYY-MM-DD)")->required();
  sub_eval->add_option("--oov-threshold", eval.oov_thresholds,
                       "Per-cookie rate threshold for the frac_le column (repeatable)");
  sub_eval->add_option("--out", eval.out, "Report CSV path (default: stdout)");
  add_common(sub_eval, eval.common);

  SweepArgs sweep;
  CLI::App* sub_sweep = app.add_subcommand(
      "sweep", "Run a size, freshness, or timeframe experiment and emit its report table");
  sub_sweep->add_option("--kind", sweep.kind, "size | freshness | timeframe")->required();
  sub_sweep->add_option("--logs", sweep.logs, "Query log files (.gz accepted)")->required();
  sub_sweep->add_option("--train", sweep.train,
                        "Train window YYYY-MM-DD..YYYY-MM-DD (repeatable for timeframe)")
      ->required();
  sub_sweep->add_option("--min-count", sweep.min_counts, "Count threshold ladder (repeatable)")
      ->required();
  sub_sweep->add_option("--test-day", sweep.test_days,
                        "Test day YYYY-MM-DD (repeatable for freshness)")
      ->required();
  sub_sweep->add_option("--oov-threshold", sweep.oov_thresholds,
                        "Per-cookie rate threshold (repeatable)");
  sub_sweep->add_option("--out", sweep.out, "Sweep CSV path (default: stdout)");
  sub_sweep->add_option("--plotdata", sweep.plotdata, "Directory for two-column .dat series");
  sub_sweep->add_option("--privacy-floor", sweep.privacy_floor,
                        "Lowest count threshold accepted without override");
  sub_sweep->add_flag("--allow-low-count", sweep.allow_low_count,
                      "Permit thresholds below the privacy floor");
  add_common(sub_sweep, sweep.common);

  GenArgs gen;
  CLI::App* sub_gen =
      app.add_subcommand("gen", "Generate a deterministic synthetic query log plus manifest");
  sub_gen->add_option("--seed", gen.seed, "Random seed");
  sub_gen->add_option("--from", gen.from, "First day (YYYY-MM-DD)")->required();
  sub_gen->add_option("--to", gen.to, "Last day (YYYY-MM-DD)")->required();
  sub_gen->add_option("--cookies-per-day", gen.cookies_per_day, "Cookies per day");
  sub_gen->add_option("--queries-per-cookie", gen.queries_per_cookie, "fixed:N or geom:M");
  sub_gen->add_option("--words-per-query", gen.words_per_query, "fixed:N or geom:M");
  sub_gen->add_option("--zipf-exponent", gen.zipf_exponent, "Rank-law exponent s");
  sub_gen->add_option("--zipf-shift", gen.zipf_shift, "Rank-law shift q");
  sub_gen->add_option("--type-universe", gen.type_universe, "Number of distinct word shapes");
  sub_gen->add_option("--drift-rate", gen.drift_rate,
                      "Fraction of word shapes replaced per day");
  sub_gen->add_option("--noise-rate", gen.noise_rate,
                      "Probability a token gets a non-alphabetic character");
  sub_gen->add_option("--out", gen.out, "Log file to write (.gz accepted)")->required();
  sub_gen->add_option("--manifest", gen.manifest, "Manifest path (default: <out>.manifest)");

  NormalizeArgs norm;
  CLI::App* sub_norm = app.add_subcommand(
      "normalize", "Read queries on stdin, write space-joined normalized words per line");
  sub_norm->add_flag("--no-case-fold", norm.no_case_fold,
                     "Keep letter case instead of lowercasing");
  sub_norm->add_flag("--unicode-alpha", norm.unicode_alpha,
                     "Accept Unicode letters, not just ASCII [A-Za-z]");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (app.got_subcommand(sub_build)) return guarded([&] { return run_build_vocab(build); });
  if (app.got_subcommand(sub_eval)) return guarded([&] { return run_eval_oov(eval); });
  if (app.got_subcommand(sub_sweep)) return guarded([&] { return run_sweep(sweep); });
  if (app.got_subcommand(sub_gen)) return guarded([&] { return run_gen(gen); });
  if (app.got_subcommand(sub_norm)) return guarded([&] { return run_normalize(norm); });
  return kExitUsage;
}
