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
//
// Compares the serial reference kernels against the parallel ones on a
// generated stream. Run with --benchmark_time_unit=ms for readable output.

#include <benchmark/benchmark.h>

#include <cstdio>
#include <filesystem>
#include <string>

#include "oov/counting.hpp"
#include "oov/date.hpp"
#include "oov/normalizer.hpp"
#include "oov/oovmeter.hpp"
#include "oov/syngen.hpp"
#include "oov/vocabulary.hpp"

namespace {

using namespace oov;

// One shared stream: 8 days x 500 cookies x 20 queries x 4 words, about
// 320k tokens, mildly noisy so the malformed and rejection paths run too.
struct Stream {
  std::string dir;
  std::string log;
  TimeWindow train{};
  Day test_day{};
  Vocabulary vocab;

  Stream() {
    char tmpl[] = "/tmp/oovbenchXXXXXX";
    dir = mkdtemp(tmpl);
    log = dir + "/bench.tsv";
    SynSpec spec;
    spec.seed = 7;
    for (int i = 0; i < 8; ++i) spec.days.push_back(parse_day("2026-01-01") + std::chrono::days(i));
    spec.cookies_per_day = 500;
    spec.queries_per_cookie = DistSpec{DistSpec::Kind::Fixed, 20, 1.0};
    spec.words_per_query = DistSpec{DistSpec::Kind::Fixed, 4, 1.0};
    spec.type_universe = 50000;
    spec.noise_rate = 0.02;
    gen_stream(spec, log, log + ".manifest");
    train = {spec.days.front(), spec.days.front() + std::chrono::days(6)};
    test_day = spec.days.back();
    vocab = build_vocabulary(count_log(log, train), 15);
  }
  ~Stream() { std::filesystem::remove_all(dir); }
};

Stream& stream() {
  static Stream s;
  return s;
}

void BM_CountSerial(benchmark::State& state) {
  const Stream& s = stream();
  for (auto _ : state) {
    CountTable t = count_log_serial(s.log, s.train);
    benchmark::DoNotOptimize(t.total_tokens);
  }
}
BENCHMARK(BM_CountSerial);

void BM_CountParallel(benchmark::State& state) {
  const Stream& s = stream();
  PipelineOptions opts;
  opts.workers = static_cast<int>(state.range(0));
  for (auto _ : state) {
    CountTable t = count_log_parallel(s.log, s.train, opts);
    benchmark::DoNotOptimize(t.total_tokens);
  }
}
BENCHMARK(BM_CountParallel)->Arg(1)->Arg(2)->Arg(4)->Arg(8);

void BM_EvalSerial(benchmark::State& state) {
  const Stream& s = stream();
  EvalOptions opts;
  opts.pipeline.workers = 1;
  for (auto _ : state) {
    OovReport r = eval_per_cookie_log(s.vocab, s.log, s.test_day, opts);
    benchmark::DoNotOptimize(r.total_tokens);
  }
}
BENCHMARK(BM_EvalSerial);

void BM_EvalParallel(benchmark::State& state) {
  const Stream& s = stream();
  EvalOptions opts;
  opts.pipeline.workers = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto r = eval_multi_log({s.vocab}, s.log, s.test_day, opts);
    benchmark::DoNotOptimize(r[0].total_tokens);
  }
}
BENCHMARK(BM_EvalParallel)->Arg(1)->Arg(2)->Arg(4)->Arg(8);

void BM_Normalize(benchmark::State& state) {
  NormalizeOptions norm;
  std::string q = "Pizza SAN Francisco 4chan gawker.com baby food status don't";
  for (auto _ : state) {
    std::uint64_t kept = 0;
    for_each_normalized(q, norm, [&](std::string_view) { ++kept; });
    benchmark::DoNotOptimize(kept);
  }
}
BENCHMARK(BM_Normalize);

}  // namespace

BENCHMARK_MAIN();
