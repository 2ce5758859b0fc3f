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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <numeric>

#include "doctest.h"
#include "oov/counting.hpp"
#include "oov/error.hpp"
#include "oov/oovmeter.hpp"
#include "testutil.hpp"

using namespace oov;
using testutil::TempDir;

namespace {

Vocabulary vocab_of(std::vector<std::string> words) {
  Vocabulary v;
  for (auto& w : words) v.words.insert(std::move(w));
  v.threshold = 1;
  v.window = make_window(parse_day("2011-10-04"), parse_day("2011-10-10"));
  return v;
}

const Day kTestDay = parse_day("2011-10-11");

std::vector<QueryRecord> one_cookie(const std::string& text) {
  return {{kTestDay, "c1", text}};
}

}  // namespace

TEST_CASE("aggregate rate by hand") {
  Vocabulary v = vocab_of({"pizza", "san"});
  auto res = eval_aggregate(v, one_cookie("pizza san francisco pizza"));
  CHECK(res.total_tokens == 4);
  CHECK(res.total_oov_tokens == 1);
  CHECK(res.rate() == Ratio{1, 4});
}

TEST_CASE("aggregate rate extremes") {
  CHECK(eval_aggregate(vocab_of({}), one_cookie("pizza san")).rate() == Ratio{1, 1});
  CHECK(eval_aggregate(vocab_of({"pizza", "san"}), one_cookie("pizza san")).rate() ==
        Ratio{0, 1});
  CHECK_THROWS_AS(eval_aggregate(vocab_of({"pizza"}), one_cookie("gawker.com 4chan")),
                  EmptyTestSet);
  CHECK_THROWS_AS(eval_aggregate(vocab_of({"pizza"}), {}), EmptyTestSet);
}

TEST_CASE("per-cookie fractions by hand") {
  Vocabulary v = vocab_of({"pizza"});
  std::vector<QueryRecord> records = {
      {kTestDay, "c1", "pizza francisco"},  // rate 1/2
      {kTestDay, "c2", "pizza"},            // rate 0
  };
  OovReport rep = eval_per_cookie(v, records, kTestDay, {Ratio{1, 100}});
  CHECK(rep.eligible_cookies == 2);
  CHECK(rep.empty_cookies == 0);
  CHECK(rep.total_tokens == 3);
  CHECK(rep.total_oov_tokens == 1);
  CHECK(fraction_at_or_below(rep, Ratio{1, 100}) == Ratio{1, 2});
  CHECK(fraction_at_or_below(rep, Ratio{1, 1}) == Ratio{1, 1});
  CHECK(fraction_at_or_below(rep, Ratio{0, 1}) == Ratio{1, 2});
}

TEST_CASE("full coverage puts every cookie at or below any threshold") {
  Vocabulary v = vocab_of({"pizza", "san"});
  std::vector<QueryRecord> records = {
      {kTestDay, "c1", "pizza san"},
      {kTestDay, "c2", "san"},
  };
  OovReport rep = eval_per_cookie(v, records, kTestDay, {Ratio{1, 100}});
  CHECK(fraction_at_or_below(rep, Ratio{1, 100}) == Ratio{1, 1});
}

TEST_CASE("cookies with no surviving tokens are empty, not zero-rate") {
  Vocabulary v = vocab_of({"pizza"});
  std::vector<QueryRecord> records = {
      {kTestDay, "c1", "pizza"},
      {kTestDay, "c2", "gawker.com"},
      {kTestDay, "c3", ""},
  };
  OovReport rep = eval_per_cookie(v, records, kTestDay, {Ratio{1, 100}});
  CHECK(rep.eligible_cookies == 1);
  CHECK(rep.empty_cookies == 2);
  CHECK(fraction_at_or_below(rep, Ratio{1, 100}) == Ratio{1, 1});

  std::vector<QueryRecord> all_empty = {{kTestDay, "c1", "gawker.com"}};
  CHECK_THROWS_AS(eval_per_cookie(v, all_empty, kTestDay, {Ratio{1, 100}}), NoEligibleCookies);
}

TEST_CASE("threshold comparison is inclusive at the boundary") {
  Vocabulary v = vocab_of({"a"});
  // One cookie at exactly 1/100: 99 in-vocabulary tokens, 1 out.
  std::string text;
  for (int i = 0; i < 99; ++i) text += "a ";
  text += "zz";
  OovReport rep = eval_per_cookie(v, one_cookie(text), kTestDay, {Ratio{1, 100}});
  CHECK(rep.total_tokens == 100);
  CHECK(rep.total_oov_tokens == 1);
  CHECK(fraction_at_or_below(rep, Ratio{1, 100}) == Ratio{1, 1});

  // One token more out of vocabulary tips it strictly above 0.01.
  std::string worse = text + " zz";
  OovReport rep2 = eval_per_cookie(v, one_cookie(worse), kTestDay, {Ratio{1, 100}});
  CHECK(fraction_at_or_below(rep2, Ratio{1, 100}) == Ratio{0, 1});
}

TEST_CASE("histogram buckets are right-closed and complete") {
  Vocabulary v = vocab_of({"a"});
  std::string rate_one_in_150 = "zz";  // 1 out of 150 tokens
  for (int i = 0; i < 149; ++i) rate_one_in_150 += " a";
  std::vector<QueryRecord> records = {
      {kTestDay, "c0", "a a"},       // rate 0 -> at_zero
      {kTestDay, "c1", "zz zz"},     // rate 1 -> at_one
      {kTestDay, "c2", "a zz"},      // rate 1/2 -> bucket 499
      {kTestDay, "c3", "a a a zz"},  // rate 1/4 -> bucket 249
      {kTestDay, "c4", rate_one_in_150},
  };
  OovReport rep = eval_per_cookie(v, records, kTestDay, {Ratio{1, 100}});
  CHECK(rep.histogram.at_zero == 1);
  CHECK(rep.histogram.at_one == 1);
  CHECK(rep.histogram.buckets[499] == 1);  // (0.499, 0.500]
  CHECK(rep.histogram.buckets[249] == 1);  // (0.249, 0.250]
  CHECK(rep.histogram.buckets[6] == 1);    // 1/150 = 0.00666… in (0.006, 0.007]
  std::uint64_t total = rep.histogram.at_zero + rep.histogram.at_one;
  total = std::accumulate(rep.histogram.buckets.begin(), rep.histogram.buckets.end(), total);
  CHECK(total == rep.eligible_cookies);
}

TEST_CASE("fractions derive from the histogram for millesimal thresholds") {
  Vocabulary v = vocab_of({"a"});
  std::vector<QueryRecord> records = {
      {kTestDay, "c0", "a"},
      {kTestDay, "c1", "a zz"},
      {kTestDay, "c2", "zz"},
      {kTestDay, "c3", "a a a zz"},
  };
  OovReport rep = eval_per_cookie(v, records, kTestDay, {Ratio{1, 100}});
  // 0.5 = 500/1000 was not requested but is derivable: rates {0, 1/2,
  // 1, 1/4} give 3 of 4 at or below.
  CHECK(fraction_at_or_below(rep, Ratio{1, 2}) == Ratio{3, 4});
  CHECK(fraction_at_or_below(rep, Ratio{1, 4}) == Ratio{1, 2});
  // 1/3 is neither requested nor a multiple of 0.001.
  CHECK_THROWS_AS(fraction_at_or_below(rep, Ratio{1, 3}), UnknownThreshold);
}

TEST_CASE("aggregate equals the token-weighted mean of per-cookie rates") {
  for (std::uint32_t seed : {5u, 6u, 7u}) {
    auto corpus = testutil::make_random_corpus(seed, false);
    CountTable t = count_words(corpus.records, corpus.train);
    Vocabulary v = build_vocabulary(t, 2);
    std::vector<CookieStats> detail;
    OovReport rep;
    try {
      rep = eval_per_cookie(v, corpus.records, corpus.test_day, {Ratio{1, 100}}, {}, &detail);
    } catch (const NoEligibleCookies&) {
      continue;
    }
    std::uint64_t tok = 0, oov = 0;
    for (const auto& c : detail) {
      tok += c.tokens;
      oov += c.oov_tokens;
    }
    CHECK(tok == rep.total_tokens);
    CHECK(oov == rep.total_oov_tokens);
    CHECK(Ratio::of(oov, tok) == rep.aggregate_oov());
  }
}

TEST_CASE("requested thresholds always include 0.01 first") {
  auto ts = canonical_thresholds({Ratio{1, 2}, Ratio{1, 100}, Ratio{1, 1000}, Ratio{1, 2}});
  REQUIRE(ts.size() == 3);
  CHECK(ts[0] == Ratio{1, 100});
  CHECK(ts[1] == Ratio{1, 1000});
  CHECK(ts[2] == Ratio{1, 2});

  auto none = canonical_thresholds({});
  REQUIRE(none.size() == 1);
  CHECK(none[0] == Ratio{1, 100});
}

TEST_CASE("streaming evaluation matches the in-memory path") {
  TempDir tmp;
  for (std::uint32_t seed : {8u, 9u}) {
    auto corpus = testutil::make_random_corpus(seed);
    std::string path = tmp.file("log" + std::to_string(seed) + ".tsv");
    testutil::write_file(path, corpus.log_text);
    CountTable t = count_words(corpus.records, corpus.train);
    Vocabulary v = build_vocabulary(t, 2);

    OovReport ref;
    bool ref_threw = false;
    try {
      ref = eval_per_cookie(v, corpus.records, corpus.test_day, {Ratio{1, 100}});
    } catch (const NoEligibleCookies&) {
      ref_threw = true;
    }
    if (ref_threw) {
      CHECK_THROWS_AS(eval_per_cookie_log(v, path, corpus.test_day), NoEligibleCookies);
    } else {
      OovReport streamed = eval_per_cookie_log(v, path, corpus.test_day);
      CHECK(streamed == ref);
    }
  }
}

TEST_CASE("csv rendering is fixed-format") {
  Vocabulary v = vocab_of({"pizza"});
  std::vector<QueryRecord> records = {
      {kTestDay, "c1", "pizza francisco"},
      {kTestDay, "c2", "pizza"},
      {kTestDay, "c3", "gawker.com"},
  };
  OovReport rep = eval_per_cookie(v, records, kTestDay, {Ratio{1, 100}, Ratio{1, 2}});
  CHECK(report_csv_header({Ratio{1, 100}, Ratio{1, 2}}) ==
        "vocab_size,threshold_C,train_window,test_day,total_tokens,oov_tokens,aggregate_oov,"
        "eligible_cookies,empty_cookies,frac_le_0.01,frac_le_0.5");
  CHECK(report_csv_row(rep) ==
        "1,1,2011-10-04..2011-10-10,2011-10-11,3,1,0.333333,2,1,0.500000,1.000000");
}
