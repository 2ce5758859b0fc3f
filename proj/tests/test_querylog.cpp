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
#include <zlib.h>

#include <chrono>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "oov/error.hpp"
#include "oov/querylog.hpp"
#include "testutil.hpp"

using namespace oov;
using testutil::TempDir;

TEST_CASE("well-formed lines parse") {
  auto r = try_parse_log_line("2011-10-04\tcookie42\tpizza san francisco");
  REQUIRE(r.has_value());
  CHECK(format_day(r->day) == "2011-10-04");
  CHECK(r->cookie_id == "cookie42");
  CHECK(r->text == "pizza san francisco");

  auto empty_text = try_parse_log_line("2011-10-04\tc\t");
  REQUIRE(empty_text.has_value());
  CHECK(empty_text->text.empty());
}

TEST_CASE("malformed lines are rejected with a reason") {
  std::string why;
  CHECK(!try_parse_log_line("2011-10-04\tcookie42", &why));
  CHECK(why.find("field") != std::string::npos);
  CHECK(!try_parse_log_line("2011-10-04\tc\ttext\textra", &why));
  CHECK(!try_parse_log_line("2011-13-04\tc\ttext", &why));
  CHECK(why.find("date") != std::string::npos);
  CHECK(!try_parse_log_line("2011-10-4\tc\ttext", &why));
  CHECK(!try_parse_log_line("\tc\ttext", &why));
  CHECK(!try_parse_log_line("2011-10-04\t\ttext", &why));
  CHECK(why.find("cookie") != std::string::npos);
  CHECK(!try_parse_log_line("", &why));
  CHECK_THROWS_AS(parse_log_line("no tabs here"), MalformedRecord);
}

TEST_CASE("serialization inverts parsing") {
  QueryRecord r{parse_day("2011-10-04"), "cookie42", "pizza san francisco"};
  std::string line = serialize_record(r);
  CHECK(line == "2011-10-04\tcookie42\tpizza san francisco");
  CHECK(parse_log_line(line) == r);
}

TEST_CASE("window filtering keeps order") {
  std::vector<QueryRecord> records = {
      {parse_day("2011-10-03"), "a", "one"},
      {parse_day("2011-10-04"), "b", "two"},
      {parse_day("2011-10-10"), "c", "three"},
      {parse_day("2011-10-11"), "d", "four"},
  };
  auto kept = filter_window(records, make_window(parse_day("2011-10-04"), parse_day("2011-10-10")));
  REQUIRE(kept.size() == 2);
  CHECK(kept[0].cookie_id == "b");
  CHECK(kept[1].cookie_id == "c");
}

TEST_CASE("line reader handles plain files") {
  TempDir tmp;
  std::string path = tmp.file("plain.tsv");
  testutil::write_file(path, "first line\nsecond line\nlast without newline");
  LineReader reader(path);
  std::string line;
  REQUIRE(reader.next(line));
  CHECK(line == "first line");
  REQUIRE(reader.next(line));
  CHECK(line == "second line");
  REQUIRE(reader.next(line));
  CHECK(line == "last without newline");
  CHECK(!reader.next(line));
}

TEST_CASE("line reader handles empty files and blank lines") {
  TempDir tmp;
  std::string path = tmp.file("empty.tsv");
  testutil::write_file(path, "");
  LineReader empty(path);
  std::string line;
  CHECK(!empty.next(line));

  std::string path2 = tmp.file("blanks.tsv");
  testutil::write_file(path2, "\n\nx\n");
  LineReader blanks(path2);
  REQUIRE(blanks.next(line));
  CHECK(line.empty());
  REQUIRE(blanks.next(line));
  CHECK(line.empty());
  REQUIRE(blanks.next(line));
  CHECK(line == "x");
  CHECK(!blanks.next(line));
}

TEST_CASE("line reader inflates .gz files") {
  TempDir tmp;
  std::string path = tmp.file("log.tsv.gz");
  gzFile gz = gzopen(path.c_str(), "wb");
  REQUIRE(gz != nullptr);
  const std::string body = "2011-10-04\tc1\tpizza\n2011-10-05\tc2\tbaby food\n";
  REQUIRE(gzwrite(gz, body.data(), static_cast<unsigned>(body.size())) ==
          static_cast<int>(body.size()));
  REQUIRE(gzclose(gz) == Z_OK);

  LineReader reader(path);
  std::string line;
  REQUIRE(reader.next(line));
  CHECK(line == "2011-10-04\tc1\tpizza");
  REQUIRE(reader.next(line));
  CHECK(line == "2011-10-05\tc2\tbaby food");
  CHECK(!reader.next(line));
}

TEST_CASE("missing file raises IoFailure") {
  CHECK_THROWS_AS(LineReader("/nonexistent/really/not/here.tsv"), IoFailure);
}

TEST_CASE("window filtering composes like window intersection") {
  std::mt19937 rng(4242);
  Day base = parse_day("2011-10-01");
  auto day_in_month = [&] { return base + std::chrono::days(rng() % 30); };

  std::vector<QueryRecord> records;
  for (int i = 0; i < 200; ++i) {
    records.push_back({day_in_month(), "c" + std::to_string(rng() % 7), "q"});
  }
  auto random_window = [&] {
    Day a = day_in_month();
    Day b = day_in_month();
    return a <= b ? make_window(a, b) : make_window(b, a);
  };

  for (int trial = 0; trial < 50; ++trial) {
    TimeWindow w1 = random_window();
    TimeWindow w2 = random_window();

    auto once = filter_window(records, w1);
    CHECK(filter_window(once, w1) == once);

    auto chained = filter_window(once, w2);
    auto both = intersect(w1, w2);
    auto direct = both ? filter_window(records, *both) : std::vector<QueryRecord>{};
    CHECK(chained == direct);
    CHECK(filter_window(filter_window(records, w2), w1) == direct);
  }

  // Disjoint windows leave nothing no matter the order.
  TimeWindow early = make_window(base, base + std::chrono::days(2));
  TimeWindow late = make_window(base + std::chrono::days(20), base + std::chrono::days(25));
  CHECK(!intersect(early, late).has_value());
  CHECK(filter_window(filter_window(records, early), late).empty());
  CHECK(filter_window(filter_window(records, late), early).empty());
}
