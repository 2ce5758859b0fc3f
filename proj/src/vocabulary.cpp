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

#include "oov/vocabulary.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <vector>

#include "oov/error.hpp"

namespace oov {

Vocabulary build_vocabulary(const CountTable& table, std::uint64_t threshold) {
  if (threshold < 1) throw Error("count threshold must be >= 1");
  Vocabulary v;
  v.threshold = threshold;
  v.window = table.window;
  for (const auto& [word, n] : table.counts) {
    if (n >= threshold) v.words.insert(word);
  }
  return v;
}

void write_vocabulary(const Vocabulary& v, std::ostream& out) {
  std::vector<std::string_view> sorted;
  sorted.reserve(v.words.size());
  for (const auto& w : v.words) sorted.push_back(w);
  std::sort(sorted.begin(), sorted.end());
  out << "# window=" << format_window(v.window) << "\n";
  out << "# threshold=" << v.threshold << "\n";
  out << "# size=" << v.words.size() << "\n";
  for (auto w : sorted) out << w << "\n";
  if (!out) throw IoFailure("vocabulary write failed");
}

void write_vocabulary(const Vocabulary& v, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoFailure("cannot open '" + path + "' for writing");
  write_vocabulary(v, out);
}

Vocabulary read_vocabulary(std::istream& in, const VocabReadOptions& opts) {
  Vocabulary v;
  bool have_window = false, have_threshold = false;
  std::uint64_t declared_size = 0;
  bool have_size = false;
  std::string line, prev;
  bool first_word = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string_view s(line);
      s.remove_prefix(1);
      while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
      if (s.rfind("window=", 0) == 0) {
        auto w = try_parse_window(s.substr(7));
        if (!w) throw FormatError("bad vocabulary header: '" + line + "'");
        v.window = *w;
        have_window = true;
      } else if (s.rfind("threshold=", 0) == 0) {
        std::uint64_t c = 0;
        for (char ch : s.substr(10)) {
          if (ch < '0' || ch > '9') throw FormatError("bad vocabulary header: '" + line + "'");
          c = c * 10 + static_cast<std::uint64_t>(ch - '0');
        }
        if (c < 1) throw FormatError("bad vocabulary header: '" + line + "'");
        v.threshold = c;
        have_threshold = true;
      } else if (s.rfind("size=", 0) == 0) {
        declared_size = 0;
        for (char ch : s.substr(5)) {
          if (ch < '0' || ch > '9') throw FormatError("bad vocabulary header: '" + line + "'");
          declared_size = declared_size * 10 + static_cast<std::uint64_t>(ch - '0');
        }
        have_size = true;
      }
      // Unknown # lines are ignored for forward compatibility.
      continue;
    }
    if (!is_word(line, opts.norm)) {
      throw FormatError("vocabulary entry violates word invariant: '" + line + "'");
    }
    if (opts.strict && !first_word && line <= prev) {
      throw FormatError("vocabulary body not strictly sorted at '" + line + "'");
    }
    if (!v.words.insert(line).second) {
      throw FormatError("duplicate vocabulary entry: '" + line + "'");
    }
    prev = line;
    first_word = false;
  }
  if (!have_window || !have_threshold) {
    throw FormatError("vocabulary file missing window/threshold header");
  }
  if (have_size && declared_size != v.words.size()) {
    std::ostringstream msg;
    msg << "vocabulary header declares size=" << declared_size << " but body has "
        << v.words.size() << " words";
    throw FormatError(msg.str());
  }
  return v;
}

Vocabulary read_vocabulary(const std::string& path, const VocabReadOptions& opts) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot open '" + path + "'");
  return read_vocabulary(in, opts);
}

}  // namespace oov
