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

#include "oov/querylog.hpp"

#include <zlib.h>

#include <cstdio>
#include <cstring>

#include "oov/error.hpp"

namespace oov {

std::optional<RecordView> try_parse_log_line(std::string_view line, std::string* why) {
  auto fail = [&](const char* reason) -> std::optional<RecordView> {
    if (why) *why = reason;
    return std::nullopt;
  };
  size_t t1 = line.find('\t');
  if (t1 == std::string_view::npos) return fail("expected 3 tab-separated fields");
  size_t t2 = line.find('\t', t1 + 1);
  if (t2 == std::string_view::npos) return fail("expected 3 tab-separated fields");
  if (line.find('\t', t2 + 1) != std::string_view::npos) {
    return fail("expected 3 tab-separated fields");
  }
  auto day = try_parse_day(line.substr(0, t1));
  if (!day) return fail("unparseable date");
  std::string_view cookie = line.substr(t1 + 1, t2 - t1 - 1);
  if (cookie.empty()) return fail("empty cookie id");
  return RecordView{*day, cookie, line.substr(t2 + 1)};
}

QueryRecord parse_log_line(std::string_view line) {
  std::string why;
  auto v = try_parse_log_line(line, &why);
  if (!v) {
    throw MalformedRecord("malformed log line (" + why + "): '" + std::string(line) + "'");
  }
  return materialize(*v);
}

std::string serialize_record(const QueryRecord& r) {
  std::string out = format_day(r.day);
  out.push_back('\t');
  out += r.cookie_id;
  out.push_back('\t');
  out += r.text;
  return out;
}

std::vector<QueryRecord> filter_window(const std::vector<QueryRecord>& records,
                                       TimeWindow window) {
  std::vector<QueryRecord> kept;
  for (const auto& r : records) {
    if (window.contains(r.day)) kept.push_back(r);
  }
  return kept;
}

namespace {

bool has_gz_suffix(const std::string& path) {
  return path.size() > 3 && path.compare(path.size() - 3, 3, ".gz") == 0;
}

}  // namespace

struct LineReader::Impl {
  std::FILE* file = nullptr;
  gzFile gz = nullptr;
  std::string buf;
  size_t pos = 0;
  bool eof = false;

  ~Impl() {
    if (file) std::fclose(file);
    if (gz) gzclose(gz);
  }

  bool fill() {
    char chunk[1 << 16];
    size_t n = 0;
    if (gz) {
      int got = gzread(gz, chunk, sizeof(chunk));
      if (got < 0) throw IoFailure("gzip read error");
      n = static_cast<size_t>(got);
    } else {
      n = std::fread(chunk, 1, sizeof(chunk), file);
      if (n == 0 && std::ferror(file)) throw IoFailure("read error");
    }
    if (n == 0) {
      eof = true;
      return false;
    }
    buf.append(chunk, n);
    return true;
  }
};

LineReader::LineReader(const std::string& path) : impl_(std::make_unique<Impl>()) {
  if (has_gz_suffix(path)) {
    impl_->gz = gzopen(path.c_str(), "rb");
    if (!impl_->gz) throw IoFailure("cannot open '" + path + "'");
  } else {
    impl_->file = std::fopen(path.c_str(), "rb");
    if (!impl_->file) throw IoFailure("cannot open '" + path + "'");
  }
}

LineReader::~LineReader() = default;

bool LineReader::next(std::string& line) {
  Impl& im = *impl_;
  for (;;) {
    const char* base = im.buf.data() + im.pos;
    size_t avail = im.buf.size() - im.pos;
    const char* nl = static_cast<const char*>(std::memchr(base, '\n', avail));
    if (nl) {
      line.assign(base, static_cast<size_t>(nl - base));
      im.pos += static_cast<size_t>(nl - base) + 1;
      return true;
    }
    if (im.eof) {
      if (avail == 0) return false;
      line.assign(base, avail);  // final line without newline
      im.pos = im.buf.size();
      return true;
    }
    // Compact and refill.
    im.buf.erase(0, im.pos);
    im.pos = 0;
    im.fill();
  }
}

}  // namespace oov
