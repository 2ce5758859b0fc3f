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

#include "oov/normalizer.hpp"

#include <locale.h>
#include <wctype.h>

#include <cstdint>

namespace oov {

namespace {

// Decodes one UTF-8 sequence starting at s[i]. On invalid input consumes a
// single byte and reports it as invalid (cp set to the byte value).
struct Decoded {
  char32_t cp;
  unsigned len;
  bool valid;
};

Decoded decode_utf8(std::string_view s, size_t i) {
  auto byte = [&](size_t k) { return static_cast<unsigned char>(s[k]); };
  unsigned char b0 = byte(i);
  if (b0 < 0x80) return {b0, 1, true};
  auto cont = [&](size_t k) { return k < s.size() && (byte(k) & 0xC0) == 0x80; };
  if ((b0 & 0xE0) == 0xC0) {
    if (!cont(i + 1)) return {b0, 1, false};
    char32_t cp = ((b0 & 0x1Fu) << 6) | (byte(i + 1) & 0x3Fu);
    if (cp < 0x80) return {b0, 1, false};  // overlong
    return {cp, 2, true};
  }
  if ((b0 & 0xF0) == 0xE0) {
    if (!cont(i + 1) || !cont(i + 2)) return {b0, 1, false};
    char32_t cp = ((b0 & 0x0Fu) << 12) | ((byte(i + 1) & 0x3Fu) << 6) | (byte(i + 2) & 0x3Fu);
    if (cp < 0x800 || (cp >= 0xD800 && cp <= 0xDFFF)) return {b0, 1, false};
    return {cp, 3, true};
  }
  if ((b0 & 0xF8) == 0xF0) {
    if (!cont(i + 1) || !cont(i + 2) || !cont(i + 3)) return {b0, 1, false};
    char32_t cp = ((b0 & 0x07u) << 18) | ((byte(i + 1) & 0x3Fu) << 12) |
                  ((byte(i + 2) & 0x3Fu) << 6) | (byte(i + 3) & 0x3Fu);
    if (cp < 0x10000 || cp > 0x10FFFF) return {b0, 1, false};
    return {cp, 4, true};
  }
  return {b0, 1, false};
}

bool is_space_cp(char32_t cp) {
  switch (cp) {
    case U' ':
    case U'\t':
    case U'\n':
    case U'\v':
    case U'\f':
    case U'\r':
    case 0x0085:  // NEL
    case 0x00A0:  // NBSP
    case 0x1680:
    case 0x2028:
    case 0x2029:
    case 0x202F:
    case 0x205F:
    case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

// Unicode character classification comes from the C.UTF-8 locale; when it
// is unavailable the unicode_alpha mode degrades to ASCII-only rules.
locale_t utf8_locale() {
  static locale_t loc = newlocale(LC_ALL_MASK, "C.UTF-8", static_cast<locale_t>(nullptr));
  return loc;
}

bool is_ascii_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

char ascii_lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

// Appends the normalized form of `token` to `out` and returns true, or
// returns false when the token is rejected. `out` is only appended to on
// success.
bool normalize_into(std::string_view token, const NormalizeOptions& opts, std::string& out) {
  if (token.empty()) return false;
  size_t mark = out.size();
  if (!opts.unicode_alpha) {
    for (char c : token) {
      if (!is_ascii_alpha(c)) {
        out.resize(mark);
        return false;
      }
      out.push_back(opts.case_fold ? ascii_lower(c) : c);
    }
    return true;
  }
  locale_t loc = utf8_locale();
  for (size_t i = 0; i < token.size();) {
    Decoded d = decode_utf8(token, i);
    if (!d.valid) {
      out.resize(mark);
      return false;
    }
    bool alpha = d.cp < 0x80
                     ? is_ascii_alpha(static_cast<char>(d.cp))
                     : (loc != nullptr && iswalpha_l(static_cast<wint_t>(d.cp), loc) != 0);
    if (!alpha) {
      out.resize(mark);
      return false;
    }
    char32_t cp = d.cp;
    if (opts.case_fold) {
      cp = d.cp < 0x80 ? static_cast<char32_t>(ascii_lower(static_cast<char>(d.cp)))
                       : static_cast<char32_t>(towlower_l(static_cast<wint_t>(d.cp), loc));
    }
    append_utf8(out, cp);
    i += d.len;
  }
  return true;
}

template <typename Fn>
void for_each_raw_token(std::string_view text, Fn&& fn) {
  size_t i = 0, n = text.size();
  while (i < n) {
    // Skip whitespace run.
    while (i < n) {
      Decoded d = decode_utf8(text, i);
      if (d.valid && is_space_cp(d.cp)) {
        i += d.len;
      } else {
        break;
      }
    }
    if (i >= n) break;
    size_t start = i;
    while (i < n) {
      Decoded d = decode_utf8(text, i);
      if (d.valid && is_space_cp(d.cp)) break;
      i += d.len;
    }
    fn(text.substr(start, i - start));
  }
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  for_each_raw_token(text, [&](std::string_view t) { tokens.emplace_back(t); });
  return tokens;
}

std::optional<std::string> normalize_token(std::string_view token, const NormalizeOptions& opts) {
  std::string out;
  if (!normalize_into(token, opts, out)) return std::nullopt;
  return out;
}

std::vector<std::string> normalize_query(std::string_view text, const NormalizeOptions& opts) {
  std::vector<std::string> words;
  std::string scratch;
  for_each_raw_token(text, [&](std::string_view t) {
    scratch.clear();
    if (normalize_into(t, opts, scratch)) words.push_back(scratch);
  });
  return words;
}

void for_each_normalized(std::string_view text, const NormalizeOptions& opts,
                         const std::function<void(std::string_view)>& fn) {
  std::string scratch;
  for_each_raw_token(text, [&](std::string_view t) {
    scratch.clear();
    if (normalize_into(t, opts, scratch)) fn(scratch);
  });
}

bool is_word(std::string_view s, const NormalizeOptions& opts) {
  std::string out;
  if (!normalize_into(s, opts, out)) return false;
  return out == s;
}

}  // namespace oov
