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

#include "oov/syngen.hpp"

#include <zlib.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <unordered_set>

#include "oov/error.hpp"
#include "oov/querylog.hpp"

namespace oov {
namespace {

// Draw streams, kept apart so adding a new consumer never shifts old ones.
constexpr std::uint64_t kStreamQueries = 1;
constexpr std::uint64_t kStreamWords = 2;
constexpr std::uint64_t kStreamRank = 3;
constexpr std::uint64_t kStreamDrift = 4;
constexpr std::uint64_t kStreamNoise = 5;
constexpr std::uint64_t kStreamNoisePos = 6;

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::string fmt_double(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, p);
}

// 1-based geometric with the given mean; mean 1 collapses to the constant 1.
std::uint64_t sample_geometric(double mean, double u) {
  if (mean <= 1.0) return 1;
  double p = 1.0 / mean;
  double k = 1.0 + std::floor(std::log1p(-u) / std::log1p(-p));
  if (k < 1.0) return 1;
  if (k > 1e18) return static_cast<std::uint64_t>(1e18);
  return static_cast<std::uint64_t>(k);
}

// Log sink writing plain or gzip output depending on the path suffix.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (path.size() > 3 && path.compare(path.size() - 3, 3, ".gz") == 0) {
      gz_ = gzopen(path.c_str(), "wb");
      if (!gz_) throw IoFailure("cannot open for writing: " + path);
    } else {
      f_ = std::fopen(path.c_str(), "wb");
      if (!f_) throw IoFailure("cannot open for writing: " + path);
    }
    path_ = path;
  }
  ~Sink() { close_quiet(); }

  void write(std::string_view s) {
    if (gz_) {
      if (gzwrite(gz_, s.data(), static_cast<unsigned>(s.size())) !=
          static_cast<int>(s.size()))
        throw IoFailure("short write: " + path_);
    } else {
      if (std::fwrite(s.data(), 1, s.size(), f_) != s.size())
        throw IoFailure("short write: " + path_);
    }
  }

  void close() {
    if (gz_) {
      int rc = gzclose(gz_);
      gz_ = nullptr;
      if (rc != Z_OK) throw IoFailure("close failed: " + path_);
    } else if (f_) {
      int rc = std::fclose(f_);
      f_ = nullptr;
      if (rc != 0) throw IoFailure("close failed: " + path_);
    }
  }

 private:
  void close_quiet() {
    if (gz_) gzclose(gz_);
    if (f_) std::fclose(f_);
    gz_ = nullptr;
    f_ = nullptr;
  }

  std::FILE* f_ = nullptr;
  gzFile gz_ = nullptr;
  std::string path_;
};

}  // namespace

std::uint64_t CounterRng::u64(std::uint64_t stream, std::uint64_t a, std::uint64_t b,
                              std::uint64_t c) const {
  std::uint64_t h = mix64(seed);
  h = mix64(h ^ stream);
  h = mix64(h ^ a);
  h = mix64(h ^ b);
  h = mix64(h ^ c);
  return h;
}

double CounterRng::unit(std::uint64_t stream, std::uint64_t a, std::uint64_t b,
                        std::uint64_t c) const {
  return static_cast<double>(u64(stream, a, b, c) >> 11) * 0x1.0p-53;
}

ZipfMandelbrot::ZipfMandelbrot(std::uint64_t n, double exponent, double shift) {
  if (n == 0) throw Error("rank universe must be positive");
  if (!(exponent > 0.0) || !(shift >= 0.0))
    throw Error("rank law needs exponent > 0 and shift >= 0");
  cdf_.resize(n);
  double acc = 0.0;
  for (std::uint64_t r = 1; r <= n; ++r) {
    acc += std::pow(static_cast<double>(r) + shift, -exponent);
    cdf_[r - 1] = acc;
  }
  for (auto& v : cdf_) v /= acc;
  cdf_.back() = 1.0;
}

std::uint64_t ZipfMandelbrot::sample(double u) const {
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.end()) --it;
  return static_cast<std::uint64_t>(it - cdf_.begin()) + 1;
}

double ZipfMandelbrot::prob(std::uint64_t rank) const {
  if (rank == 0 || rank > cdf_.size()) return 0.0;
  return rank == 1 ? cdf_[0] : cdf_[rank - 1] - cdf_[rank - 2];
}

std::string word_shape(std::uint64_t rank, std::uint64_t epoch) {
  // Both blocks are canonical base-13 numerals over disjoint alphabets, so
  // the concatenation is injective in (rank, epoch).
  char buf[2 * 18 + 1];
  char* p = buf + sizeof(buf);
  std::uint64_t e = epoch;
  do {
    *--p = static_cast<char>('n' + e % 13);
    e /= 13;
  } while (e != 0);
  std::uint64_t r = rank;
  do {
    *--p = static_cast<char>('a' + r % 13);
    r /= 13;
  } while (r != 0);
  return std::string(p, buf + sizeof(buf));
}

std::optional<DistSpec> DistSpec::parse(std::string_view s) {
  auto colon = s.find(':');
  if (colon == std::string_view::npos) return std::nullopt;
  std::string_view head = s.substr(0, colon);
  std::string_view tail = s.substr(colon + 1);
  if (tail.empty()) return std::nullopt;
  DistSpec d;
  if (head == "fixed") {
    d.kind = Kind::Fixed;
    auto [p, ec] = std::from_chars(tail.data(), tail.data() + tail.size(), d.fixed);
    if (ec != std::errc() || p != tail.data() + tail.size()) return std::nullopt;
    if (d.fixed == 0) return std::nullopt;
    return d;
  }
  if (head == "geom") {
    d.kind = Kind::Geometric;
    auto [p, ec] = std::from_chars(tail.data(), tail.data() + tail.size(), d.mean);
    if (ec != std::errc() || p != tail.data() + tail.size()) return std::nullopt;
    if (!std::isfinite(d.mean) || d.mean < 1.0) return std::nullopt;
    return d;
  }
  return std::nullopt;
}

std::string DistSpec::to_string() const {
  if (kind == Kind::Fixed) return "fixed:" + std::to_string(fixed);
  return "geom:" + fmt_double(mean);
}

void SynSpec::validate() const {
  if (days.empty()) throw Error("generator needs at least one day");
  if (cookies_per_day == 0) throw Error("cookies_per_day must be positive");
  if (queries_per_cookie.kind == DistSpec::Kind::Fixed && queries_per_cookie.fixed == 0)
    throw Error("queries_per_cookie must be positive");
  if (words_per_query.kind == DistSpec::Kind::Fixed && words_per_query.fixed == 0)
    throw Error("words_per_query must be positive");
  if (queries_per_cookie.kind == DistSpec::Kind::Geometric && queries_per_cookie.mean < 1.0)
    throw Error("geometric mean must be >= 1");
  if (words_per_query.kind == DistSpec::Kind::Geometric && words_per_query.mean < 1.0)
    throw Error("geometric mean must be >= 1");
  if (!(zipf_exponent > 0.0)) throw Error("zipf_exponent must be > 0");
  if (!(zipf_shift >= 0.0)) throw Error("zipf_shift must be >= 0");
  if (type_universe == 0) throw Error("type_universe must be positive");
  if (!(drift_rate >= 0.0 && drift_rate <= 1.0)) throw Error("drift_rate must be in [0, 1]");
  if (!(noise_rate >= 0.0 && noise_rate <= 1.0)) throw Error("noise_rate must be in [0, 1]");
}

namespace {

std::uint64_t sample_dist(const DistSpec& d, double u) {
  if (d.kind == DistSpec::Kind::Fixed) return d.fixed;
  return sample_geometric(d.mean, u);
}

}  // namespace

GenSummary gen_stream(const SynSpec& spec, const std::string& log_path,
                      const std::string& manifest_path) {
  spec.validate();
  ZipfMandelbrot zipf(spec.type_universe, spec.zipf_exponent, spec.zipf_shift);
  CounterRng rng{spec.seed};

  Sink log(log_path);
  GenSummary sum;
  std::vector<std::uint32_t> epochs(spec.type_universe, 0);
  std::unordered_set<std::string> day_shapes;
  std::string line;
  std::string text;

  for (std::size_t di = 0; di < spec.days.size(); ++di) {
    Day day = spec.days[di];
    const std::string day_str = format_day(day);
    if (di > 0 && spec.drift_rate > 0.0) {
      for (std::uint64_t r = 1; r <= spec.type_universe; ++r)
        if (rng.unit(kStreamDrift, di, r, 0) < spec.drift_rate) ++epochs[r - 1];
    }
    day_shapes.clear();
    std::uint64_t day_records = 0;
    std::uint64_t day_tokens = 0;

    for (std::uint64_t ck = 0; ck < spec.cookies_per_day; ++ck) {
      std::uint64_t queries =
          sample_dist(spec.queries_per_cookie, rng.unit(kStreamQueries, di, ck, 0));
      std::string cookie =
          "c" + std::to_string(day.time_since_epoch().count()) + "d" + std::to_string(ck);
      for (std::uint64_t q = 0; q < queries; ++q) {
        std::uint64_t words =
            sample_dist(spec.words_per_query, rng.unit(kStreamWords, di, ck, q));
        text.clear();
        for (std::uint64_t w = 0; w < words; ++w) {
          std::uint64_t slot = (q << 24) ^ w;
          std::uint64_t rank = zipf.sample(rng.unit(kStreamRank, di, ck, slot));
          std::string shape = word_shape(rank, epochs[rank - 1]);
          bool noisy = spec.noise_rate > 0.0 &&
                       rng.unit(kStreamNoise, di, ck, slot) < spec.noise_rate;
          if (noisy) {
            std::uint64_t h = rng.u64(kStreamNoisePos, di, ck, slot);
            std::size_t pos = h % (shape.size() + 1);
            shape.insert(shape.begin() + static_cast<std::ptrdiff_t>(pos),
                         static_cast<char>('0' + (h >> 32) % 10));
          } else {
            day_shapes.insert(shape);
          }
          if (w > 0) text.push_back(' ');
          text += shape;
          ++day_tokens;
        }
        line.clear();
        line += day_str;
        line.push_back('\t');
        line += cookie;
        line.push_back('\t');
        line += text;
        line.push_back('\n');
        log.write(line);
        ++day_records;
      }
    }
    sum.records += day_records;
    sum.tokens += day_tokens;
    sum.day_records[day] = day_records;
    sum.day_tokens[day] = day_tokens;
    sum.day_types[day] = day_shapes.size();
  }
  log.close();

  Sink man(manifest_path);
  std::string m;
  m += "seed=" + std::to_string(spec.seed) + "\n";
  m += "cookies_per_day=" + std::to_string(spec.cookies_per_day) + "\n";
  m += "queries_per_cookie=" + spec.queries_per_cookie.to_string() + "\n";
  m += "words_per_query=" + spec.words_per_query.to_string() + "\n";
  m += "zipf_exponent=" + fmt_double(spec.zipf_exponent) + "\n";
  m += "zipf_shift=" + fmt_double(spec.zipf_shift) + "\n";
  m += "type_universe=" + std::to_string(spec.type_universe) + "\n";
  m += "drift_rate=" + fmt_double(spec.drift_rate) + "\n";
  m += "noise_rate=" + fmt_double(spec.noise_rate) + "\n";
  m += "records=" + std::to_string(sum.records) + "\n";
  m += "tokens=" + std::to_string(sum.tokens) + "\n";
  for (const auto& [day, n] : sum.day_records) {
    std::string key = "day." + format_day(day);
    m += key + ".records=" + std::to_string(n) + "\n";
    m += key + ".tokens=" + std::to_string(sum.day_tokens.at(day)) + "\n";
    m += key + ".types=" + std::to_string(sum.day_types.at(day)) + "\n";
  }
  man.write(m);
  man.close();
  return sum;
}

}  // namespace oov
