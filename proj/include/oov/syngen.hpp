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

#ifndef OOV_SYNGEN_HPP
#define OOV_SYNGEN_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "oov/date.hpp"

namespace oov {

// Splittable counter-based random source: every draw is a pure function of
// (seed, stream, a, b, c), so per-day generation can run in any order and
// still produce identical values.
struct CounterRng {
  std::uint64_t seed = 0;

  std::uint64_t u64(std::uint64_t stream, std::uint64_t a, std::uint64_t b,
                    std::uint64_t c) const;
  // Uniform in [0, 1).
  double unit(std::uint64_t stream, std::uint64_t a, std::uint64_t b, std::uint64_t c) const;
};

// Rank-frequency law p(r) proportional to 1/(r+q)^s over ranks 1..n,
// sampled by inverse CDF lookup.
class ZipfMandelbrot {
 public:
  ZipfMandelbrot(std::uint64_t n, double exponent, double shift);

  // u in [0, 1) -> rank in [1, n].
  std::uint64_t sample(double u) const;
  double prob(std::uint64_t rank) const;
  std::uint64_t universe() const { return static_cast<std::uint64_t>(cdf_.size()); }

 private:
  std::vector<double> cdf_;
};

// Deterministic alphabetic word shape for (rank, epoch): the rank block
// uses letters a..m, the epoch block n..z, so distinct pairs can never
// collide and every shape survives normalization.
std::string word_shape(std::uint64_t rank, std::uint64_t epoch);

struct DistSpec {
  enum class Kind { Fixed, Geometric } kind = Kind::Fixed;
  std::uint64_t fixed = 1;  // Fixed: the value
  double mean = 1.0;        // Geometric: mean of the 1-based distribution

  // "fixed:5" or "geom:3.5"
  static std::optional<DistSpec> parse(std::string_view s);
  std::string to_string() const;
};

struct SynSpec {
  std::uint64_t seed = 1;
  std::vector<Day> days;
  std::uint64_t cookies_per_day = 1;
  DistSpec queries_per_cookie{};
  DistSpec words_per_query{};
  double zipf_exponent = 1.05;
  double zipf_shift = 2.7;
  std::uint64_t type_universe = 1;
  // Fraction of the type universe replaced with fresh shapes per day.
  double drift_rate = 0.0;
  // Probability a token is emitted with a non-alphabetic character
  // injected (and therefore rejected by normalization).
  double noise_rate = 0.0;

  void validate() const;  // throws Error
};

struct GenSummary {
  std::uint64_t records = 0;
  std::uint64_t tokens = 0;
  std::map<Day, std::uint64_t> day_records;
  std::map<Day, std::uint64_t> day_tokens;
  // Ground truth: distinct clean-emitted word shapes per day.
  std::map<Day, std::uint64_t> day_types;
};

// Emits a query-log file (one tab-separated record per line, days in the
// given order, cookies and queries in index order) plus a key=value
// manifest recording the spec and per-day ground truth. Byte-identical
// output for identical specs.
GenSummary gen_stream(const SynSpec& spec, const std::string& log_path,
                      const std::string& manifest_path);

}  // namespace oov

#endif  // OOV_SYNGEN_HPP
