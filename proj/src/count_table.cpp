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

#include "oov/count_table.hpp"

#include "oov/error.hpp"

namespace oov {

void CountTable::absorb(const CountTable& other) {
  for (const auto& [word, n] : other.counts) {
    auto it = counts.find(word);
    if (it == counts.end()) {
      counts.emplace(word, n);
    } else {
      it->second += n;
    }
  }
  total_tokens += other.total_tokens;
  total_queries += other.total_queries;
}

CountTable merge_counts(const CountTable& a, const CountTable& b) {
  if (a.window != b.window) {
    throw WindowMismatch("cannot merge count shards from windows " + format_window(a.window) +
                         " and " + format_window(b.window));
  }
  CountTable out = a;
  out.absorb(b);
  return out;
}

}  // namespace oov
