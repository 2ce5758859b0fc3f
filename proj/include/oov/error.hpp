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

#ifndef OOV_ERROR_HPP
#define OOV_ERROR_HPP

#include <stdexcept>
#include <string>

namespace oov {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One corrupt input line: wrong field count, bad date, empty cookie id.
struct MalformedRecord : Error {
  using Error::Error;
};

// Count-table shards from different training windows.
struct WindowMismatch : Error {
  using Error::Error;
};

// Bad vocabulary/report file contents.
struct FormatError : Error {
  using Error::Error;
};

struct IoFailure : Error {
  using Error::Error;
};

// Test window produced zero normalized tokens.
struct EmptyTestSet : Error {
  using Error::Error;
};

// Every cookie in the test set had zero normalized tokens.
struct NoEligibleCookies : Error {
  using Error::Error;
};

// fraction_at_or_below() asked for a threshold that was neither requested
// up front nor derivable from the histogram buckets.
struct UnknownThreshold : Error {
  using Error::Error;
};

// A count threshold below the privacy floor without an explicit override.
struct PrivacyViolation : Error {
  using Error::Error;
};

}  // namespace oov

#endif  // OOV_ERROR_HPP
