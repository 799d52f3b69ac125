// Copyright 2026 The SHS Bench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SHS_FORMAT_HPP_
#define SHS_FORMAT_HPP_

#include <charconv>
#include <cstdio>
#include <string>

namespace shs {

// Nine significant digits, the fixed precision of every CSV the toolkit writes.
inline std::string format_g9(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

// Value that survives a format_g9 round trip unchanged.
inline double round_g9(double v) {
  const std::string s = format_g9(v);
  double out = 0.0;
  std::from_chars(s.data(), s.data() + s.size(), out);
  return out;
}

// Fixed-point with the given number of decimals (metric tables).
inline std::string format_fixed(double v, int decimals = 2) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

}  // namespace shs

#endif  // SHS_FORMAT_HPP_
