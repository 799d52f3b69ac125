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

#ifndef SHS_SRC_SVG_HPP_
#define SHS_SRC_SVG_HPP_

#include <string>
#include <vector>

namespace shs::detail {

struct Series {
  std::string name;
  std::vector<double> values;  // one per category
};

struct Chart {
  enum class Kind { kLine, kBar };
  Kind kind = Kind::kLine;
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<std::string> categories;
  std::vector<Series> series;
};

// Deterministic markup; the y axis starts at 0 and spans the largest value.
std::string render_svg(const Chart& chart);

}  // namespace shs::detail

#endif  // SHS_SRC_SVG_HPP_
