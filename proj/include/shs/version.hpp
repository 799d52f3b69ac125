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

#ifndef SHS_VERSION_HPP_
#define SHS_VERSION_HPP_

namespace shs {

// Recorded in every manifest; bump with any change to generated outputs.
inline constexpr const char* kVersion = "1.0.0";

}  // namespace shs

#endif  // SHS_VERSION_HPP_
