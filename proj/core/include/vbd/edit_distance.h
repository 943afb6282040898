// Copyright 2026 The VBD Authors
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

#ifndef VBD_EDIT_DISTANCE_H_
#define VBD_EDIT_DISTANCE_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace vbd {

// Levenshtein distance with unit costs, over bytes.
std::size_t EditDistance(std::string_view a, std::string_view b);

// Like EditDistance, but returns `limit + 1` as soon as the distance is known
// to exceed `limit`.
std::size_t BoundedEditDistance(std::string_view a, std::string_view b,
                                std::size_t limit);

// Candidates within `limit` edits of `word`, closest first, ties broken
// lexicographically. At most `max_results` entries.
std::vector<std::string> NearestNames(std::string_view word,
                                      const std::vector<std::string>& names,
                                      std::size_t limit,
                                      std::size_t max_results);

}  // namespace vbd

#endif  // VBD_EDIT_DISTANCE_H_
