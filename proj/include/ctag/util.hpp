// Copyright 2026 The corpus-tagger Authors.
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

#ifndef CTAG_UTIL_HPP_
#define CTAG_UTIL_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace ctag::util {

// Formats a double with 12 significant digits (printf %.12g), the one
// float serialization used in every output file so that runs diff
// cleanly.
std::string fmt_g12(double value);

// Writes `content` to `path` atomically: the bytes land in a temporary
// file in the same directory which is then renamed over the target, so
// a failed run never leaves a partial file behind.
void atomic_write_file(const std::filesystem::path& path,
                       std::string_view content);

std::string read_file_to_string(const std::filesystem::path& path);

std::vector<std::string_view> split(std::string_view s, char sep);

// True when the string can sit in one TSV cell: no tab, CR or LF.
bool tsv_safe(std::string_view s);

}  // namespace ctag::util

#endif  // CTAG_UTIL_HPP_
