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

#ifndef CTAG_TESTS_UNIT_TEST_SUPPORT_HPP_
#define CTAG_TESTS_UNIT_TEST_SUPPORT_HPP_

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>

namespace test_support {

inline std::filesystem::path source_root() {
  return std::filesystem::path(CTAG_SOURCE_DIR);
}

inline std::filesystem::path fixture(const std::string& name) {
  return source_root() / "tests" / "data" / "fixtures" / name;
}

inline std::filesystem::path golden(const std::string& name) {
  return source_root() / "tests" / "data" / "golden" / name;
}

inline std::filesystem::path data_file(const std::string& name) {
  return source_root() / "data" / name;
}

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), "cannot open ", path.string());
  std::string content((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
  return content;
}

// Self-deleting unique directory under the system temp dir.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "scratch") {
    static std::atomic<unsigned> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("ctag-test-" + tag + "-" + std::to_string(::getpid()) + "-" +
             std::to_string(counter.fetch_add(1)));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path file(const std::string& name) const {
    return path_ / name;
  }
  std::filesystem::path write(const std::string& name,
                              const std::string& content) const {
    std::filesystem::path p = path_ / name;
    std::ofstream out(p, std::ios::binary);
    out << content;
    return p;
  }

 private:
  std::filesystem::path path_;
};

}  // namespace test_support

#endif  // CTAG_TESTS_UNIT_TEST_SUPPORT_HPP_
