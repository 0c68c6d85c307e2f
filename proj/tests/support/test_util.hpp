#pragma once

#include <doctest.h>

#include <filesystem>
#include <random>
#include <string>

#include "humanoid/error.hpp"

namespace test_util {

/// Asserts that `fn` throws humanoid::Error with the given code.
template <typename F>
void check_errc(F&& fn, humanoid::Errc expected) {
  try {
    fn();
    FAIL("expected humanoid::Error(" << humanoid::to_string(expected) << ")");
  } catch (const humanoid::Error& e) {
    CHECK_MESSAGE(e.code() == expected, "got " << e.what());
  }
}

/// A fresh, empty directory removed when the object goes out of scope.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("humanoid-test-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::filesystem::path data_file(const std::string& name) {
  return std::filesystem::path(HUMANOID_DATA_DIR) / name;
}

}  // namespace test_util
