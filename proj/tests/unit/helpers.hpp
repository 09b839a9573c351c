#pragma once

#include "hsap/linalg.hpp"
#include "hsap/rng.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <sys/wait.h>

namespace testutil {

/// Unique scratch directory, removed on destruction.
class TempDir {
 public:
  TempDir() {
    const auto base = std::filesystem::temp_directory_path();
    for (int i = 0; i < 1000; ++i) {
      auto candidate = base / ("hsap_test_" + std::to_string(::getpid()) + "_" +
                               std::to_string(counter_++));
      std::error_code ec;
      if (std::filesystem::create_directory(candidate, ec)) {
        path_ = candidate;
        return;
      }
    }
    throw std::runtime_error("could not create temp directory");
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string file(const std::string& name) const { return (path_ / name).string(); }
  const std::filesystem::path& path() const { return path_; }

 private:
  static inline int counter_ = 0;
  std::filesystem::path path_;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

/// Path of the hsap binary, written by the build system at generate time.
inline std::string hsap_bin() {
#ifdef HSAP_BIN_PATH_FILE
  static const std::string path = [] {
    std::ifstream in(HSAP_BIN_PATH_FILE);
    std::string p;
    std::getline(in, p);
    return p;
  }();
  if (!path.empty()) return path;
#endif
  const char* env = std::getenv("HSAP_BIN");
  if (env != nullptr) return env;
  throw std::runtime_error("hsap binary path unavailable");
}

/// Runs a shell command, returning its exit status (-1 if it died on a
/// signal).
inline int run_command(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  if (status == -1) return -1;
  if (WIFEXITED(status)) return WEXITSTATUS(status);
  return -1;
}

/// Random orthonormal n x k frame for test fixtures.
inline hsap::Matrix random_frame(hsap::Index n, hsap::Index k, std::uint64_t seed) {
  hsap::Rng rng(seed);
  hsap::Matrix m(n, k);
  for (hsap::Index i = 0; i < n; ++i)
    for (hsap::Index j = 0; j < k; ++j) m(i, j) = rng.normal();
  return hsap::mgs_orthonormalize(m);
}

/// Random unit vector.
inline hsap::Vector random_unit(hsap::Index n, hsap::Rng& rng) {
  hsap::Vector v(n);
  for (hsap::Index i = 0; i < n; ++i) v(i) = rng.normal();
  return v.normalized();
}

}  // namespace testutil
