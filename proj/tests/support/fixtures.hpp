#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <string_view>

#include <unistd.h>

namespace wwqe::testing {

inline std::filesystem::path data_path(std::string_view relative) {
  return std::filesystem::path(WWQE_TEST_DATA_DIR) / relative;
}

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void spit(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

// A fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("wwqe-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(std::string_view name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

// Minimal MediaWiki export around (title, wikitext) pages.
inline std::string make_dump(std::initializer_list<std::pair<std::string, std::string>> pages) {
  std::string xml = "<mediawiki>\n";
  int id = 0;
  for (const auto& [title, text] : pages) {
    xml += "<page><title>" + title + "</title><ns>0</ns><id>" + std::to_string(++id) +
           "</id><revision><text>" + text + "</text></revision></page>\n";
  }
  return xml + "</mediawiki>\n";
}

}  // namespace wwqe::testing
