#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <string_view>

namespace wwqe::cli {

// An output directory held for one subcommand. Construction creates the
// directory if needed and takes a lock file inside it; a second holder fails
// with Error. Unless commit() is called, the destructor deletes every entry
// that did not exist when the directory was acquired.
class OutputDir {
 public:
  explicit OutputDir(std::filesystem::path dir);
  ~OutputDir();

  OutputDir(const OutputDir&) = delete;
  OutputDir& operator=(const OutputDir&) = delete;

  const std::filesystem::path& path() const noexcept { return dir_; }
  std::filesystem::path file(std::string_view name) const { return dir_ / name; }
  void write(std::string_view name, std::string_view content) const;
  void commit() noexcept { committed_ = true; }

  static constexpr std::string_view kLockName = ".wwqe.lock";

 private:
  std::filesystem::path dir_;
  std::set<std::filesystem::path> preexisting_;
  bool created_ = false;
  bool committed_ = false;
};

}  // namespace wwqe::cli
