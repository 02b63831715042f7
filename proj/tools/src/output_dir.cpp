#include "output_dir.hpp"

#include <cstdio>

#include "wwqe/error.hpp"
#include "wwqe/store_io.hpp"

namespace wwqe::cli {

namespace fs = std::filesystem;

OutputDir::OutputDir(fs::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  if (!fs::exists(dir_)) {
    fs::create_directories(dir_, ec);
    if (ec) throw Error("cannot create " + dir_.string() + ": " + ec.message());
    created_ = true;
  } else if (!fs::is_directory(dir_)) {
    throw Error(dir_.string() + " exists and is not a directory");
  }
  const fs::path lock = dir_ / kLockName;
  std::FILE* f = std::fopen(lock.c_str(), "wx");
  if (f == nullptr) {
    if (fs::exists(lock)) {
      throw Error(dir_.string() + " is in use by another wwqe process (remove " + lock.string() +
                  " if it is stale)");
    }
    throw Error("cannot create lock file " + lock.string());
  }
  std::fclose(f);
  for (const auto& entry : fs::directory_iterator(dir_)) {
    if (entry.path().filename() != kLockName) preexisting_.insert(entry.path());
  }
}

OutputDir::~OutputDir() {
  std::error_code ec;
  if (!committed_) {
    if (created_) {
      fs::remove_all(dir_, ec);
      return;
    }
    std::set<fs::path> fresh;
    for (const auto& entry : fs::directory_iterator(dir_, ec)) {
      if (!preexisting_.contains(entry.path())) fresh.insert(entry.path());
    }
    for (const auto& p : fresh) fs::remove_all(p, ec);
    return;
  }
  fs::remove(dir_ / kLockName, ec);
}

void OutputDir::write(std::string_view name, std::string_view content) const {
  const fs::path p = dir_ / name;
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  store::write_file(p, content);
}

}  // namespace wwqe::cli
