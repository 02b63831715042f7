#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace wwqe::store {

constexpr int kFormatVersion = 1;

std::string read_file(const std::filesystem::path& path);

// Writes via a temporary sibling and rename, so readers never observe a
// half-written file.
void write_file(const std::filesystem::path& path, std::string_view content);

std::uint64_t fnv1a64(std::string_view data);
std::string hex64(std::uint64_t value);

// Tab-separated field escaping: backslash, tab, newline and carriage return.
std::string escape_field(std::string_view raw);
std::string unescape_field(std::string_view escaped);

std::vector<std::string_view> split(std::string_view line, char sep);
std::vector<std::string_view> lines(std::string_view content);

struct Table {
  std::string name;
  std::string content;
};

// Writes every table plus manifest.json describing the store kind, format
// version, caller-supplied integer properties and a size and FNV-1a checksum
// per table. Output bytes depend only on the arguments.
void write_store(const std::filesystem::path& dir, std::string_view kind,
                 const std::map<std::string, std::int64_t>& properties,
                 const std::vector<Table>& tables);

struct LoadedStore {
  std::map<std::string, std::int64_t> properties;
  std::map<std::string, std::string> tables;
};

// Reads and validates a store written by write_store. Throws LoadError on a
// missing manifest, kind or version mismatch, or checksum failure.
LoadedStore read_store(const std::filesystem::path& dir, std::string_view kind);

}  // namespace wwqe::store
