#include "wwqe/store_io.hpp"

#include <fstream>
#include <iterator>
#include <sstream>

#include <nlohmann/json.hpp>

#include "wwqe/error.hpp"

namespace wwqe::store {

namespace fs = std::filesystem;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError(path.string(), "cannot open");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw LoadError(path.string(), "read failed");
  return std::move(buf).str();
}

void write_file(const fs::path& path, std::string_view content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error("write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = kDigits[value & 0xF];
    value >>= 4;
  }
  return out;
}

std::string escape_field(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (char c : raw) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string unescape_field(std::string_view escaped) {
  std::string out;
  out.reserve(escaped.size());
  for (std::size_t i = 0; i < escaped.size(); ++i) {
    if (escaped[i] != '\\' || i + 1 == escaped.size()) {
      out.push_back(escaped[i]);
      continue;
    }
    switch (escaped[++i]) {
      case 't': out.push_back('\t'); break;
      case 'n': out.push_back('\n'); break;
      case 'r': out.push_back('\r'); break;
      default: out.push_back(escaped[i]);
    }
  }
  return out;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::vector<std::string_view> lines(std::string_view content) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start < content.size()) {
    auto end = content.find('\n', start);
    if (end == std::string_view::npos) end = content.size();
    auto line = content.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    out.push_back(line);
    start = end + 1;
  }
  return out;
}

void write_store(const fs::path& dir, std::string_view kind,
                 const std::map<std::string, std::int64_t>& properties,
                 const std::vector<Table>& tables) {
  fs::create_directories(dir);
  nlohmann::ordered_json manifest;
  manifest["format"] = std::string(kind);
  manifest["version"] = kFormatVersion;
  nlohmann::ordered_json props = nlohmann::ordered_json::object();
  for (const auto& [key, value] : properties) props[key] = value;
  manifest["properties"] = props;
  nlohmann::ordered_json files = nlohmann::ordered_json::array();
  for (const auto& table : tables) {
    write_file(dir / table.name, table.content);
    files.push_back({{"name", table.name},
                     {"bytes", table.content.size()},
                     {"fnv1a64", hex64(fnv1a64(table.content))}});
  }
  manifest["files"] = files;
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

LoadedStore read_store(const fs::path& dir, std::string_view kind) {
  const fs::path manifest_path = dir / "manifest.json";
  if (!fs::exists(manifest_path)) throw LoadError(manifest_path.string(), "missing manifest");
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(read_file(manifest_path));
  } catch (const nlohmann::json::exception& e) {
    throw LoadError(manifest_path.string(), std::string("invalid manifest: ") + e.what());
  }
  if (manifest.value("format", "") != kind) {
    throw LoadError(manifest_path.string(), "not a " + std::string(kind) + " store");
  }
  if (manifest.value("version", -1) != kFormatVersion) {
    throw LoadError(manifest_path.string(), "unsupported format version");
  }
  LoadedStore loaded;
  for (const auto& [key, value] : manifest.at("properties").items()) {
    loaded.properties[key] = value.get<std::int64_t>();
  }
  for (const auto& entry : manifest.at("files")) {
    const auto name = entry.at("name").get<std::string>();
    const fs::path path = dir / name;
    std::string content = read_file(path);
    if (content.size() != entry.at("bytes").get<std::size_t>() ||
        hex64(fnv1a64(content)) != entry.at("fnv1a64").get<std::string>()) {
      throw LoadError(path.string(), "checksum mismatch");
    }
    loaded.tables.emplace(name, std::move(content));
  }
  return loaded;
}

}  // namespace wwqe::store
