#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wwqe {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised while reading a Wikipedia dump. offset is the byte position in the
// input stream where the problem was detected.
class IngestError : public Error {
 public:
  IngestError(const std::string& what, std::size_t offset)
      : Error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}
  explicit IngestError(const std::string& what) : Error(what), offset_(0) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

// Raised when an on-disk resource (WordNet database, store directory, index)
// is missing or corrupt. file names the offending path.
class LoadError : public Error {
 public:
  LoadError(const std::string& file, const std::string& what)
      : Error(file + ": " + what), file_(file) {}

  const std::string& file() const noexcept { return file_; }

 private:
  std::string file_;
};

// Raised by the line-oriented text parsers (topics, qrels, runs, corpora).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace wwqe
