#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace wwqe {

struct TaggedToken {
  std::string surface;
  std::string normalized;  // case-folded surface
  std::string tag;         // Penn Treebank tag

  friend bool operator==(const TaggedToken&, const TaggedToken&) = default;
};

bool is_penn_tag(std::string_view tag);

// Nouns, adjectives, verbs and cardinal numbers.
bool is_content_tag(std::string_view tag);

class Tagger {
 public:
  virtual ~Tagger() = default;
  virtual std::vector<TaggedToken> tag(const std::vector<std::string>& tokens) const = 0;
};

// Lexicon lookup (case-insensitive), then suffix rules, then defaults:
// capitalized unknowns are NNP, everything else NN. Ships with a closed-class
// lexicon (determiners, prepositions, pronouns, auxiliaries, ...).
class LexiconTagger final : public Tagger {
 public:
  LexiconTagger();

  // Adds "word tag" lines from a plain-text file on top of the built-in
  // entries. Blank lines and lines starting with '#' are ignored. Throws
  // LoadError on an unknown tag or malformed line.
  static LexiconTagger from_file(const std::filesystem::path& path);

  void add(std::string_view word, std::string_view tag);
  std::vector<TaggedToken> tag(const std::vector<std::string>& tokens) const override;

 private:
  std::string tag_one(std::string_view surface, std::string_view normalized) const;

  std::unordered_map<std::string, std::string> lexicon_;
};

struct KeywordUnit {
  std::string text;        // surface words joined by one space
  std::string normalized;  // case-folded
  std::size_t begin = 0;   // token span [begin, end) in the tagged query
  std::size_t end = 0;

  bool is_phrase() const noexcept { return end - begin >= 2; }
  std::size_t length() const noexcept { return end - begin; }

  friend bool operator==(const KeywordUnit&, const KeywordUnit&) = default;
};

struct KeywordSet {
  std::vector<KeywordUnit> individuals;
  std::vector<KeywordUnit> phrases;
  // Both lists merged in document order: by end position, shorter units
  // first ("Swine", "flu", "Swine flu", "vaccine", ...).
  std::vector<KeywordUnit> all_units;

  bool empty() const noexcept { return individuals.empty(); }
};

// Order-preserving split on whitespace and punctuation; surface case kept.
std::vector<std::string> tokenize_query(std::string_view text);

std::vector<TaggedToken> pos_tag(const std::vector<std::string>& tokens, const Tagger& tagger);

// True when every whitespace-separated item has the form word_TAG with a
// Penn tag.
bool is_pretagged(std::string_view text);
// Throws Error if an item lacks a valid _TAG suffix.
std::vector<TaggedToken> parse_pretagged(std::string_view text);

// Content words become individuals. Inside each maximal run of consecutive
// content words every contiguous sub-sequence of length >= 2 is a phrase.
KeywordSet extract_keywords(const std::vector<TaggedToken>& tagged);

// Raw title or pre-tagged string to keywords.
KeywordSet prepare_query(std::string_view raw, const Tagger& tagger);

}  // namespace wwqe
