#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace wwqe {

enum class PartOfSpeech : std::uint8_t { noun, verb, adjective, adverb };

char pos_symbol(PartOfSpeech pos);  // 'n', 'v', 'a', 'r'

struct SynsetId {
  PartOfSpeech pos = PartOfSpeech::noun;
  std::uint32_t offset = 0;

  friend constexpr auto operator<=>(SynsetId, SynsetId) = default;
};

std::string to_string(SynsetId id);  // e.g. "n:00001740"

struct Synset {
  SynsetId id;
  // Lemmas as written in the database with '_' replaced by ' ' and adjective
  // position markers removed. Never empty.
  std::vector<std::string> lemmas;
  std::string gloss;
  std::vector<SynsetId> hyponyms;
};

enum class Relation : std::uint8_t { synonym, hyponym };

// Lemma-indexed synset store. Immutable once built.
class LexicalStore {
 public:
  explicit LexicalStore(std::vector<Synset> synsets);

  std::size_t size() const noexcept { return synsets_.size(); }
  const Synset& synset(SynsetId id) const;
  const std::map<SynsetId, Synset>& synsets() const noexcept { return synsets_; }

  // All senses, all parts of speech, in synset id order. Case-insensitive;
  // '_' and ' ' are interchangeable.
  std::vector<const Synset*> lookup(std::string_view unit) const;

  // Lemmas (normalized) of the unit's own synsets, minus the unit.
  std::vector<std::string> synonyms(std::string_view unit) const;

  // Union of the first and second relation levels, normalized, sorted,
  // never containing the unit itself.
  //  synonym: lemmas of lookup(unit), plus lemmas of lookup(l) for each of
  //           those lemmas l.
  //  hyponym: lemmas of the hyponym synsets of lookup(unit), plus lemmas of
  //           their hyponyms.
  std::vector<std::string> two_level_terms(std::string_view unit, Relation relation) const;

 private:
  std::map<SynsetId, Synset> synsets_;
  std::unordered_map<std::string, std::vector<SynsetId>> lemma_index_;
};

// Lemma normalization used by the lemma index: case-folded, '_' as space,
// whitespace collapsed.
std::string normalize_lemma(std::string_view lemma);

// Reads a WordNet database directory (index.<pos> and data.<pos> files for
// noun, verb, adj, adv; parts of speech may be absent as a pair). Throws
// LoadError naming the offending file.
LexicalStore load_wordnet(const std::filesystem::path& dir);

// Compact store directory written by ingest-wordnet.
void save_lexical_store(const LexicalStore& store, const std::filesystem::path& dir);
LexicalStore load_lexical_store(const std::filesystem::path& dir);

// Accepts either a saved store (manifest.json present) or a raw database.
LexicalStore open_lexical_store(const std::filesystem::path& dir);

}  // namespace wwqe
