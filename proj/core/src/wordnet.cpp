#include "wwqe/wordnet.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <optional>
#include <set>
#include <sstream>

#include "wwqe/error.hpp"
#include "wwqe/store_io.hpp"
#include "wwqe/text.hpp"

namespace wwqe {

namespace fs = std::filesystem;

char pos_symbol(PartOfSpeech pos) {
  switch (pos) {
    case PartOfSpeech::noun: return 'n';
    case PartOfSpeech::verb: return 'v';
    case PartOfSpeech::adjective: return 'a';
    case PartOfSpeech::adverb: return 'r';
  }
  return '?';
}

namespace {

std::optional<PartOfSpeech> pos_from_symbol(char c) {
  switch (c) {
    case 'n': return PartOfSpeech::noun;
    case 'v': return PartOfSpeech::verb;
    case 'a':
    case 's': return PartOfSpeech::adjective;
    case 'r': return PartOfSpeech::adverb;
    default: return std::nullopt;
  }
}

}  // namespace

std::string to_string(SynsetId id) {
  std::string digits = std::to_string(id.offset);
  if (digits.size() < 8) digits.insert(0, 8 - digits.size(), '0');
  return std::string(1, pos_symbol(id.pos)) + ":" + digits;
}

std::string normalize_lemma(std::string_view lemma) { return text::normalize_title(lemma); }

LexicalStore::LexicalStore(std::vector<Synset> synsets) {
  for (auto& s : synsets) {
    if (s.lemmas.empty()) throw Error("synset " + to_string(s.id) + " has no lemmas");
    const SynsetId id = s.id;
    if (!synsets_.emplace(id, std::move(s)).second) {
      throw Error("duplicate synset " + to_string(id));
    }
  }
  for (const auto& [id, s] : synsets_) {
    for (const auto& h : s.hyponyms) {
      if (h.pos != id.pos || !synsets_.contains(h)) {
        throw Error("synset " + to_string(id) + " has dangling hyponym " + to_string(h));
      }
    }
    for (const auto& lemma : s.lemmas) {
      auto& ids = lemma_index_[normalize_lemma(lemma)];
      if (ids.empty() || ids.back() != id) ids.push_back(id);
    }
  }
}

const Synset& LexicalStore::synset(SynsetId id) const {
  auto it = synsets_.find(id);
  if (it == synsets_.end()) throw Error("unknown synset " + to_string(id));
  return it->second;
}

std::vector<const Synset*> LexicalStore::lookup(std::string_view unit) const {
  std::vector<const Synset*> out;
  auto it = lemma_index_.find(normalize_lemma(unit));
  if (it == lemma_index_.end()) return out;
  for (const auto& id : it->second) out.push_back(&synsets_.at(id));
  return out;
}

std::vector<std::string> LexicalStore::synonyms(std::string_view unit) const {
  const std::string self = normalize_lemma(unit);
  std::set<std::string> terms;
  for (const Synset* s : lookup(unit)) {
    for (const auto& lemma : s->lemmas) terms.insert(normalize_lemma(lemma));
  }
  terms.erase(self);
  return {terms.begin(), terms.end()};
}

std::vector<std::string> LexicalStore::two_level_terms(std::string_view unit,
                                                       Relation relation) const {
  const std::string self = normalize_lemma(unit);
  std::set<std::string> terms;
  const auto add_lemmas = [&](const Synset& s) {
    for (const auto& lemma : s.lemmas) terms.insert(normalize_lemma(lemma));
  };
  const auto roots = lookup(unit);
  if (relation == Relation::synonym) {
    std::set<std::string> first;
    for (const Synset* s : roots) {
      for (const auto& lemma : s->lemmas) first.insert(normalize_lemma(lemma));
    }
    first.erase(self);
    terms = first;
    for (const auto& lemma : first) {
      for (const Synset* s : lookup(lemma)) add_lemmas(*s);
    }
  } else {
    std::set<SynsetId> first;
    for (const Synset* s : roots) first.insert(s->hyponyms.begin(), s->hyponyms.end());
    std::set<SynsetId> second;
    for (const auto& id : first) {
      const auto& h = synsets_.at(id).hyponyms;
      second.insert(h.begin(), h.end());
    }
    for (const auto& id : first) add_lemmas(synsets_.at(id));
    for (const auto& id : second) add_lemmas(synsets_.at(id));
  }
  terms.erase(self);
  return {terms.begin(), terms.end()};
}

// ---------------------------------------------------------------------------
// Database files

namespace {

struct PosFiles {
  PartOfSpeech pos;
  std::string_view suffix;
};

constexpr std::array<PosFiles, 4> kPosFiles = {{{PartOfSpeech::noun, "noun"},
                                                {PartOfSpeech::verb, "verb"},
                                                {PartOfSpeech::adjective, "adj"},
                                                {PartOfSpeech::adverb, "adv"}}};

class FieldReader {
 public:
  FieldReader(std::string_view line, const fs::path& file, std::size_t line_no)
      : rest_(line), file_(file), line_no_(line_no) {}

  std::string_view next() {
    while (!rest_.empty() && rest_.front() == ' ') rest_.remove_prefix(1);
    if (rest_.empty()) fail("truncated record");
    const auto space = rest_.find(' ');
    const std::string_view field = rest_.substr(0, space);
    rest_.remove_prefix(space == std::string_view::npos ? rest_.size() : space);
    return field;
  }

  std::uint32_t number(int base = 10) {
    const auto field = next();
    std::uint32_t value = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value, base);
    if (ec != std::errc() || ptr != field.data() + field.size()) {
      fail("expected number, got '" + std::string(field) + "'");
    }
    return value;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw LoadError(file_.string(), "line " + std::to_string(line_no_) + ": " + what);
  }

 private:
  std::string_view rest_;
  const fs::path& file_;
  std::size_t line_no_;
};

std::string strip_marker(std::string_view word) {
  // Adjective syntactic markers: "(a)", "(p)", "(ip)".
  const auto paren = word.find('(');
  if (paren != std::string_view::npos && word.back() == ')') word = word.substr(0, paren);
  std::string out(word);
  std::replace(out.begin(), out.end(), '_', ' ');
  return out;
}

void parse_data_file(const fs::path& file, PartOfSpeech pos, std::vector<Synset>& out,
                     std::set<SynsetId>& seen) {
  const std::string content = store::read_file(file);
  std::size_t line_start = 0;
  std::size_t line_no = 0;
  while (line_start < content.size()) {
    auto line_end = content.find('\n', line_start);
    if (line_end == std::string::npos) line_end = content.size();
    std::string_view line(content.data() + line_start, line_end - line_start);
    ++line_no;
    const std::size_t offset = line_start;
    line_start = line_end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == ' ') continue;  // license header

    const auto bar = line.find(" | ");
    std::string gloss;
    if (bar != std::string_view::npos) {
      gloss = std::string(line.substr(bar + 3));
      while (!gloss.empty() && gloss.back() == ' ') gloss.pop_back();
      line = line.substr(0, bar);
    }
    FieldReader fields(line, file, line_no);
    Synset s;
    s.id.offset = fields.number();
    s.id.pos = pos;
    if (s.id.offset != offset) {
      fields.fail("synset offset " + std::to_string(s.id.offset) +
                  " does not match byte position " + std::to_string(offset));
    }
    fields.number();  // lex_filenum
    const auto ss_type = fields.next();
    if (ss_type.size() != 1 || pos_from_symbol(ss_type[0]) != pos) {
      fields.fail("synset type '" + std::string(ss_type) + "' does not belong in this file");
    }
    const std::uint32_t w_cnt = fields.number(16);
    if (w_cnt == 0) fields.fail("synset without words");
    for (std::uint32_t k = 0; k < w_cnt; ++k) {
      s.lemmas.push_back(strip_marker(fields.next()));
      fields.number(16);  // lex_id
    }
    const std::uint32_t p_cnt = fields.number();
    for (std::uint32_t k = 0; k < p_cnt; ++k) {
      const auto symbol = fields.next();
      const std::uint32_t target = fields.number();
      const auto target_pos = fields.next();
      fields.next();  // source/target word numbers
      if (target_pos.size() != 1 || !pos_from_symbol(target_pos[0])) {
        fields.fail("bad pointer part of speech '" + std::string(target_pos) + "'");
      }
      if (symbol == "~") {
        const auto tpos = *pos_from_symbol(target_pos[0]);
        if (tpos != pos) fields.fail("hyponym pointer crosses part of speech");
        s.hyponyms.push_back(SynsetId{tpos, target});
      }
    }
    s.gloss = std::move(gloss);
    if (!seen.insert(s.id).second) fields.fail("duplicate synset offset");
    out.push_back(std::move(s));
  }
}

void check_index_file(const fs::path& file, PartOfSpeech pos, const std::set<SynsetId>& seen) {
  const std::string content = store::read_file(file);
  std::size_t line_no = 0;
  for (auto line : store::lines(content)) {
    ++line_no;
    if (line.empty() || line.front() == ' ') continue;
    FieldReader fields(line, file, line_no);
    fields.next();  // lemma
    const auto p = fields.next();
    if (p.size() != 1 || pos_from_symbol(p[0]) != pos) fields.fail("wrong part of speech");
    const std::uint32_t synset_cnt = fields.number();
    const std::uint32_t p_cnt = fields.number();
    for (std::uint32_t k = 0; k < p_cnt; ++k) fields.next();
    fields.number();  // sense_cnt
    fields.number();  // tagsense_cnt
    for (std::uint32_t k = 0; k < synset_cnt; ++k) {
      const std::uint32_t offset = fields.number();
      if (!seen.contains(SynsetId{pos, offset})) {
        fields.fail("offset " + std::to_string(offset) + " not found in data file");
      }
    }
  }
}

}  // namespace

LexicalStore load_wordnet(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw LoadError(dir.string(), "not a directory");
  std::vector<Synset> synsets;
  std::set<SynsetId> seen;
  bool any = false;
  for (const auto& [pos, suffix] : kPosFiles) {
    const fs::path data = dir / ("data." + std::string(suffix));
    const fs::path index = dir / ("index." + std::string(suffix));
    const bool has_data = fs::exists(data);
    const bool has_index = fs::exists(index);
    if (!has_data && !has_index) continue;
    if (!has_data) throw LoadError(data.string(), "missing (index file present)");
    if (!has_index) throw LoadError(index.string(), "missing (data file present)");
    any = true;
    parse_data_file(data, pos, synsets, seen);
    check_index_file(index, pos, seen);
  }
  if (!any) throw LoadError(dir.string(), "no WordNet database files (index.* / data.*)");
  for (const auto& s : synsets) {
    for (const auto& h : s.hyponyms) {
      if (!seen.contains(h)) {
        throw LoadError((dir / ("data." + std::string(kPosFiles[static_cast<int>(h.pos)].suffix)))
                            .string(),
                        "hyponym pointer to missing synset " + to_string(h));
      }
    }
  }
  return LexicalStore(std::move(synsets));
}

// ---------------------------------------------------------------------------
// Saved store

namespace {
constexpr std::string_view kLexicalKind = "wwqe-wordnet-store";

std::optional<SynsetId> parse_synset_id(std::string_view s) {
  if (s.size() < 3 || s[1] != ':') return std::nullopt;
  auto pos = pos_from_symbol(s[0]);
  if (!pos || s[0] == 's') return std::nullopt;
  std::uint32_t offset = 0;
  const auto [ptr, ec] = std::from_chars(s.data() + 2, s.data() + s.size(), offset);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return SynsetId{*pos, offset};
}
}  // namespace

void save_lexical_store(const LexicalStore& store, const fs::path& dir) {
  // synset_id \t lemma|lemma \t hyponym,hyponym \t gloss
  std::string table;
  for (const auto& [id, s] : store.synsets()) {
    table += to_string(id);
    table += '\t';
    for (std::size_t k = 0; k < s.lemmas.size(); ++k) {
      if (k > 0) table += '|';
      table += store::escape_field(s.lemmas[k]);
    }
    table += '\t';
    for (std::size_t k = 0; k < s.hyponyms.size(); ++k) {
      if (k > 0) table += ',';
      table += to_string(s.hyponyms[k]);
    }
    table += '\t';
    table += store::escape_field(s.gloss);
    table += '\n';
  }
  store::write_store(dir, kLexicalKind,
                     {{"n_synsets", static_cast<std::int64_t>(store.size())}},
                     {{"synsets.tsv", std::move(table)}});
}

LexicalStore load_lexical_store(const fs::path& dir) {
  auto loaded = store::read_store(dir, kLexicalKind);
  const fs::path file = dir / "synsets.tsv";
  auto it = loaded.tables.find("synsets.tsv");
  if (it == loaded.tables.end()) throw LoadError(file.string(), "missing table");
  std::vector<Synset> synsets;
  std::size_t line_no = 0;
  for (auto line : store::lines(it->second)) {
    ++line_no;
    const auto fields = store::split(line, '\t');
    const auto bad = [&] { return LoadError(file.string(), "bad row " + std::to_string(line_no)); };
    if (fields.size() != 4) throw bad();
    Synset s;
    auto id = parse_synset_id(fields[0]);
    if (!id) throw bad();
    s.id = *id;
    for (auto lemma : store::split(fields[1], '|')) s.lemmas.push_back(store::unescape_field(lemma));
    if (!fields[2].empty()) {
      for (auto h : store::split(fields[2], ',')) {
        auto hid = parse_synset_id(h);
        if (!hid) throw bad();
        s.hyponyms.push_back(*hid);
      }
    }
    s.gloss = store::unescape_field(fields[3]);
    synsets.push_back(std::move(s));
  }
  try {
    return LexicalStore(std::move(synsets));
  } catch (const LoadError&) {
    throw;
  } catch (const Error& e) {
    throw LoadError(file.string(), e.what());
  }
}

LexicalStore open_lexical_store(const fs::path& dir) {
  if (fs::exists(dir / "manifest.json")) return load_lexical_store(dir);
  return load_wordnet(dir);
}

}  // namespace wwqe
