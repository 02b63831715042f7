#include "wwqe/query_prep.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <optional>
#include <set>

#include "wwqe/error.hpp"
#include "wwqe/store_io.hpp"
#include "wwqe/text.hpp"

namespace wwqe {

namespace {

constexpr std::array<std::string_view, 45> kPennTags = {
    "CC",  "CD",  "DT",  "EX",  "FW",  "IN",   "JJ",  "JJR", "JJS", "LS",  "MD",  "NN",
    "NNS", "NNP", "NNPS", "PDT", "POS", "PRP", "PRP$", "RB", "RBR", "RBS", "RP",  "SYM",
    "TO",  "UH",  "VB",  "VBD", "VBG", "VBN", "VBP", "VBZ", "WDT", "WP",  "WP$", "WRB",
    "$",   "#",   "``",  "''",  "(",   ")",   ",",   ".",   ":"};

struct Entry {
  std::string_view word;
  std::string_view tag;
};

// Closed-class words plus the commonest auxiliaries.
constexpr Entry kBuiltin[] = {
    {"the", "DT"},     {"a", "DT"},        {"an", "DT"},       {"this", "DT"},
    {"that", "DT"},    {"these", "DT"},    {"those", "DT"},    {"some", "DT"},
    {"any", "DT"},     {"each", "DT"},     {"every", "DT"},    {"no", "DT"},
    {"all", "DT"},     {"both", "DT"},     {"either", "DT"},   {"neither", "DT"},
    {"of", "IN"},      {"in", "IN"},       {"on", "IN"},       {"at", "IN"},
    {"by", "IN"},      {"for", "IN"},      {"with", "IN"},     {"about", "IN"},
    {"against", "IN"}, {"between", "IN"},  {"into", "IN"},     {"through", "IN"},
    {"during", "IN"},  {"before", "IN"},   {"after", "IN"},    {"above", "IN"},
    {"below", "IN"},   {"from", "IN"},     {"over", "IN"},     {"under", "IN"},
    {"among", "IN"},   {"without", "IN"},  {"within", "IN"},   {"across", "IN"},
    {"since", "IN"},   {"until", "IN"},    {"upon", "IN"},     {"via", "IN"},
    {"per", "IN"},     {"as", "IN"},       {"than", "IN"},     {"if", "IN"},
    {"because", "IN"}, {"whether", "IN"},  {"towards", "IN"},  {"toward", "IN"},
    {"to", "TO"},      {"and", "CC"},      {"or", "CC"},       {"but", "CC"},
    {"nor", "CC"},     {"yet", "CC"},      {"i", "PRP"},       {"you", "PRP"},
    {"he", "PRP"},     {"she", "PRP"},     {"it", "PRP"},      {"we", "PRP"},
    {"they", "PRP"},   {"me", "PRP"},      {"him", "PRP"},     {"us", "PRP"},
    {"them", "PRP"},   {"my", "PRP$"},     {"your", "PRP$"},   {"his", "PRP$"},
    {"her", "PRP$"},   {"its", "PRP$"},    {"our", "PRP$"},    {"their", "PRP$"},
    {"can", "MD"},     {"could", "MD"},    {"may", "MD"},      {"might", "MD"},
    {"must", "MD"},    {"shall", "MD"},    {"should", "MD"},   {"will", "MD"},
    {"would", "MD"},   {"is", "VBZ"},      {"are", "VBP"},     {"was", "VBD"},
    {"were", "VBD"},   {"be", "VB"},       {"been", "VBN"},    {"being", "VBG"},
    {"am", "VBP"},     {"do", "VBP"},      {"does", "VBZ"},    {"did", "VBD"},
    {"has", "VBZ"},    {"have", "VBP"},    {"had", "VBD"},     {"not", "RB"},
    {"very", "RB"},    {"too", "RB"},      {"also", "RB"},     {"just", "RB"},
    {"only", "RB"},    {"there", "EX"},    {"what", "WP"},     {"who", "WP"},
    {"whom", "WP"},    {"which", "WDT"},   {"whose", "WP$"},   {"when", "WRB"},
    {"where", "WRB"},  {"why", "WRB"},     {"how", "WRB"},
};

struct SuffixRule {
  std::string_view suffix;
  std::size_t min_length;
  std::string_view tag;
};

constexpr SuffixRule kSuffixRules[] = {
    {"ing", 5, "VBG"},  {"ed", 4, "VBD"},   {"ly", 4, "RB"},    {"ous", 5, "JJ"},
    {"ful", 5, "JJ"},   {"ive", 5, "JJ"},   {"able", 6, "JJ"},  {"ible", 6, "JJ"},
    {"less", 6, "JJ"},  {"ical", 6, "JJ"},  {"tion", 5, "NN"},  {"sion", 5, "NN"},
    {"ness", 5, "NN"},  {"ment", 6, "NN"},  {"ity", 5, "NN"},
};

bool is_number(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return std::isdigit(static_cast<unsigned char>(c));
  });
}

bool is_capitalized(std::string_view s) {
  return !s.empty() && std::isupper(static_cast<unsigned char>(s.front()));
}

}  // namespace

bool is_penn_tag(std::string_view tag) {
  return std::find(kPennTags.begin(), kPennTags.end(), tag) != kPennTags.end();
}

bool is_content_tag(std::string_view tag) {
  return tag.starts_with("NN") || tag.starts_with("JJ") || tag.starts_with("VB") || tag == "CD";
}

LexiconTagger::LexiconTagger() {
  for (const auto& [word, tag] : kBuiltin) lexicon_.emplace(word, tag);
}

LexiconTagger LexiconTagger::from_file(const std::filesystem::path& path) {
  LexiconTagger tagger;
  const std::string content = store::read_file(path);
  std::size_t line_no = 0;
  for (auto line : store::lines(content)) {
    ++line_no;
    const auto trimmed = line.find_first_not_of(" \t");
    if (trimmed == std::string_view::npos || line[trimmed] == '#') continue;
    std::vector<std::string_view> parts;
    std::size_t i = trimmed;
    while (i < line.size()) {
      const auto end = line.find_first_of(" \t", i);
      parts.push_back(line.substr(i, end == std::string_view::npos ? line.size() - i : end - i));
      if (end == std::string_view::npos) break;
      i = line.find_first_not_of(" \t", end);
      if (i == std::string_view::npos) break;
    }
    if (parts.size() != 2) {
      throw LoadError(path.string(), "line " + std::to_string(line_no) + ": expected 'word tag'");
    }
    if (!is_penn_tag(parts[1])) {
      throw LoadError(path.string(),
                      "line " + std::to_string(line_no) + ": unknown tag " + std::string(parts[1]));
    }
    tagger.add(parts[0], parts[1]);
  }
  return tagger;
}

void LexiconTagger::add(std::string_view word, std::string_view tag) {
  if (!is_penn_tag(tag)) throw Error("unknown POS tag " + std::string(tag));
  lexicon_[text::fold_case(word)] = std::string(tag);
}

std::string LexiconTagger::tag_one(std::string_view surface, std::string_view normalized) const {
  if (auto it = lexicon_.find(std::string(normalized)); it != lexicon_.end()) return it->second;
  if (is_number(normalized)) return "CD";
  for (const auto& rule : kSuffixRules) {
    if (normalized.size() >= rule.min_length && normalized.ends_with(rule.suffix)) {
      return std::string(rule.tag);
    }
  }
  if (is_capitalized(surface)) return "NNP";
  if (normalized.size() > 3 && normalized.ends_with('s') && !normalized.ends_with("ss")) {
    return "NNS";
  }
  return "NN";
}

std::vector<TaggedToken> LexiconTagger::tag(const std::vector<std::string>& tokens) const {
  std::vector<TaggedToken> out;
  out.reserve(tokens.size());
  for (const auto& tok : tokens) {
    std::string normalized = text::fold_case(tok);
    std::string tag = tag_one(tok, normalized);
    out.push_back({tok, std::move(normalized), std::move(tag)});
  }
  return out;
}

std::vector<std::string> tokenize_query(std::string_view text) { return text::split_words(text); }

std::vector<TaggedToken> pos_tag(const std::vector<std::string>& tokens, const Tagger& tagger) {
  return tagger.tag(tokens);
}

namespace {

std::vector<std::string_view> whitespace_items(std::string_view text) {
  std::vector<std::string_view> items;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    const std::size_t start = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i > start) items.push_back(text.substr(start, i - start));
  }
  return items;
}

std::optional<TaggedToken> split_tagged(std::string_view item) {
  const auto underscore = item.rfind('_');
  if (underscore == std::string_view::npos || underscore == 0) return std::nullopt;
  const std::string_view tag = item.substr(underscore + 1);
  if (!is_penn_tag(tag)) return std::nullopt;
  std::string word(item.substr(0, underscore));
  if (!word.empty() && word.back() == '\\') word.pop_back();  // "Swine\_NN"
  if (word.empty()) return std::nullopt;
  std::string normalized = text::fold_case(word);
  return TaggedToken{std::move(word), std::move(normalized), std::string(tag)};
}

}  // namespace

bool is_pretagged(std::string_view text) {
  const auto items = whitespace_items(text);
  return !items.empty() && std::all_of(items.begin(), items.end(), [](std::string_view item) {
    return split_tagged(item).has_value();
  });
}

std::vector<TaggedToken> parse_pretagged(std::string_view text) {
  std::vector<TaggedToken> out;
  for (auto item : whitespace_items(text)) {
    auto tagged = split_tagged(item);
    if (!tagged) throw Error("not a word_TAG item: '" + std::string(item) + "'");
    out.push_back(std::move(*tagged));
  }
  return out;
}

KeywordSet extract_keywords(const std::vector<TaggedToken>& tagged) {
  std::vector<KeywordUnit> units;
  const auto make_unit = [&](std::size_t begin, std::size_t end) {
    KeywordUnit unit;
    unit.begin = begin;
    unit.end = end;
    for (std::size_t k = begin; k < end; ++k) {
      if (k > begin) {
        unit.text += ' ';
        unit.normalized += ' ';
      }
      unit.text += tagged[k].surface;
      unit.normalized += tagged[k].normalized;
    }
    return unit;
  };
  std::size_t i = 0;
  while (i < tagged.size()) {
    if (!is_content_tag(tagged[i].tag)) {
      ++i;
      continue;
    }
    std::size_t run_end = i;
    while (run_end < tagged.size() && is_content_tag(tagged[run_end].tag)) ++run_end;
    // Ordered by end position, then shorter (later-starting) spans first.
    for (std::size_t end = i + 1; end <= run_end; ++end) {
      for (std::size_t begin = end; begin-- > i;) units.push_back(make_unit(begin, end));
    }
    i = run_end;
  }

  KeywordSet set;
  std::set<std::string> seen_individuals;
  std::set<std::string> seen_phrases;
  for (auto& unit : units) {
    auto& seen = unit.is_phrase() ? seen_phrases : seen_individuals;
    if (!seen.insert(unit.normalized).second) continue;
    (unit.is_phrase() ? set.phrases : set.individuals).push_back(unit);
    set.all_units.push_back(std::move(unit));
  }
  return set;
}

KeywordSet prepare_query(std::string_view raw, const Tagger& tagger) {
  if (is_pretagged(raw)) return extract_keywords(parse_pretagged(raw));
  return extract_keywords(pos_tag(tokenize_query(raw), tagger));
}

}  // namespace wwqe
