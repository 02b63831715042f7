#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace wwqe {

// Dense handle for a content article, valid in [0, n_articles).
struct ArticleId {
  std::uint32_t value = 0;

  friend constexpr auto operator<=>(ArticleId, ArticleId) = default;
};

struct Article {
  ArticleId id;
  std::string title;          // normalized
  std::string display_title;  // as written in the dump
  std::string body;           // markup stripped
  std::vector<std::string> link_targets;  // normalized, as extracted
};

struct IngestStats {
  std::size_t pages = 0;
  std::size_t content_articles = 0;
  std::size_t redirects = 0;
  std::size_t skipped_namespace = 0;
  std::size_t duplicate_titles = 0;
  std::size_t unresolved_redirects = 0;
  std::size_t dangling_links = 0;
  std::size_t links = 0;

  friend bool operator==(const IngestStats&, const IngestStats&) = default;
};

struct Idf {
  double value = 0.0;
  // Set when the term occurs in no article and log(N / 1) was substituted.
  bool df_substituted = false;
};

// The pre-resolution material a GraphStore is built from. Ingestion produces
// it from a dump; the on-disk store persists exactly this and rebuilds.
struct GraphSource {
  struct Page {
    std::string display_title;
    std::string body;
    std::vector<std::string> link_targets;
  };
  std::vector<Page> pages;  // content pages in dump order
  // normalized alias -> normalized target title, in insertion order
  std::vector<std::pair<std::string, std::string>> redirects;
  std::size_t pages_seen = 0;
  std::size_t skipped_namespace = 0;
  std::size_t duplicate_titles = 0;  // already removed from pages
};

// Immutable article store with link graph and term statistics. Safe for
// concurrent reads once constructed.
class GraphStore {
 public:
  explicit GraphStore(GraphSource source, unsigned threads = 0);

  std::size_t n_articles() const noexcept { return articles_.size(); }
  const Article& article(ArticleId id) const;
  const IngestStats& stats() const noexcept { return stats_; }

  // Normalizes the title, then looks it up among article titles and redirect
  // aliases.
  std::optional<ArticleId> resolve_title(std::string_view title) const;

  // Sorted, deduplicated.
  const std::vector<ArticleId>& out_links(ArticleId id) const;
  const std::vector<ArticleId>& in_links(ArticleId id) const;

  // Total occurrences of all terms in the article's token stream. Each term
  // is tokenized; multi-token terms count contiguous matches. Throws on an
  // empty set.
  std::size_t term_frequency(ArticleId id, std::span<const std::string> terms) const;
  std::size_t term_frequency(ArticleId id, std::string_view term) const;

  // Number of articles containing the term (contiguous match for phrases).
  std::size_t document_frequency(std::string_view term) const;

  // ln(N / df); df = 0 substitutes 1.
  Idf idf(std::string_view term) const;

  // Case-folded token stream of an article.
  std::span<const std::uint32_t> tokens(ArticleId id) const;
  std::optional<std::uint32_t> term_id(std::string_view token) const;
  const std::string& term_text(std::uint32_t term_id) const { return terms_.at(term_id); }
  std::size_t vocabulary_size() const noexcept { return terms_.size(); }

  // Redirect aliases that resolved, sorted by alias.
  const std::vector<std::pair<std::string, ArticleId>>& redirect_aliases() const noexcept {
    return aliases_;
  }
  // Redirects as read from the dump (alias -> target title), unresolved.
  const std::vector<std::pair<std::string, std::string>>& raw_redirects() const noexcept {
    return raw_redirects_;
  }

 private:
  void check(ArticleId id) const;
  std::optional<std::vector<std::uint32_t>> token_ids(std::string_view term) const;
  std::size_t count_sequence(ArticleId id, std::span<const std::uint32_t> seq) const;

  std::vector<std::pair<std::string, std::string>> raw_redirects_;
  IngestStats stats_;
  std::vector<Article> articles_;
  std::unordered_map<std::string, ArticleId> title_index_;
  std::vector<std::pair<std::string, ArticleId>> aliases_;
  std::vector<std::vector<ArticleId>> out_adj_;
  std::vector<std::vector<ArticleId>> in_adj_;
  std::unordered_map<std::string, std::uint32_t> term_ids_;
  std::vector<std::string> terms_;
  std::vector<std::vector<std::uint32_t>> tokens_;
  // per article: (term id, count), sorted by term id
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> counts_;
  // per term: articles containing it, ascending
  std::vector<std::vector<ArticleId>> postings_;
};

// Parses a MediaWiki pages-articles XML export. Only namespace 0 pages are
// kept; redirects become title aliases. Throws IngestError.
GraphSource parse_dump(std::istream& dump);
GraphSource parse_dump(std::string_view xml);

GraphStore ingest_dump(std::istream& dump, unsigned threads = 0);

// On-disk store: a directory holding manifest.json plus the source tables.
// The files are a pure function of the store contents.
void save_graph_store(const GraphStore& store, const std::filesystem::path& dir);
GraphStore load_graph_store(const std::filesystem::path& dir, unsigned threads = 0);

}  // namespace wwqe
