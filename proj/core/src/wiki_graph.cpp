#include "wwqe/wiki_graph.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <iterator>
#include <map>
#include <sstream>

#include "detail/parallel.hpp"
#include "dump_xml.hpp"
#include "wwqe/error.hpp"
#include "wwqe/store_io.hpp"
#include "wwqe/text.hpp"
#include "wwqe/wikitext.hpp"

namespace wwqe {

namespace {

constexpr int kMaxRedirectHops = 8;

}  // namespace

GraphSource parse_dump(std::string_view xml) {
  GraphSource source;
  std::vector<detail::RawPage> content;
  std::map<std::string, std::string> redirects;  // first alias definition wins
  std::vector<std::string> redirect_order;

  detail::read_dump_pages(xml, [&](detail::RawPage&& page) {
    ++source.pages_seen;
    if (page.ns != 0) {
      ++source.skipped_namespace;
      return;
    }
    std::optional<std::string> target;
    if (page.redirect_attr) {
      target = page.redirect_attr->empty() ? wikitext::redirect_target(page.text)
                                           : page.redirect_attr;
    } else {
      target = wikitext::redirect_target(page.text);
    }
    if (page.redirect_attr || target) {
      std::string alias = text::normalize_title(page.title);
      std::string to = target ? text::normalize_title(*target) : std::string();
      if (!alias.empty() && redirects.emplace(alias, to).second) redirect_order.push_back(alias);
      return;
    }
    content.push_back(std::move(page));
  });

  source.pages.resize(content.size());
  detail::parallel_for(content.size(), 0, [&](std::size_t i) {
    auto parsed = wikitext::parse(content[i].text);
    auto& out = source.pages[i];
    out.display_title = std::move(content[i].title);
    out.body = std::move(parsed.plain);
    out.link_targets = std::move(parsed.link_targets);
    std::string().swap(content[i].text);
  });
  for (auto& alias : redirect_order) {
    source.redirects.emplace_back(alias, redirects.at(alias));
  }
  return source;
}

GraphSource parse_dump(std::istream& dump) {
  std::string xml((std::istreambuf_iterator<char>(dump)), std::istreambuf_iterator<char>());
  if (dump.bad()) throw IngestError("read error", xml.size());
  return parse_dump(std::string_view(xml));
}

GraphStore ingest_dump(std::istream& dump, unsigned threads) {
  return GraphStore(parse_dump(dump), threads);
}

GraphStore::GraphStore(GraphSource source, unsigned threads) {
  stats_.pages = source.pages_seen;
  stats_.skipped_namespace = source.skipped_namespace;
  stats_.redirects = source.redirects.size();
  stats_.duplicate_titles = source.duplicate_titles;

  // Titles. The first page with a given normalized title wins.
  articles_.reserve(source.pages.size());
  for (auto& page : source.pages) {
    std::string title = text::normalize_title(page.display_title);
    if (title.empty() || title_index_.contains(title)) {
      ++stats_.duplicate_titles;
      continue;
    }
    Article article;
    article.id = ArticleId{static_cast<std::uint32_t>(articles_.size())};
    article.title = title;
    article.display_title = std::move(page.display_title);
    article.body = std::move(page.body);
    article.link_targets = std::move(page.link_targets);
    title_index_.emplace(std::move(title), article.id);
    articles_.push_back(std::move(article));
  }
  stats_.content_articles = articles_.size();
  if (articles_.empty()) throw IngestError("no content articles");

  // Redirect aliases, following chains through other redirects.
  std::unordered_map<std::string, std::string> redirect_map;
  for (const auto& [alias, target] : source.redirects) redirect_map.emplace(alias, target);
  for (const auto& [alias, target] : source.redirects) {
    if (title_index_.contains(alias)) continue;  // a real article shadows the alias
    std::string current = target;
    std::optional<ArticleId> resolved;
    for (int hop = 0; hop < kMaxRedirectHops; ++hop) {
      if (auto it = title_index_.find(current); it != title_index_.end()) {
        resolved = it->second;
        break;
      }
      auto next = redirect_map.find(current);
      if (next == redirect_map.end()) break;
      current = next->second;
    }
    if (resolved) {
      aliases_.emplace_back(alias, *resolved);
    } else {
      ++stats_.unresolved_redirects;
    }
  }
  std::sort(aliases_.begin(), aliases_.end());
  for (const auto& [alias, id] : aliases_) title_index_.emplace(alias, id);
  raw_redirects_ = std::move(source.redirects);

  // Link graph.
  const std::size_t n = articles_.size();
  out_adj_.resize(n);
  in_adj_.resize(n);
  for (const auto& article : articles_) {
    auto& out = out_adj_[article.id.value];
    for (const auto& target : article.link_targets) {
      auto it = title_index_.find(target);
      if (it == title_index_.end()) {
        ++stats_.dangling_links;
        continue;
      }
      out.push_back(it->second);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    stats_.links += out.size();
    for (ArticleId target : out) in_adj_[target.value].push_back(article.id);
  }
  // in_adj lists are filled in ascending source order already.

  // Token streams. Folding runs in parallel; interning is single-writer so
  // term ids are assigned in first-occurrence order.
  std::vector<std::string> folded(n);
  detail::parallel_for(n, threads, [&](std::size_t i) {
    folded[i].reserve(articles_[i].body.size());
    text::append_folded_tokens(articles_[i].body, folded[i]);
  });
  tokens_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::string_view rest = folded[i];
    auto& ids = tokens_[i];
    while (!rest.empty()) {
      const auto space = rest.find(' ');
      const std::string_view tok = rest.substr(0, space);
      rest.remove_prefix(space + 1);
      auto it = term_ids_.find(std::string(tok));
      if (it == term_ids_.end()) {
        it = term_ids_.emplace(std::string(tok), static_cast<std::uint32_t>(terms_.size())).first;
        terms_.emplace_back(tok);
      }
      ids.push_back(it->second);
    }
    std::string().swap(folded[i]);
  }

  counts_.resize(n);
  detail::parallel_for(n, threads, [&](std::size_t i) {
    std::vector<std::uint32_t> sorted = tokens_[i];
    std::sort(sorted.begin(), sorted.end());
    auto& counts = counts_[i];
    for (std::size_t k = 0; k < sorted.size();) {
      std::size_t j = k;
      while (j < sorted.size() && sorted[j] == sorted[k]) ++j;
      counts.emplace_back(sorted[k], static_cast<std::uint32_t>(j - k));
      k = j;
    }
  });
  postings_.resize(terms_.size());
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& [term, count] : counts_[i]) {
      postings_[term].push_back(ArticleId{static_cast<std::uint32_t>(i)});
    }
  }
}

void GraphStore::check(ArticleId id) const {
  if (id.value >= articles_.size()) {
    throw Error("invalid article id " + std::to_string(id.value));
  }
}

const Article& GraphStore::article(ArticleId id) const {
  check(id);
  return articles_[id.value];
}

std::optional<ArticleId> GraphStore::resolve_title(std::string_view title) const {
  auto it = title_index_.find(text::normalize_title(title));
  if (it == title_index_.end()) return std::nullopt;
  return it->second;
}

const std::vector<ArticleId>& GraphStore::out_links(ArticleId id) const {
  check(id);
  return out_adj_[id.value];
}

const std::vector<ArticleId>& GraphStore::in_links(ArticleId id) const {
  check(id);
  return in_adj_[id.value];
}

std::span<const std::uint32_t> GraphStore::tokens(ArticleId id) const {
  check(id);
  return tokens_[id.value];
}

std::optional<std::uint32_t> GraphStore::term_id(std::string_view token) const {
  auto it = term_ids_.find(std::string(token));
  if (it == term_ids_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::vector<std::uint32_t>> GraphStore::token_ids(std::string_view term) const {
  std::vector<std::uint32_t> ids;
  for (const auto& tok : text::tokenize(term)) {
    auto id = term_id(tok);
    if (!id) return std::nullopt;
    ids.push_back(*id);
  }
  return ids;
}

std::size_t GraphStore::count_sequence(ArticleId id,
                                       std::span<const std::uint32_t> seq) const {
  if (seq.empty()) return 0;
  if (seq.size() == 1) {
    const auto& counts = counts_[id.value];
    auto it = std::lower_bound(counts.begin(), counts.end(), seq[0],
                               [](const auto& entry, std::uint32_t t) { return entry.first < t; });
    return it != counts.end() && it->first == seq[0] ? it->second : 0;
  }
  const auto& toks = tokens_[id.value];
  std::size_t hits = 0;
  for (std::size_t i = 0; i + seq.size() <= toks.size(); ++i) {
    if (std::equal(seq.begin(), seq.end(), toks.begin() + static_cast<std::ptrdiff_t>(i))) ++hits;
  }
  return hits;
}

std::size_t GraphStore::term_frequency(ArticleId id, std::string_view term) const {
  check(id);
  auto ids = token_ids(term);
  return ids ? count_sequence(id, *ids) : 0;
}

std::size_t GraphStore::term_frequency(ArticleId id, std::span<const std::string> terms) const {
  check(id);
  if (terms.empty()) throw Error("term_frequency: empty term set");
  std::size_t total = 0;
  for (const auto& term : terms) total += term_frequency(id, term);
  return total;
}

std::size_t GraphStore::document_frequency(std::string_view term) const {
  auto ids = token_ids(term);
  if (!ids || ids->empty()) return 0;
  // Candidate articles: postings of the rarest token.
  const std::uint32_t* rarest = &(*ids)[0];
  for (const auto& t : *ids) {
    if (postings_[t].size() < postings_[*rarest].size()) rarest = &t;
  }
  if (ids->size() == 1) return postings_[*rarest].size();
  std::size_t df = 0;
  for (ArticleId a : postings_[*rarest]) {
    if (count_sequence(a, *ids) > 0) ++df;
  }
  return df;
}

Idf GraphStore::idf(std::string_view term) const {
  const std::size_t df = document_frequency(term);
  const double n = static_cast<double>(articles_.size());
  if (df == 0) return {std::log(n), true};
  return {std::log(n / static_cast<double>(df)), false};
}

// ---------------------------------------------------------------------------
// On-disk store

namespace {
constexpr std::string_view kStoreKind = "wwqe-wiki-store";
}

void save_graph_store(const GraphStore& store, const std::filesystem::path& dir) {
  std::string articles;
  std::string links;
  for (std::uint32_t i = 0; i < store.n_articles(); ++i) {
    const Article& a = store.article(ArticleId{i});
    articles += std::to_string(i);
    articles += '\t';
    articles += store::escape_field(a.display_title);
    articles += '\t';
    articles += store::escape_field(a.body);
    articles += '\n';
    links += std::to_string(i);
    for (const auto& target : a.link_targets) {
      links += '\t';
      links += store::escape_field(target);
    }
    links += '\n';
  }
  std::string redirects;
  for (const auto& [alias, target] : store.raw_redirects()) {
    redirects += store::escape_field(alias);
    redirects += '\t';
    redirects += store::escape_field(target);
    redirects += '\n';
  }
  const auto& stats = store.stats();
  std::map<std::string, std::int64_t> props = {
      {"n_articles", static_cast<std::int64_t>(store.n_articles())},
      {"n_terms", static_cast<std::int64_t>(store.vocabulary_size())},
      {"n_links", static_cast<std::int64_t>(stats.links)},
      {"pages", static_cast<std::int64_t>(stats.pages)},
      {"redirects", static_cast<std::int64_t>(stats.redirects)},
      {"skipped_namespace", static_cast<std::int64_t>(stats.skipped_namespace)},
      {"dangling_links", static_cast<std::int64_t>(stats.dangling_links)},
      {"duplicate_titles", static_cast<std::int64_t>(stats.duplicate_titles)},
      {"unresolved_redirects", static_cast<std::int64_t>(stats.unresolved_redirects)},
  };
  store::write_store(dir, kStoreKind, props,
                     {{"articles.tsv", std::move(articles)},
                      {"links.tsv", std::move(links)},
                      {"redirects.tsv", std::move(redirects)}});
}

GraphStore load_graph_store(const std::filesystem::path& dir, unsigned threads) {
  auto loaded = store::read_store(dir, kStoreKind);
  const auto table = [&](const std::string& name) -> const std::string& {
    auto it = loaded.tables.find(name);
    if (it == loaded.tables.end()) throw LoadError((dir / name).string(), "missing table");
    return it->second;
  };
  GraphSource source;
  const auto article_lines = store::lines(table("articles.tsv"));
  const auto link_lines = store::lines(table("links.tsv"));
  if (article_lines.size() != link_lines.size()) {
    throw LoadError((dir / "links.tsv").string(), "row count differs from articles.tsv");
  }
  source.pages.resize(article_lines.size());
  for (std::size_t i = 0; i < article_lines.size(); ++i) {
    const auto fields = store::split(article_lines[i], '\t');
    if (fields.size() != 3 || fields[0] != std::to_string(i)) {
      throw LoadError((dir / "articles.tsv").string(), "bad row " + std::to_string(i + 1));
    }
    source.pages[i].display_title = store::unescape_field(fields[1]);
    source.pages[i].body = store::unescape_field(fields[2]);
    const auto targets = store::split(link_lines[i], '\t');
    if (targets[0] != std::to_string(i)) {
      throw LoadError((dir / "links.tsv").string(), "bad row " + std::to_string(i + 1));
    }
    for (std::size_t k = 1; k < targets.size(); ++k) {
      source.pages[i].link_targets.push_back(store::unescape_field(targets[k]));
    }
  }
  for (const auto line : store::lines(table("redirects.tsv"))) {
    const auto fields = store::split(line, '\t');
    if (fields.size() != 2) throw LoadError((dir / "redirects.tsv").string(), "bad row");
    source.redirects.emplace_back(store::unescape_field(fields[0]),
                                  store::unescape_field(fields[1]));
  }
  source.pages_seen = static_cast<std::size_t>(loaded.properties["pages"]);
  source.skipped_namespace = static_cast<std::size_t>(loaded.properties["skipped_namespace"]);
  source.duplicate_titles = static_cast<std::size_t>(loaded.properties["duplicate_titles"]);
  GraphStore store(std::move(source), threads);
  if (static_cast<std::int64_t>(store.n_articles()) != loaded.properties["n_articles"]) {
    throw LoadError((dir / "manifest.json").string(), "article count mismatch");
  }
  return store;
}

}  // namespace wwqe
