#include "wwqe/retrieval.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

#include "detail/parallel.hpp"
#include "wwqe/error.hpp"
#include "wwqe/porter.hpp"
#include "wwqe/store_io.hpp"
#include "wwqe/text.hpp"

namespace wwqe {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kIndexKind = "wwqe-index";

std::optional<std::uint32_t> parse_u32(std::string_view s) {
  std::uint32_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace

std::string_view to_string(Model model) {
  return model == Model::bm25 ? "bm25" : "tfidf";
}

Model parse_model(std::string_view name) {
  if (name == "bm25") return Model::bm25;
  if (name == "tfidf") return Model::tfidf;
  throw Error("unknown model '" + std::string(name) + "' (expected bm25 or tfidf)");
}

std::vector<std::string> default_stopwords() {
  return {"a",     "about", "above", "after", "again", "against", "all",   "am",    "an",
          "and",   "any",   "are",   "as",    "at",    "be",      "been",  "before", "being",
          "below", "between", "both", "but",  "by",    "can",     "could", "did",   "do",
          "does",  "doing", "down",  "during", "each", "few",     "for",   "from",  "further",
          "had",   "has",   "have",  "having", "he",   "her",     "here",  "hers",  "herself",
          "him",   "himself", "his", "how",   "i",     "if",      "in",    "into",  "is",
          "it",    "its",   "itself", "just", "me",    "more",    "most",  "my",    "myself",
          "no",    "nor",   "not",   "now",   "of",    "off",     "on",    "once",  "only",
          "or",    "other", "our",   "ours",  "ourselves", "out", "over",  "own",   "same",
          "she",   "should", "so",   "some",  "such",  "than",    "that",  "the",   "their",
          "theirs", "them", "themselves", "then", "there", "these", "they", "this", "those",
          "through", "to",  "too",   "under", "until", "up",      "very",  "was",   "we",
          "were",  "what",  "when",  "where", "which", "while",   "who",   "whom",  "why",
          "will",  "with",  "would", "you",   "your",  "yours",   "yourself", "yourselves"};
}

InvertedIndex::InvertedIndex(const std::vector<TrecDocument>& docs,
                             std::vector<std::string> stopwords, bool stemming)
    : stemming_(stemming) {
  if (docs.empty()) throw Error("empty corpus");
  for (auto& w : stopwords) w = text::fold_case(w);
  std::sort(stopwords.begin(), stopwords.end());
  stopwords.erase(std::unique(stopwords.begin(), stopwords.end()), stopwords.end());
  stopword_list_ = std::move(stopwords);
  stopword_set_.insert(stopword_list_.begin(), stopword_list_.end());

  std::unordered_map<std::string, std::uint32_t> counts;
  for (const auto& doc : docs) {
    const auto id = static_cast<std::uint32_t>(docnos_.size());
    if (!doc_index_.emplace(doc.docno, id).second) {
      throw Error("duplicate DOCNO " + doc.docno);
    }
    docnos_.push_back(doc.docno);
    counts.clear();
    std::uint32_t length = 0;
    for (auto& term : analyze(doc.text)) {
      ++counts[std::move(term)];
      ++length;
    }
    lengths_.push_back(length);
    for (auto& [term, tf] : counts) postings_[term].push_back({id, tf});
  }
  finish();
}

void InvertedIndex::finish() {
  double total = 0.0;
  for (auto len : lengths_) total += len;
  avg_length_ = lengths_.empty() ? 0.0 : total / static_cast<double>(lengths_.size());
}

std::optional<std::uint32_t> InvertedIndex::find_doc(std::string_view docno) const {
  auto it = doc_index_.find(std::string(docno));
  if (it == doc_index_.end()) return std::nullopt;
  return it->second;
}

bool InvertedIndex::is_stopword(std::string_view folded) const {
  return stopword_set_.count(std::string(folded)) != 0;
}

std::vector<std::string> InvertedIndex::analyze(std::string_view content) const {
  std::vector<std::string> out;
  for (auto& token : text::tokenize(content)) {
    if (stopword_set_.count(token) != 0) continue;
    out.push_back(stemming_ ? porter_stem(token) : std::move(token));
  }
  return out;
}

std::span<const Posting> InvertedIndex::postings(std::string_view term) const {
  auto it = postings_.find(std::string(term));
  if (it == postings_.end()) return {};
  return it->second;
}

std::vector<std::string> InvertedIndex::terms() const {
  std::vector<std::string> out;
  out.reserve(postings_.size());
  for (const auto& [term, _] : postings_) out.push_back(term);
  std::sort(out.begin(), out.end());
  return out;
}

InvertedIndex build_index(std::string_view corpus, const std::vector<std::string>& stopwords,
                          bool stemming) {
  return InvertedIndex(parse_trec_corpus(corpus), stopwords, stemming);
}

void save_index(const InvertedIndex& index, const fs::path& dir) {
  std::string docs;
  for (std::uint32_t d = 0; d < index.n_docs(); ++d) {
    docs += store::escape_field(index.docno(d));
    docs += '\t';
    docs += std::to_string(index.doc_length(d));
    docs += '\n';
  }
  std::string postings;
  for (const auto& term : index.terms()) {
    postings += store::escape_field(term);
    postings += '\t';
    bool first = true;
    for (const auto& p : index.postings(term)) {
      if (!first) postings += ' ';
      first = false;
      postings += std::to_string(p.doc);
      postings += ':';
      postings += std::to_string(p.tf);
    }
    postings += '\n';
  }
  std::string stopwords;
  for (const auto& w : index.stopwords()) {
    stopwords += store::escape_field(w);
    stopwords += '\n';
  }
  store::write_store(dir, kIndexKind,
                     {{"n_docs", static_cast<std::int64_t>(index.n_docs())},
                      {"stemming", index.stemming() ? 1 : 0},
                      {"vocabulary", static_cast<std::int64_t>(index.vocabulary_size())}},
                     {{"docs.tsv", std::move(docs)},
                      {"postings.tsv", std::move(postings)},
                      {"stopwords.txt", std::move(stopwords)}});
}

InvertedIndex load_index(const fs::path& dir) {
  auto loaded = store::read_store(dir, kIndexKind);
  const auto table = [&](const std::string& name) -> const std::string& {
    auto it = loaded.tables.find(name);
    if (it == loaded.tables.end()) throw LoadError((dir / name).string(), "missing table");
    return it->second;
  };
  const auto bad = [&](const std::string& name, std::size_t line) {
    return LoadError((dir / name).string(), "bad row " + std::to_string(line));
  };

  InvertedIndex index;
  auto stemming = loaded.properties.find("stemming");
  index.stemming_ = stemming != loaded.properties.end() && stemming->second != 0;
  for (auto line : store::lines(table("stopwords.txt"))) {
    if (!line.empty()) index.stopword_list_.push_back(store::unescape_field(line));
  }
  index.stopword_set_.insert(index.stopword_list_.begin(), index.stopword_list_.end());

  std::size_t line_no = 0;
  for (auto line : store::lines(table("docs.tsv"))) {
    ++line_no;
    const auto f = store::split(line, '\t');
    if (f.size() != 2) throw bad("docs.tsv", line_no);
    auto len = parse_u32(f[1]);
    if (!len) throw bad("docs.tsv", line_no);
    std::string docno = store::unescape_field(f[0]);
    const auto id = static_cast<std::uint32_t>(index.docnos_.size());
    if (!index.doc_index_.emplace(docno, id).second) throw bad("docs.tsv", line_no);
    index.docnos_.push_back(std::move(docno));
    index.lengths_.push_back(*len);
  }
  if (index.docnos_.empty()) throw LoadError((dir / "docs.tsv").string(), "no documents");

  line_no = 0;
  for (auto line : store::lines(table("postings.tsv"))) {
    ++line_no;
    const auto f = store::split(line, '\t');
    if (f.size() != 2) throw bad("postings.tsv", line_no);
    std::vector<Posting> list;
    for (auto item : store::split(f[1], ' ')) {
      const auto colon = item.find(':');
      if (colon == std::string_view::npos) throw bad("postings.tsv", line_no);
      auto doc = parse_u32(item.substr(0, colon));
      auto tf = parse_u32(item.substr(colon + 1));
      if (!doc || !tf || *doc >= index.docnos_.size() || *tf == 0) {
        throw bad("postings.tsv", line_no);
      }
      list.push_back({*doc, *tf});
    }
    index.postings_.emplace(store::unescape_field(f[0]), std::move(list));
  }
  index.finish();
  return index;
}

double bm25_term_score(std::size_t tf, std::size_t df, std::size_t doc_length, double avg_length,
                       std::size_t n_docs, const Bm25Params& params) {
  if (tf == 0 || df == 0) return 0.0;
  const double n = static_cast<double>(n_docs);
  const double d = static_cast<double>(df);
  const double idf = std::log(1.0 + (n - d + 0.5) / (d + 0.5));
  const double norm = avg_length > 0.0 ? static_cast<double>(doc_length) / avg_length : 1.0;
  const double t = static_cast<double>(tf);
  return idf * t * (params.k1 + 1.0) / (t + params.k1 * (1.0 - params.b + params.b * norm));
}

double tfidf_term_score(std::size_t tf, std::size_t df, std::size_t n_docs) {
  if (tf == 0 || df == 0) return 0.0;
  return static_cast<double>(tf) *
         std::log(1.0 + static_cast<double>(n_docs) / static_cast<double>(df));
}

std::vector<RunEntry> search(const InvertedIndex& index, std::span<const WeightedTerm> query,
                             Model model, std::size_t k, const Bm25Params& params) {
  if (k == 0) throw Error("search cutoff must be at least 1");
  std::map<std::string, double> weights;
  for (const auto& q : query) {
    if (!(q.weight > 0.0)) continue;
    for (auto& term : index.analyze(q.term)) weights[std::move(term)] += q.weight;
  }

  std::unordered_map<std::uint32_t, double> scores;
  for (const auto& [term, weight] : weights) {
    const auto list = index.postings(term);
    for (const auto& p : list) {
      const double s = model == Model::bm25
                           ? bm25_term_score(p.tf, list.size(), index.doc_length(p.doc),
                                             index.avg_doc_length(), index.n_docs(), params)
                           : tfidf_term_score(p.tf, list.size(), index.n_docs());
      scores[p.doc] += weight * s;
    }
  }

  std::vector<std::pair<std::uint32_t, double>> ranked(scores.begin(), scores.end());
  const auto better = [&](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return index.docno(a.first) < index.docno(b.first);
  };
  if (ranked.size() > k) {
    std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(k), ranked.end(),
                      better);
    ranked.resize(k);
  } else {
    std::sort(ranked.begin(), ranked.end(), better);
  }
  std::vector<RunEntry> out;
  out.reserve(ranked.size());
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    out.push_back({index.docno(ranked[i].first), ranked[i].second, static_cast<int>(i + 1)});
  }
  return out;
}

RankedRun search_all(const InvertedIndex& index, const WeightedQueries& queries, Model model,
                     std::size_t k, unsigned threads) {
  std::vector<const std::pair<const int, std::vector<WeightedTerm>>*> items;
  for (const auto& entry : queries) items.push_back(&entry);
  std::vector<std::vector<RunEntry>> results(items.size());
  detail::parallel_for(items.size(), threads, [&](std::size_t i) {
    results[i] = search(index, items[i]->second, model, k);
  });
  RankedRun run;
  for (std::size_t i = 0; i < items.size(); ++i) run[items[i]->first] = std::move(results[i]);
  return run;
}

}  // namespace wwqe
