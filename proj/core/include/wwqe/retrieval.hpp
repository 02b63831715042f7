#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "wwqe/trec_io.hpp"
#include "wwqe/weighted_term.hpp"

namespace wwqe {

enum class Model : std::uint8_t { bm25, tfidf };

std::string_view to_string(Model model);
// Throws Error on anything but "bm25" or "tfidf".
Model parse_model(std::string_view name);

struct Bm25Params {
  double k1 = 1.2;
  double b = 0.75;
};

// A short general-purpose English stopword list.
std::vector<std::string> default_stopwords();

struct Posting {
  std::uint32_t doc = 0;
  std::uint32_t tf = 0;

  friend bool operator==(const Posting&, const Posting&) = default;
};

// Unigram inverted index. Terms are case-folded tokens with stopwords
// removed, then Porter-stemmed when stemming is on. Immutable once built.
class InvertedIndex {
 public:
  // Throws Error on an empty corpus or a duplicate DOCNO.
  InvertedIndex(const std::vector<TrecDocument>& docs, std::vector<std::string> stopwords,
                bool stemming);

  std::size_t n_docs() const noexcept { return docnos_.size(); }
  double avg_doc_length() const noexcept { return avg_length_; }
  std::uint32_t doc_length(std::uint32_t doc) const { return lengths_.at(doc); }
  const std::string& docno(std::uint32_t doc) const { return docnos_.at(doc); }
  std::optional<std::uint32_t> find_doc(std::string_view docno) const;

  bool stemming() const noexcept { return stemming_; }
  const std::vector<std::string>& stopwords() const noexcept { return stopword_list_; }
  bool is_stopword(std::string_view folded) const;

  // Index terms of a text, in order, after the same stopping and stemming
  // the corpus went through.
  std::vector<std::string> analyze(std::string_view text) const;

  // Postings in ascending doc order; empty for unknown terms.
  std::span<const Posting> postings(std::string_view term) const;
  std::size_t document_frequency(std::string_view term) const { return postings(term).size(); }
  std::size_t vocabulary_size() const noexcept { return postings_.size(); }
  // All terms, sorted.
  std::vector<std::string> terms() const;

 private:
  friend InvertedIndex load_index(const std::filesystem::path& dir);
  InvertedIndex() = default;
  void finish();

  bool stemming_ = true;
  std::vector<std::string> stopword_list_;  // sorted, unique
  std::unordered_set<std::string> stopword_set_;
  std::vector<std::string> docnos_;
  std::unordered_map<std::string, std::uint32_t> doc_index_;
  std::vector<std::uint32_t> lengths_;
  double avg_length_ = 0.0;
  std::unordered_map<std::string, std::vector<Posting>> postings_;
};

// Parses a TREC corpus and indexes it.
InvertedIndex build_index(std::string_view corpus, const std::vector<std::string>& stopwords,
                          bool stemming);

void save_index(const InvertedIndex& index, const std::filesystem::path& dir);
InvertedIndex load_index(const std::filesystem::path& dir);

// Per-term contributions; term_score is multiplied by the query weight.
double bm25_term_score(std::size_t tf, std::size_t df, std::size_t doc_length, double avg_length,
                       std::size_t n_docs, const Bm25Params& params = {});
double tfidf_term_score(std::size_t tf, std::size_t df, std::size_t n_docs);

// Scores every document sharing a term with the query:
// sum over query terms of weight * term score. Terms are analyzed like the
// corpus, and weights of terms that analyze to the same index term add up.
// Returns the top k by score descending then DOCNO ascending, ranks from 1.
// Throws Error when k == 0.
std::vector<RunEntry> search(const InvertedIndex& index, std::span<const WeightedTerm> query,
                             Model model, std::size_t k = 1000, const Bm25Params& params = {});

// Searches every topic independently. Topics with no hits are kept with an
// empty list.
RankedRun search_all(const InvertedIndex& index, const WeightedQueries& queries, Model model,
                     std::size_t k = 1000, unsigned threads = 1);

}  // namespace wwqe
