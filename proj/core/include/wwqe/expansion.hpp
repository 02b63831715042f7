#pragma once

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wwqe/query_prep.hpp"
#include "wwqe/weighted_term.hpp"
#include "wwqe/wiki_graph.hpp"
#include "wwqe/wordnet.hpp"

namespace wwqe {

enum class Source : std::uint8_t { wiki, wordnet };

std::string_view to_string(Source source);

struct ExpansionParams {
  std::size_t n_intermediate = 100;  // per source, after stage-1 scoring
  std::size_t m_final = 30;
  bool use_wikipedia = true;
  bool use_wordnet = true;
  bool use_synonyms = true;
  bool use_hyponyms = true;
  double expansion_weight = 0.5;
  // Multiplies the stage-1 score of candidates whose origin is a phrase.
  double phrase_boost = 1.0;
  unsigned threads = 1;

  // Throws Error unless 1 <= m_final <= 2 * n_intermediate and the weights
  // are finite and non-negative.
  void validate() const;
};

struct ExpansionTerm {
  std::string term;    // normalized
  Source source = Source::wiki;
  std::string origin;  // normalized keyword unit that produced it
  double stage1_score = 0.0;
  double correlation = 0.0;
  double weight = 0.0;

  friend bool operator==(const ExpansionTerm&, const ExpansionTerm&) = default;
};

struct ExpandedQuery {
  KeywordSet original_units;
  // Sorted by correlation descending, then term ascending. At most m_final.
  std::vector<ExpansionTerm> terms;
  // False when no individual query term has a Wikipedia article; every
  // correlation is then 0 and the order is lexicographic.
  bool correlation_defined = true;

  // Original individual terms at weight 1.0 followed by the expansion terms
  // at their final weights.
  std::vector<WeightedTerm> weighted_query() const;
};

// --- Wikipedia pathway -----------------------------------------------------

// Titles (normalized) of articles that are both an out-link and an in-link
// of the unit's article, sorted. Empty when the unit has no article.
std::vector<std::string> wiki_candidates(const GraphStore& graph, std::string_view unit);

// tf({unit} + level-1 synonyms, candidate article) * idf(candidate title).
// Throws Error when the candidate title does not resolve.
double inlink_score(const GraphStore& graph, const LexicalStore& wn, std::string_view unit,
                    std::string_view candidate_title);

// --- WordNet pathway -------------------------------------------------------

struct WordnetCandidate {
  std::string unit;  // normalized origin unit
  std::string term;  // normalized candidate

  friend auto operator<=>(const WordnetCandidate&, const WordnetCandidate&) = default;
};

// Phrases are looked up first. An individual word is expanded on its own
// only when no phrase containing it has a WordNet entry. Sorted, unique.
std::vector<WordnetCandidate> wordnet_candidates(const LexicalStore& wn, const KeywordSet& keywords,
                                                 bool synonyms = true, bool hyponyms = true);

// tf(candidate, article of unit) * idf(candidate). 0 when the unit has no
// article.
double wordnet_score(const GraphStore& graph, std::string_view candidate, std::string_view unit);

// --- Whole-query re-weighting ---------------------------------------------

// tf(term, a_t) * ln(T / tf(term, a_t)) where T sums tf(term, a) over a_q.
// Throws Error when a_t is not in a_q.
double article_term_weight(const GraphStore& graph, std::string_view term, ArticleId a_t,
                           std::span<const ArticleId> a_q);

// Individual query terms that resolve to an article, with that article, and
// the deduplicated article set a_q.
struct QueryArticles {
  std::vector<std::pair<std::string, ArticleId>> units;
  std::vector<ArticleId> a_q;  // sorted, unique
};
QueryArticles resolve_query_articles(const GraphStore& graph, std::span<const std::string> units);

// (1/|q|) * sum over resolvable units t of w(t, a_t) * w(candidate, a_t).
// Throws Error("correlation undefined") when no unit resolves.
double correlation_score(const GraphStore& graph, std::string_view candidate,
                         std::span<const std::string> query_units,
                         std::span<const ArticleId> a_q);

// --- Pipeline ---------------------------------------------------------------

ExpandedQuery expand(const GraphStore& graph, const LexicalStore& wn, const KeywordSet& keywords,
                     const ExpansionParams& params);
ExpandedQuery expand(const GraphStore& graph, const LexicalStore& wn, std::string_view raw_query,
                     const Tagger& tagger, const ExpansionParams& params);

// Tab-separated report, one row per expansion term:
// topic, rank, term, source, origin, stage1_score, correlation, weight.
std::string format_expansion_report(int topic, const ExpandedQuery& query);
std::string expansion_report_header();

}  // namespace wwqe
