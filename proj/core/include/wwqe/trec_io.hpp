#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wwqe/weighted_term.hpp"

namespace wwqe {

struct TrecDocument {
  std::string docno;
  std::string text;  // contents of <TEXT> elements, or the whole body if none
};

// <DOC><DOCNO>..</DOCNO><TEXT>..</TEXT></DOC> blocks. Throws ParseError on a
// DOC without a DOCNO or an unterminated element; the message names the
// DOCNO when it is known.
std::vector<TrecDocument> parse_trec_corpus(std::string_view content);

struct Topic {
  int id = 0;
  std::string title;

  friend bool operator==(const Topic&, const Topic&) = default;
};

// <top> blocks with <num> and <title>; both closed ("<num>126</num>") and
// classic unclosed TREC markup ("<num> Number: 126") are accepted. Other
// fields are ignored. Throws ParseError with the line of the offending
// block.
std::vector<Topic> parse_topics(std::string_view content);

class QRels {
 public:
  // Throws Error on a conflicting duplicate judgment.
  void add(int topic, const std::string& docno, int grade);

  std::optional<int> grade(int topic, const std::string& docno) const;
  // Judgments with grade >= 1 count as relevant.
  bool is_relevant(int topic, const std::string& docno) const;
  bool is_judged(int topic, const std::string& docno) const;
  std::size_t relevant_count(int topic) const;
  std::size_t nonrelevant_count(int topic) const;
  std::vector<int> topics() const;
  std::size_t size() const noexcept;
  const std::map<std::string, int>* judgments(int topic) const;

 private:
  std::map<int, std::map<std::string, int>> judgments_;
};

// "topic iteration DOCNO grade" lines. Throws ParseError.
QRels parse_qrels(std::string_view content);

struct RunEntry {
  std::string docno;
  double score = 0.0;
  int rank = 0;

  friend bool operator==(const RunEntry&, const RunEntry&) = default;
};

// topic -> entries ordered by rank (1-based).
using RankedRun = std::map<int, std::vector<RunEntry>>;

// Six-column "topic Q0 DOCNO rank score tag" lines, score with six decimals.
std::string format_run(const RankedRun& run, std::string_view tag);
// Throws ParseError on malformed lines or a DOCNO repeated within a topic.
RankedRun parse_run(std::string_view content);

using WeightedQueries = std::map<int, std::vector<WeightedTerm>>;

// "topic<TAB>term<TAB>weight" lines.
std::string format_weighted_queries(const WeightedQueries& queries);
WeightedQueries parse_weighted_queries(std::string_view content);

std::string format_double(double value, int decimals = 6);

}  // namespace wwqe
