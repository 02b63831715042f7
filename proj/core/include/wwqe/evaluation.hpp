#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "wwqe/trec_io.hpp"

namespace wwqe {

inline constexpr double kGmFloor = 1e-5;

using PrCurve = std::array<double, 11>;  // recall levels 0.0, 0.1, ..., 1.0

struct TopicMetrics {
  int topic = 0;
  std::size_t retrieved = 0;
  std::size_t relevant = 0;  // R
  std::size_t relevant_retrieved = 0;
  double average_precision = 0.0;
  std::map<int, double> precision_at;  // cutoff -> P@k
  double bpref = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  PrCurve interpolated{};
};

struct EvalReport {
  std::vector<int> cutoffs;
  std::vector<TopicMetrics> topics;  // ascending topic id
  // Run topics skipped because the qrels hold no relevant document for them.
  std::vector<int> excluded_topics;

  double map = 0.0;
  double gm_map = 0.0;
  std::map<int, double> mean_precision_at;
  double mean_bpref = 0.0;
  double mean_recall = 0.0;
  double mean_f1 = 0.0;
  std::size_t total_relevant = 0;
  std::size_t total_relevant_retrieved = 0;
  PrCurve interpolated{};
};

// Per-topic metrics of one ranked list (ordered by rank).
TopicMetrics evaluate_topic(int topic, std::span<const RunEntry> ranking, const QRels& qrels,
                            std::span<const int> cutoffs);

// Evaluates every run topic that has at least one relevant judgment. With
// missing_as_empty, qrels topics absent from the run count as empty rankings.
EvalReport evaluate(const RankedRun& run, const QRels& qrels,
                    std::vector<int> cutoffs = {5, 10, 20, 30}, bool missing_as_empty = false);

// 11-point interpolated precision averaged over the evaluated topics.
PrCurve interpolated_pr(const RankedRun& run, const QRels& qrels);

double mean_average_precision(std::span<const double> aps);
double geometric_mean_average_precision(std::span<const double> aps);

// Tab-separated tables.
std::string format_report(const EvalReport& report);
std::string format_curve(const PrCurve& curve);

}  // namespace wwqe
