#include "wwqe/evaluation.hpp"

#include <algorithm>
#include <cmath>

#include "wwqe/error.hpp"

namespace wwqe {

TopicMetrics evaluate_topic(int topic, std::span<const RunEntry> ranking, const QRels& qrels,
                            std::span<const int> cutoffs) {
  TopicMetrics m;
  m.topic = topic;
  m.retrieved = ranking.size();
  m.relevant = qrels.relevant_count(topic);
  const std::size_t nonrel = qrels.nonrelevant_count(topic);
  const double bpref_denom = static_cast<double>(std::min(m.relevant, nonrel));

  double ap_sum = 0.0;
  double bpref_sum = 0.0;
  std::size_t nonrel_above = 0;
  // precision at each rank where a relevant document was found
  std::vector<std::pair<double, double>> points;  // (recall, precision)
  std::vector<std::size_t> rel_upto(ranking.size() + 1, 0);

  for (std::size_t i = 0; i < ranking.size(); ++i) {
    const auto grade = qrels.grade(topic, ranking[i].docno);
    const bool rel = grade && *grade >= 1;
    rel_upto[i + 1] = rel_upto[i] + (rel ? 1 : 0);
    if (rel) {
      ++m.relevant_retrieved;
      const double precision =
          static_cast<double>(m.relevant_retrieved) / static_cast<double>(i + 1);
      ap_sum += precision;
      if (m.relevant > 0) {
        points.emplace_back(static_cast<double>(m.relevant_retrieved) /
                                static_cast<double>(m.relevant),
                            precision);
      }
      if (bpref_denom > 0.0) {
        bpref_sum += 1.0 - std::min(static_cast<double>(nonrel_above), bpref_denom) / bpref_denom;
      } else {
        bpref_sum += 1.0;
      }
    } else if (grade) {
      ++nonrel_above;
    }
  }

  if (m.relevant > 0) {
    const double r = static_cast<double>(m.relevant);
    m.average_precision = ap_sum / r;
    m.bpref = bpref_sum / r;
    m.recall = static_cast<double>(m.relevant_retrieved) / r;
  }
  for (int k : cutoffs) {
    if (k <= 0) throw Error("precision cutoff must be positive");
    const std::size_t upto = std::min<std::size_t>(static_cast<std::size_t>(k), ranking.size());
    m.precision_at[k] = static_cast<double>(rel_upto[upto]) / static_cast<double>(k);
  }
  if (m.retrieved > 0 && m.relevant_retrieved > 0) {
    const double p = static_cast<double>(m.relevant_retrieved) / static_cast<double>(m.retrieved);
    m.f1 = 2.0 * p * m.recall / (p + m.recall);
  }
  for (std::size_t level = 0; level <= 10; ++level) {
    double best = 0.0;
    for (const auto& [recall, precision] : points) {
      // Compared on the 0..10 grid so that 0.3 is not missed to rounding.
      if (recall * 10.0 + 1e-9 >= static_cast<double>(level)) best = std::max(best, precision);
    }
    m.interpolated[level] = best;
  }
  return m;
}

double mean_average_precision(std::span<const double> aps) {
  if (aps.empty()) return 0.0;
  double sum = 0.0;
  for (double ap : aps) sum += ap;
  return sum / static_cast<double>(aps.size());
}

double geometric_mean_average_precision(std::span<const double> aps) {
  if (aps.empty()) return 0.0;
  double sum = 0.0;
  for (double ap : aps) sum += std::log(std::max(ap, kGmFloor));
  return std::exp(sum / static_cast<double>(aps.size()));
}

EvalReport evaluate(const RankedRun& run, const QRels& qrels, std::vector<int> cutoffs,
                    bool missing_as_empty) {
  std::sort(cutoffs.begin(), cutoffs.end());
  cutoffs.erase(std::unique(cutoffs.begin(), cutoffs.end()), cutoffs.end());
  EvalReport report;
  report.cutoffs = cutoffs;

  std::map<int, std::span<const RunEntry>> rankings;
  for (const auto& [topic, entries] : run) rankings[topic] = entries;
  if (missing_as_empty) {
    for (int topic : qrels.topics()) rankings.try_emplace(topic);
  }

  std::vector<double> aps;
  for (const auto& [topic, ranking] : rankings) {
    if (qrels.relevant_count(topic) == 0) {
      report.excluded_topics.push_back(topic);
      continue;
    }
    auto m = evaluate_topic(topic, ranking, qrels, cutoffs);
    aps.push_back(m.average_precision);
    report.topics.push_back(std::move(m));
  }
  if (report.topics.empty()) return report;

  const double n = static_cast<double>(report.topics.size());
  report.map = mean_average_precision(aps);
  report.gm_map = geometric_mean_average_precision(aps);
  for (int k : cutoffs) report.mean_precision_at[k] = 0.0;
  for (const auto& m : report.topics) {
    for (const auto& [k, p] : m.precision_at) report.mean_precision_at[k] += p;
    report.mean_bpref += m.bpref;
    report.mean_recall += m.recall;
    report.mean_f1 += m.f1;
    report.total_relevant += m.relevant;
    report.total_relevant_retrieved += m.relevant_retrieved;
    for (std::size_t l = 0; l < 11; ++l) report.interpolated[l] += m.interpolated[l];
  }
  for (auto& [k, p] : report.mean_precision_at) p /= n;
  report.mean_bpref /= n;
  report.mean_recall /= n;
  report.mean_f1 /= n;
  for (auto& v : report.interpolated) v /= n;
  return report;
}

PrCurve interpolated_pr(const RankedRun& run, const QRels& qrels) {
  return evaluate(run, qrels, {}).interpolated;
}

std::string format_report(const EvalReport& report) {
  std::string out = "topic\tretrieved\trelevant\trel_ret\tAP";
  for (int k : report.cutoffs) out += "\tP@" + std::to_string(k);
  out += "\tbpref\trecall\tF1\n";
  for (const auto& m : report.topics) {
    out += std::to_string(m.topic);
    out += '\t' + std::to_string(m.retrieved);
    out += '\t' + std::to_string(m.relevant);
    out += '\t' + std::to_string(m.relevant_retrieved);
    out += '\t' + format_double(m.average_precision, 4);
    for (int k : report.cutoffs) out += '\t' + format_double(m.precision_at.at(k), 4);
    out += '\t' + format_double(m.bpref, 4);
    out += '\t' + format_double(m.recall, 4);
    out += '\t' + format_double(m.f1, 4);
    out += '\n';
  }
  std::size_t retrieved = 0;
  for (const auto& m : report.topics) retrieved += m.retrieved;
  out += "all\t" + std::to_string(retrieved);
  out += '\t' + std::to_string(report.total_relevant);
  out += '\t' + std::to_string(report.total_relevant_retrieved);
  out += '\t' + format_double(report.map, 4);
  for (int k : report.cutoffs) out += '\t' + format_double(report.mean_precision_at.at(k), 4);
  out += '\t' + format_double(report.mean_bpref, 4);
  out += '\t' + format_double(report.mean_recall, 4);
  out += '\t' + format_double(report.mean_f1, 4);
  out += '\n';
  out += "\nmeasure\tvalue\n";
  out += "topics\t" + std::to_string(report.topics.size()) + '\n';
  out += "MAP\t" + format_double(report.map, 4) + '\n';
  out += "GM_MAP\t" + format_double(report.gm_map, 4) + '\n';
  for (int k : report.cutoffs) {
    out += "P@" + std::to_string(k) + '\t' + format_double(report.mean_precision_at.at(k), 4) + '\n';
  }
  out += "bpref\t" + format_double(report.mean_bpref, 4) + '\n';
  out += "recall\t" + format_double(report.mean_recall, 4) + '\n';
  out += "F1\t" + format_double(report.mean_f1, 4) + '\n';
  out += "rel_ret\t" + std::to_string(report.total_relevant_retrieved) + '\n';
  for (int t : report.excluded_topics) out += "excluded\t" + std::to_string(t) + '\n';
  return out;
}

std::string format_curve(const PrCurve& curve) {
  std::string out;
  for (std::size_t l = 0; l < curve.size(); ++l) {
    out += format_double(static_cast<double>(l) / 10.0, 1);
    out += '\t';
    out += format_double(curve[l], 4);
    out += '\n';
  }
  return out;
}

}  // namespace wwqe
