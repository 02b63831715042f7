#include "wwqe/expansion.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "detail/parallel.hpp"
#include "wwqe/error.hpp"
#include "wwqe/text.hpp"
#include "wwqe/trec_io.hpp"

namespace wwqe {

std::string_view to_string(Source source) {
  return source == Source::wiki ? "wiki" : "wordnet";
}

void ExpansionParams::validate() const {
  if (m_final < 1) throw Error("m_final must be at least 1");
  if (m_final > 2 * n_intermediate) throw Error("m_final must not exceed 2 * n_intermediate");
  if (!std::isfinite(expansion_weight) || expansion_weight < 0) {
    throw Error("expansion_weight must be finite and non-negative");
  }
  if (!std::isfinite(phrase_boost) || phrase_boost < 0) {
    throw Error("phrase_boost must be finite and non-negative");
  }
}

std::vector<WeightedTerm> ExpandedQuery::weighted_query() const {
  std::vector<WeightedTerm> out;
  for (const auto& unit : original_units.individuals) out.push_back({unit.normalized, 1.0});
  for (const auto& t : terms) out.push_back({t.term, t.weight});
  return out;
}

std::vector<std::string> wiki_candidates(const GraphStore& graph, std::string_view unit) {
  std::vector<std::string> out;
  const auto article = graph.resolve_title(unit);
  if (!article) return out;
  const auto& outs = graph.out_links(*article);
  const auto& ins = graph.in_links(*article);
  std::vector<ArticleId> both;
  std::set_intersection(outs.begin(), outs.end(), ins.begin(), ins.end(),
                        std::back_inserter(both));
  for (ArticleId id : both) {
    if (id != *article) out.push_back(graph.article(id).title);
  }
  std::sort(out.begin(), out.end());
  return out;
}

double inlink_score(const GraphStore& graph, const LexicalStore& wn, std::string_view unit,
                    std::string_view candidate_title) {
  const auto candidate = graph.resolve_title(candidate_title);
  if (!candidate) {
    throw Error("inlink_score: candidate '" + std::string(candidate_title) + "' has no article");
  }
  std::set<std::string> terms = {text::normalize_term(unit)};
  for (auto& s : wn.synonyms(unit)) terms.insert(text::normalize_term(s));
  terms.erase(std::string());
  if (terms.empty()) return 0.0;
  const std::vector<std::string> term_list(terms.begin(), terms.end());
  const auto tf = graph.term_frequency(*candidate, term_list);
  const Article& a = graph.article(*candidate);
  return static_cast<double>(tf) * graph.idf(a.title).value;
}

std::vector<WordnetCandidate> wordnet_candidates(const LexicalStore& wn, const KeywordSet& keywords,
                                                 bool synonyms, bool hyponyms) {
  std::set<WordnetCandidate> out;
  const auto emit = [&](const std::string& unit) {
    if (synonyms) {
      for (auto& term : wn.two_level_terms(unit, Relation::synonym)) out.insert({unit, term});
    }
    if (hyponyms) {
      for (auto& term : wn.two_level_terms(unit, Relation::hyponym)) out.insert({unit, term});
    }
  };
  // Token positions covered by a phrase that WordNet knows.
  std::vector<bool> covered;
  for (const auto& phrase : keywords.phrases) {
    if (wn.lookup(phrase.normalized).empty()) continue;
    emit(phrase.normalized);
    if (covered.size() < phrase.end) covered.resize(phrase.end, false);
    for (std::size_t k = phrase.begin; k < phrase.end; ++k) covered[k] = true;
  }
  for (const auto& word : keywords.individuals) {
    if (word.begin < covered.size() && covered[word.begin]) continue;
    emit(word.normalized);
  }
  return {out.begin(), out.end()};
}

double wordnet_score(const GraphStore& graph, std::string_view candidate, std::string_view unit) {
  const auto article = graph.resolve_title(unit);
  if (!article) return 0.0;
  const auto tf = graph.term_frequency(*article, candidate);
  if (tf == 0) return 0.0;
  return static_cast<double>(tf) * graph.idf(candidate).value;
}

double article_term_weight(const GraphStore& graph, std::string_view term, ArticleId a_t,
                           std::span<const ArticleId> a_q) {
  if (std::find(a_q.begin(), a_q.end(), a_t) == a_q.end()) {
    throw Error("article_term_weight: a_t is not one of the query articles");
  }
  const auto tf = graph.term_frequency(a_t, term);
  if (tf == 0) return 0.0;
  std::size_t total = 0;
  for (ArticleId a : a_q) total += graph.term_frequency(a, term);
  return static_cast<double>(tf) * std::log(static_cast<double>(total) / static_cast<double>(tf));
}

QueryArticles resolve_query_articles(const GraphStore& graph, std::span<const std::string> units) {
  QueryArticles q;
  for (const auto& unit : units) {
    if (auto id = graph.resolve_title(unit)) {
      q.units.emplace_back(text::normalize_term(unit), *id);
      q.a_q.push_back(*id);
    }
  }
  std::sort(q.a_q.begin(), q.a_q.end());
  q.a_q.erase(std::unique(q.a_q.begin(), q.a_q.end()), q.a_q.end());
  return q;
}

namespace {

// Query-side factors w(t, a_t) are shared by every candidate.
struct CorrelationModel {
  std::vector<ArticleId> a_q;
  std::vector<std::pair<ArticleId, double>> unit_weights;  // (a_t, w(t, a_t))

  double score(const GraphStore& graph, std::string_view candidate) const {
    double sum = 0.0;
    for (const auto& [a_t, w_t] : unit_weights) {
      if (w_t == 0.0) continue;
      sum += w_t * article_term_weight(graph, candidate, a_t, a_q);
    }
    return sum / static_cast<double>(unit_weights.size());
  }
};

CorrelationModel make_model(const GraphStore& graph, const QueryArticles& q,
                            std::span<const ArticleId> a_q) {
  CorrelationModel model;
  model.a_q.assign(a_q.begin(), a_q.end());
  for (const auto& [unit, a_t] : q.units) {
    model.unit_weights.emplace_back(a_t, article_term_weight(graph, unit, a_t, model.a_q));
  }
  return model;
}

}  // namespace

double correlation_score(const GraphStore& graph, std::string_view candidate,
                         std::span<const std::string> query_units,
                         std::span<const ArticleId> a_q) {
  const auto q = resolve_query_articles(graph, query_units);
  if (q.units.empty()) throw Error("correlation undefined: no query term has an article");
  return make_model(graph, q, a_q).score(graph, candidate);
}

namespace {

struct Scored {
  std::string term;
  std::string origin;
  std::string title;  // article title, Wikipedia candidates only
  double score = 0.0;
};

bool by_score_then_term(const Scored& a, const Scored& b) {
  if (a.score != b.score) return a.score > b.score;
  if (a.term != b.term) return a.term < b.term;
  return a.origin < b.origin;
}

// Keeps the best-scoring origin per term, then the top n.
std::vector<Scored> select_top(std::vector<Scored> scored, std::size_t n) {
  std::sort(scored.begin(), scored.end(), by_score_then_term);
  std::vector<Scored> out;
  std::set<std::string> seen;
  for (auto& s : scored) {
    if (out.size() == n) break;
    if (!seen.insert(s.term).second) continue;
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

ExpandedQuery expand(const GraphStore& graph, const LexicalStore& wn, const KeywordSet& keywords,
                     const ExpansionParams& params) {
  params.validate();
  ExpandedQuery result;
  result.original_units = keywords;
  if (keywords.empty()) return result;

  std::set<std::string> original;
  for (const auto& unit : keywords.all_units) original.insert(unit.normalized);
  const auto boost = [&](const std::string& origin) {
    return origin.find(' ') != std::string::npos ? params.phrase_boost : 1.0;
  };

  std::vector<Scored> wiki;
  if (params.use_wikipedia) {
    std::vector<Scored> pending;
    for (const auto& unit : keywords.all_units) {
      for (auto& title : wiki_candidates(graph, unit.normalized)) {
        std::string term = text::normalize_term(title);
        if (term.empty() || original.contains(term)) continue;
        pending.push_back({std::move(term), unit.normalized, std::move(title), 0.0});
      }
    }
    detail::parallel_for(pending.size(), params.threads, [&](std::size_t i) {
      auto& p = pending[i];
      p.score = inlink_score(graph, wn, p.origin, p.title) * boost(p.origin);
    });
    wiki = select_top(std::move(pending), params.n_intermediate);
  }

  std::vector<Scored> wordnet;
  if (params.use_wordnet && (params.use_synonyms || params.use_hyponyms)) {
    std::vector<Scored> pending;
    for (auto& c : wordnet_candidates(wn, keywords, params.use_synonyms, params.use_hyponyms)) {
      std::string term = text::normalize_term(c.term);
      if (term.empty() || original.contains(term)) continue;
      pending.push_back({std::move(term), std::move(c.unit), {}, 0.0});
    }
    detail::parallel_for(pending.size(), params.threads, [&](std::size_t i) {
      auto& p = pending[i];
      p.score = wordnet_score(graph, p.term, p.origin) * boost(p.origin);
    });
    wordnet = select_top(std::move(pending), params.n_intermediate);
  }

  // Union of both intermediate lists; a term found by both keeps the higher
  // stage-1 score (Wikipedia on ties).
  std::map<std::string, ExpansionTerm> merged;
  for (const auto& s : wiki) {
    merged[s.term] = {s.term, Source::wiki, s.origin, s.score, 0.0, 0.0};
  }
  for (const auto& s : wordnet) {
    auto it = merged.find(s.term);
    if (it == merged.end() || s.score > it->second.stage1_score) {
      merged[s.term] = {s.term, Source::wordnet, s.origin, s.score, 0.0, 0.0};
    }
  }
  std::vector<ExpansionTerm> candidates;
  candidates.reserve(merged.size());
  for (auto& [term, t] : merged) candidates.push_back(std::move(t));

  std::vector<std::string> individuals;
  for (const auto& unit : keywords.individuals) individuals.push_back(unit.normalized);
  const auto q = resolve_query_articles(graph, individuals);
  result.correlation_defined = !q.units.empty();
  if (result.correlation_defined) {
    const auto model = make_model(graph, q, q.a_q);
    detail::parallel_for(candidates.size(), params.threads, [&](std::size_t i) {
      candidates[i].correlation = model.score(graph, candidates[i].term);
    });
  }

  std::sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
    if (a.correlation != b.correlation) return a.correlation > b.correlation;
    return a.term < b.term;
  });
  if (candidates.size() > params.m_final) candidates.resize(params.m_final);

  double max_corr = 0.0;
  for (const auto& t : candidates) max_corr = std::max(max_corr, t.correlation);
  for (auto& t : candidates) {
    t.weight = params.expansion_weight * (max_corr > 0.0 ? t.correlation / max_corr : 1.0);
  }
  result.terms = std::move(candidates);
  return result;
}

ExpandedQuery expand(const GraphStore& graph, const LexicalStore& wn, std::string_view raw_query,
                     const Tagger& tagger, const ExpansionParams& params) {
  return expand(graph, wn, prepare_query(raw_query, tagger), params);
}

std::string expansion_report_header() {
  return "topic\trank\tterm\tsource\torigin\tstage1_score\tcorrelation\tweight\n";
}

std::string format_expansion_report(int topic, const ExpandedQuery& query) {
  std::string out;
  for (std::size_t i = 0; i < query.terms.size(); ++i) {
    const auto& t = query.terms[i];
    out += std::to_string(topic);
    out += '\t' + std::to_string(i + 1);
    out += '\t' + t.term;
    out += '\t';
    out += to_string(t.source);
    out += '\t' + t.origin;
    out += '\t' + format_double(t.stage1_score);
    out += '\t' + format_double(t.correlation);
    out += '\t' + format_double(t.weight);
    out += '\n';
  }
  return out;
}

}  // namespace wwqe
