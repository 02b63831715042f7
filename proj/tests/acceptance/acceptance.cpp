// One PASS/FAIL line per acceptance criterion. Exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "cli.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "wwqe/evaluation.hpp"
#include "wwqe/expansion.hpp"
#include "wwqe/query_prep.hpp"
#include "wwqe/wiki_graph.hpp"
#include "wwqe/wordnet.hpp"

namespace {

namespace fs = std::filesystem;
using namespace wwqe;
using testing::data_path;
using testing::slurp;

// Collects the first mismatch of a check.
struct Check {
  std::string failure;

  void expect(bool ok, const std::string& what) {
    if (!ok && failure.empty()) failure = what;
  }
  void near_rel(double got, double want, const std::string& what) {
    const double tol = 1e-9 * std::max(1.0, std::abs(want));
    expect(std::abs(got - want) <= tol,
           what + ": got " + std::to_string(got) + " want " + std::to_string(want));
  }
};

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void report(const std::string& name, double limit_s, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (o.pass && secs >= limit_s) {
    o = {false, "took " + std::to_string(secs) + " s, limit " + std::to_string(limit_s) + " s"};
  }
  if (!o.pass) ++failures;
  std::printf("%s  %-28s %8.3f s  %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), secs,
              o.detail.c_str());
  std::fflush(stdout);
}

Outcome from(const Check& c, std::string ok_detail) {
  return c.failure.empty() ? Outcome{true, std::move(ok_detail)} : Outcome{false, c.failure};
}

int wwqe_cli(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  if (code != 0) throw std::runtime_error("wwqe " + args.front() + ": " + err.str());
  return code;
}

std::string p(const fs::path& path) { return path.string(); }

// --- criteria ------------------------------------------------------------------

Outcome graph_oracle() {
  // Links of graph12.xml read off the wikitext, redirect-resolved, dangling
  // targets dropped.
  const std::map<std::string, std::set<std::string>> links = {
      {"Bird", {"Wing", "Feather"}},
      {"Wing", {"Bird", "Feather"}},
      {"Feather", {"Bird", "Nest"}},
      {"Nest", {"Egg"}},
      {"Egg", {"Nest"}},
      {"Fish", {"Europe"}},
      {"Lonely", {}},
      {"Dangling", {}},
      {"United Kingdom", {"London", "Europe"}},
      {"London", {"United Kingdom"}},
      {"Europe", {"United Kingdom", "Fish"}},
  };
  std::map<std::string, std::set<std::string>> incoming;
  for (const auto& [from, tos] : links) {
    incoming[from];
    for (const auto& to : tos) incoming[to].insert(from);
  }
  const GraphStore g(parse_dump(slurp(data_path("graph12.xml"))));
  Check c;
  c.expect(g.n_articles() == links.size(), "article count");
  auto names = [&](const std::vector<ArticleId>& ids) {
    std::set<std::string> s;
    for (auto id : ids) s.insert(g.article(id).display_title);
    return s;
  };
  for (const auto& [title, outs] : links) {
    const auto id = g.resolve_title(title);
    c.expect(id.has_value(), "missing " + title);
    if (!id) continue;
    c.expect(names(g.out_links(*id)) == outs, "out_links(" + title + ")");
    c.expect(names(g.in_links(*id)) == incoming[title], "in_links(" + title + ")");
  }
  return from(c, "11 articles, in/out links exact");
}

Outcome score_oracles() {
  Check c;
  std::size_t checked = 0;
  const std::pair<const char*, const char*> worlds[] = {{"scores8.xml", "wordnet10"},
                                                        {"planted/wiki.xml", "planted/wordnet"}};
  for (const auto& [dump, wordnet] : worlds) {
    const GraphStore g(parse_dump(slurp(data_path(dump))));
    const auto wn = load_wordnet(data_path(wordnet));
    const oracle::Wiki w(g);
    std::vector<std::string> titles;
    for (std::uint32_t i = 0; i < g.n_articles(); ++i) titles.push_back(g.article(ArticleId{i}).title);
    std::vector<std::string> terms;
    for (std::uint32_t t = 0; t < g.vocabulary_size(); ++t) terms.push_back(g.term_text(t));
    for (const auto& [id, s] : wn.synsets()) {
      for (const auto& l : s.lemmas) terms.push_back(l);
    }
    for (const auto& unit : titles) {
      for (const auto& cand : titles) {
        c.near_rel(inlink_score(g, wn, unit, cand), oracle::inlink_score(w, wn, unit, cand),
                   "inlink " + unit + "/" + cand);
        ++checked;
      }
      for (const auto& term : terms) {
        c.near_rel(wordnet_score(g, term, unit), oracle::wordnet_score(w, term, unit),
                   "wordnet " + term + "/" + unit);
        ++checked;
      }
    }
    // Query = every pair of article titles (single-word ones).
    for (std::size_t i = 0; i < titles.size(); ++i) {
      for (std::size_t j = i + 1; j < titles.size(); ++j) {
        const std::vector<std::string> units = {titles[i], titles[j]};
        const auto q = resolve_query_articles(g, units);
        std::set<std::size_t> a_q;
        for (auto a : q.a_q) a_q.insert(a.value);
        for (const auto& term : terms) {
          for (auto a : q.a_q) {
            c.near_rel(article_term_weight(g, term, a, q.a_q),
                       oracle::article_term_weight(w, term, a.value, a_q), "atw " + term);
          }
          c.near_rel(correlation_score(g, term, units, q.a_q), oracle::correlation(w, term, units),
                     "correlation " + term);
          checked += 1 + q.a_q.size();
        }
      }
    }
  }
  return from(c, std::to_string(checked) + " values within 1e-9 relative");
}

Outcome preprocessing() {
  const auto k = prepare_query("Swine_NN flu_NN vaccine_NN", LexiconTagger());
  std::vector<std::string> units;
  for (const auto& u : k.all_units) units.push_back(u.text);
  const std::vector<std::string> want = {"Swine", "flu", "Swine flu",
                                         "vaccine", "flu vaccine", "Swine flu vaccine"};
  std::string got;
  for (const auto& u : units) got += "[" + u + "]";
  return {units == want, got};
}

Outcome wordnet_oracle() {
  const auto wn = load_wordnet(data_path("wordnet10"));
  Check c;
  c.expect(wn.size() == 10, "synset count " + std::to_string(wn.size()));
  std::size_t checked = 0;
  for (const auto& [id, s] : wn.synsets()) {
    for (const auto& lemma : s.lemmas) {
      for (auto rel : {Relation::synonym, Relation::hyponym}) {
        const auto got = wn.two_level_terms(lemma, rel);
        c.expect(std::set<std::string>(got.begin(), got.end()) == oracle::two_hop(wn, lemma, rel),
                 "two_level_terms(" + lemma + ")");
        ++checked;
      }
    }
  }
  return from(c, std::to_string(checked) + " lookups exact");
}

Outcome metric_oracle() {
  Check c;
  auto ranked = [](const std::vector<std::string>& docs) {
    std::vector<RunEntry> out;
    for (std::size_t i = 0; i < docs.size(); ++i) {
      out.push_back({docs[i], 1.0 / static_cast<double>(i + 1), static_cast<int>(i) + 1});
    }
    return out;
  };
  const std::vector<int> cutoffs = {5, 10, 20, 30};
  {
    QRels q;
    for (const char* d : {"a", "c", "e"}) q.add(1, d, 1);
    const double ap = evaluate_topic(1, ranked({"a", "b", "c", "d", "e"}), q, cutoffs).average_precision;
    c.expect(std::abs(ap - 0.75556) <= 1e-5 && std::abs(ap - 34.0 / 45.0) <= 1e-6, "AP");
  }
  {
    QRels q;
    q.add(1, "r1", 1);
    q.add(1, "r2", 1);
    q.add(1, "n1", 0);
    q.add(1, "n2", 0);
    c.expect(std::abs(evaluate_topic(1, ranked({"r1", "n1", "r2"}), q, cutoffs).bpref - 0.75) <= 1e-6,
             "bpref");
  }
  const std::vector<double> aps = {0.1, 0.4};
  c.expect(std::abs(geometric_mean_average_precision(aps) - 0.2) <= 1e-6, "GM_MAP");
  c.expect(std::abs(mean_average_precision(aps) - 0.25) <= 1e-6, "MAP");

  std::mt19937 rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    oracle::Judged j;
    QRels q;
    const std::size_t pool = 1 + rng() % 60;
    for (std::size_t d = 0; d < pool; ++d) {
      const auto roll = rng() % 4;
      if (roll == 3) continue;
      const int grade = roll == 0 ? 1 : 0;
      j.judgments["d" + std::to_string(d)] = grade;
      q.add(1, "d" + std::to_string(d), grade);
    }
    if (oracle::R(j) == 0) {
      j.judgments["d0"] = 1;
      q = QRels();
      for (const auto& [d, g] : j.judgments) q.add(1, d, g);
    }
    std::vector<std::string> docs;
    for (std::size_t d = 0; d < pool; ++d) docs.push_back("d" + std::to_string(d));
    std::shuffle(docs.begin(), docs.end(), rng);
    docs.resize(std::min<std::size_t>(docs.size(), rng() % 51));
    j.ranking = docs;
    const auto m = evaluate_topic(1, ranked(docs), q, cutoffs);
    const std::string t = "trial " + std::to_string(trial);
    c.expect(std::abs(m.average_precision - oracle::average_precision(j)) <= 1e-12, t + " AP");
    c.expect(std::abs(m.bpref - oracle::bpref(j)) <= 1e-12, t + " bpref");
    c.expect(std::abs(m.f1 - oracle::f1(j)) <= 1e-12, t + " F1");
    c.expect(std::abs(m.recall - oracle::recall_at(j, docs.size())) <= 1e-12, t + " recall");
    for (int k : cutoffs) {
      c.expect(std::abs(m.precision_at.at(k) - oracle::precision_at(j, static_cast<std::size_t>(k))) <=
                   1e-12,
               t + " P@k");
    }
    for (int l = 0; l <= 10; ++l) {
      c.expect(std::abs(m.interpolated[static_cast<std::size_t>(l)] - oracle::interpolated(j, l)) <=
                   1e-12,
               t + " interpolated");
    }
  }
  return from(c, "hand values and 200 random runs agree");
}

// Builds stores, index, expansions and runs for the planted collection.
void run_pipeline(const fs::path& dir) {
  wwqe_cli({"ingest-wiki", "--dump", p(data_path("planted/wiki.xml")), "--out", p(dir / "wiki")});
  wwqe_cli({"ingest-wordnet", "--wordnet", p(data_path("planted/wordnet")), "--out",
            p(dir / "wordnet")});
  wwqe_cli({"index", "--corpus", p(data_path("planted/corpus.trec")), "--out", p(dir / "index")});
  wwqe_cli({"expand", "--store", p(dir / "wiki"), "--wordnet", p(dir / "wordnet"), "--topics",
            p(data_path("planted/topics.txt")), "--out", p(dir / "expand")});
  for (const char* model : {"bm25", "tfidf"}) {
    for (const char* q : {"queries", "baseline"}) {
      const fs::path out = dir / (std::string(q) + "-" + model);
      wwqe_cli({"search", "--index", p(dir / "index"), "--queries",
                p(dir / "expand" / (std::string(q) + ".tsv")), "--model", model, "--k", "10",
                "--out", p(out)});
      wwqe_cli({"eval", "--run", p(out / ("run." + std::string(model) + ".txt")), "--qrels",
                p(data_path("planted/qrels.txt")), "--out", p(out)});
    }
  }
}

Outcome end_to_end() {
  testing::TempDir a;
  testing::TempDir b;
  run_pipeline(a.path());
  run_pipeline(b.path());
  const auto qrels = parse_qrels(slurp(data_path("planted/qrels.txt")));
  Check c;
  std::string detail;
  for (const char* model : {"bm25", "tfidf"}) {
    const std::string run_name = "run." + std::string(model) + ".txt";
    const auto base = evaluate(parse_run(slurp(a / ("baseline-" + std::string(model)) / run_name)),
                               qrels, {10}, true);
    const auto expd = evaluate(parse_run(slurp(a / ("queries-" + std::string(model)) / run_name)),
                               qrels, {10}, true);
    c.expect(base.topics.size() == 3 && expd.topics.size() == 3, "topic count");
    for (std::size_t i = 0; i < std::min(base.topics.size(), expd.topics.size()); ++i) {
      const auto& bt = base.topics[i];
      const auto& et = expd.topics[i];
      c.expect(et.recall > bt.recall, std::string(model) + " topic " + std::to_string(bt.topic) +
                                          " recall@10 " + std::to_string(et.recall) +
                                          " <= " + std::to_string(bt.recall));
      detail += std::string(model) + ":" + std::to_string(bt.topic) + " " +
                format_double(bt.recall, 2) + "->" + format_double(et.recall, 2) + " ";
    }
    c.expect(slurp(a / ("queries-" + std::string(model)) / run_name) ==
                 slurp(b / ("queries-" + std::string(model)) / run_name),
             "second run differs");
  }
  return from(c, "recall@10 " + detail);
}

std::map<int, std::vector<std::string>> selected_terms(const std::string& report) {
  std::map<int, std::vector<std::string>> out;
  std::istringstream in(report);
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::string topic, rank, term;
    std::getline(fields, topic, '\t');
    std::getline(fields, rank, '\t');
    std::getline(fields, term, '\t');
    out[std::stoi(topic)].push_back(term);
  }
  return out;
}

Outcome sweep_harness() {
  testing::TempDir tmp;
  wwqe_cli({"ingest-wiki", "--dump", p(data_path("planted/wiki.xml")), "--out", p(tmp / "wiki")});
  wwqe_cli({"ingest-wordnet", "--wordnet", p(data_path("planted/wordnet")), "--out",
            p(tmp / "wordnet")});
  wwqe_cli({"index", "--corpus", p(data_path("planted/corpus.trec")), "--out", p(tmp / "index")});
  wwqe_cli({"sweep", "--store", p(tmp / "wiki"), "--wordnet", p(tmp / "wordnet"), "--index",
            p(tmp / "index"), "--topics", p(data_path("planted/topics.txt")), "--qrels",
            p(data_path("planted/qrels.txt")), "--out", p(tmp / "sweep")});
  Check c;
  std::istringstream table(slurp(tmp / "sweep" / "sweep.tsv"));
  std::vector<std::string> rows;
  for (std::string line; std::getline(table, line);) rows.push_back(line);
  c.expect(rows.size() == 7, "expected header + 6 rows, got " + std::to_string(rows.size()));
  c.expect(!rows.empty() && rows[0] == "m\tbm25\ttfidf", "header");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    c.expect(rows[i].starts_with(std::to_string(10 * i) + "\t"), "row " + rows[i]);
    c.expect(std::count(rows[i].begin(), rows[i].end(), '\t') == 2, "columns in " + rows[i]);
  }
  std::map<int, std::vector<std::string>> previous;
  for (int m = 10; m <= 60; m += 10) {
    const auto current = selected_terms(
        slurp(tmp / "sweep" / "expansions" / ("expansion.m" + std::to_string(m) + ".tsv")));
    for (const auto& [topic, terms] : previous) {
      const auto it = current.find(topic);
      const auto& now = it == current.end() ? std::vector<std::string>{} : it->second;
      c.expect(now.size() >= terms.size() && std::equal(terms.begin(), terms.end(), now.begin()),
               "prefix broken at m=" + std::to_string(m));
    }
    previous = current;
  }
  return from(c, "6 rows, prefix property holds");
}

Outcome determinism() {
  testing::TempDir a;
  testing::TempDir b;
  run_pipeline(a.path());
  run_pipeline(b.path());
  Check c;
  std::size_t files = 0;
  for (const auto& entry : fs::recursive_directory_iterator(a.path())) {
    if (!entry.is_regular_file()) continue;
    const auto rel = fs::relative(entry.path(), a.path());
    c.expect(fs::exists(b / rel.string()), "missing " + rel.string());
    c.expect(slurp(entry.path()) == slurp(b / rel.string()), "differs: " + rel.string());
    ++files;
  }
  return from(c, std::to_string(files) + " files bit-identical");
}

// Synthetic dump of about target_bytes: prose, links, templates, redirects.
void write_synthetic_dump(const fs::path& path, std::size_t target_bytes) {
  std::ofstream out(path, std::ios::binary);
  std::mt19937 rng(42);
  std::vector<std::string> vocab;
  for (int i = 0; i < 20000; ++i) {
    std::string w;
    int len = 3 + static_cast<int>(rng() % 8);
    for (int k = 0; k < len; ++k) w += static_cast<char>('a' + rng() % 26);
    vocab.push_back(w);
  }
  out << "<mediawiki xmlns=\"http://www.mediawiki.org/xml/export-0.10/\">\n";
  std::size_t written = 0;
  std::size_t page = 0;
  std::string text;
  while (written < target_bytes) {
    const std::string title = "Article " + std::to_string(page);
    text.clear();
    if (page % 20 == 19) {
      text = "#REDIRECT [[Article " + std::to_string(rng() % (page + 1)) + "]]";
    } else {
      text = "{{Infobox thing|name=" + title + "}}\n'''" + title + "''' is ";
      const int words = 600 + static_cast<int>(rng() % 400);
      for (int i = 0; i < words; ++i) {
        if (i % 25 == 24) {
          text += "[[Article " + std::to_string(rng() % (page + 2000)) + "|" +
                  vocab[rng() % vocab.size()] + "]] ";
        } else {
          text += vocab[rng() % vocab.size()];
          text += i % 15 == 14 ? ". " : " ";
        }
      }
      text += "\n[[Category:Synthetic]]\n";
    }
    std::string xml = "<page>\n<title>" + title + "</title>\n<ns>0</ns>\n<id>" +
                      std::to_string(page + 1) + "</id>\n<revision>\n<text xml:space=\"preserve\">" +
                      text + "</text>\n</revision>\n</page>\n";
    out << xml;
    written += xml.size();
    ++page;
  }
  out << "</mediawiki>\n";
}

Outcome ingestion_throughput(const fs::path& dump) {
  std::ifstream in(dump, std::ios::binary);
  const GraphStore g = ingest_dump(in);
  return {g.n_articles() > 0, std::to_string(fs::file_size(dump) >> 20) + " MiB, " +
                                  std::to_string(g.n_articles()) + " articles"};
}

}  // namespace

int main() {
  report("graph-oracle", 1.0, graph_oracle);
  report("score-oracles", 1.0, score_oracles);
  report("preprocessing-exactness", 1.0, preprocessing);
  report("wordnet-two-level-oracle", 1.0, wordnet_oracle);
  report("metric-oracle", 5.0, metric_oracle);
  report("end-to-end-improvement", 5.0, end_to_end);
  report("sweep-harness", 30.0, sweep_harness);
  report("determinism", 30.0, determinism);
  {
    testing::TempDir tmp;
    write_synthetic_dump(tmp / "slice.xml", std::size_t{100} << 20);
    report("ingestion-throughput-100mb", 300.0,
           [&] { return ingestion_throughput(tmp / "slice.xml"); });
  }
  return failures == 0 ? 0 : 1;
}
