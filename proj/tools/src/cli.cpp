#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>

#include "output_dir.hpp"
#include "wwqe/error.hpp"
#include "wwqe/evaluation.hpp"
#include "wwqe/expansion.hpp"
#include "wwqe/query_prep.hpp"
#include "wwqe/retrieval.hpp"
#include "wwqe/store_io.hpp"
#include "wwqe/text.hpp"
#include "wwqe/trec_io.hpp"
#include "wwqe/wiki_graph.hpp"
#include "wwqe/wordnet.hpp"

namespace wwqe::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char* kStoreRootEnv = "WWQE_STORE_ROOT";

struct Options {
  std::string dump, wordnet, corpus, topics, qrels, store, index, run, queries, lexicon,
      stopwords, out;
  std::string model = "bm25";
  std::vector<std::string> models = {"bm25", "tfidf"};
  std::size_t m = 30;
  std::size_t n = 100;
  std::vector<std::size_t> ms = {10, 20, 30, 40, 50, 60};
  std::string relations = "synonym,hyponym";
  std::string sources = "wiki,wordnet";
  double expansion_weight = 0.5;
  double phrase_boost = 1.0;
  std::size_t k = 1000;
  std::vector<int> cutoffs = {5, 10, 20, 30};
  bool no_stem = false;
  unsigned threads = 0;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

// Fills an unset path from $WWQE_STORE_ROOT/<leaf>.
void default_from_root(std::string& value, std::string_view leaf) {
  if (!value.empty()) return;
  if (const char* root = std::getenv(kStoreRootEnv); root != nullptr && *root != '\0') {
    value = (fs::path(root) / leaf).string();
  }
}

const std::string& require(const std::string& value, std::string_view flag) {
  if (value.empty()) throw UsageError("missing required option --" + std::string(flag));
  return value;
}

const std::string& require_input(const std::string& value, std::string_view flag) {
  require(value, flag);
  if (!fs::exists(value)) {
    throw UsageError("--" + std::string(flag) + ": " + value + " does not exist");
  }
  return value;
}

std::set<std::string> parse_list(std::string_view csv, const std::set<std::string>& allowed,
                                 std::string_view flag) {
  std::set<std::string> out;
  for (auto item : store::split(csv, ',')) {
    std::string s = text::fold_case(item);
    if (s.empty() || s == "none") continue;
    if (!allowed.contains(s)) {
      throw UsageError("--" + std::string(flag) + ": unknown value '" + s + "'");
    }
    out.insert(std::move(s));
  }
  return out;
}

ExpansionParams expansion_params(const Options& o) {
  ExpansionParams p;
  p.m_final = o.m;
  p.n_intermediate = o.n;
  const auto rel = parse_list(o.relations, {"synonym", "hyponym"}, "relations");
  p.use_synonyms = rel.contains("synonym");
  p.use_hyponyms = rel.contains("hyponym");
  const auto src = parse_list(o.sources, {"wiki", "wordnet"}, "sources");
  p.use_wikipedia = src.contains("wiki");
  p.use_wordnet = src.contains("wordnet");
  p.expansion_weight = o.expansion_weight;
  p.phrase_boost = o.phrase_boost;
  p.threads = o.threads;
  try {
    p.validate();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  return p;
}

LexiconTagger make_tagger(const Options& o) {
  if (o.lexicon.empty()) return LexiconTagger();
  require_input(o.lexicon, "lexicon");
  return LexiconTagger::from_file(o.lexicon);
}

std::vector<std::string> load_stopwords(const Options& o) {
  if (o.stopwords.empty()) return default_stopwords();
  if (o.stopwords == "none") return {};
  require_input(o.stopwords, "stopwords");
  std::vector<std::string> words;
  for (auto line : store::lines(store::read_file(o.stopwords))) {
    auto w = text::normalize_term(line);
    if (!w.empty() && line.front() != '#') words.push_back(std::move(w));
  }
  return words;
}

std::vector<Topic> load_topics(const Options& o) {
  return parse_topics(store::read_file(require_input(o.topics, "topics")));
}

// Unexpanded query: the individual content words at weight 1.
WeightedQueries baseline_queries(const std::vector<Topic>& topics, const Tagger& tagger) {
  WeightedQueries out;
  for (const auto& t : topics) {
    auto& q = out[t.id];
    for (const auto& unit : prepare_query(t.title, tagger).individuals) {
      q.push_back({unit.normalized, 1.0});
    }
  }
  return out;
}

struct Expansions {
  WeightedQueries queries;
  std::string report;
};

Expansions expand_topics(const GraphStore& graph, const LexicalStore& wn, const Tagger& tagger,
                         const std::vector<Topic>& topics, const ExpansionParams& params) {
  Expansions out;
  out.report = expansion_report_header();
  for (const auto& t : topics) {
    const auto expanded = expand(graph, wn, t.title, tagger, params);
    out.queries[t.id] = expanded.weighted_query();
    out.report += format_expansion_report(t.id, expanded);
  }
  return out;
}

std::string run_tag(Model model) { return "wwqe-" + std::string(to_string(model)); }

// --- subcommands -------------------------------------------------------------

void cmd_ingest_wiki(Options o, std::ostream& out) {
  default_from_root(o.out, "wiki");
  require_input(o.dump, "dump");
  OutputDir dir(require(o.out, "out"));
  std::ifstream in(o.dump, std::ios::binary);
  if (!in) throw Error("cannot open " + o.dump);
  const GraphStore graph = ingest_dump(in, o.threads);
  save_graph_store(graph, dir.path());
  dir.commit();
  const auto& s = graph.stats();
  out << "articles\t" << graph.n_articles() << "\nredirects\t" << s.redirects << "\nlinks\t"
      << s.links << "\ndangling_links\t" << s.dangling_links << "\nskipped_namespace\t"
      << s.skipped_namespace << "\nvocabulary\t" << graph.vocabulary_size() << '\n';
}

void cmd_ingest_wordnet(Options o, std::ostream& out) {
  default_from_root(o.out, "wordnet");
  require_input(o.wordnet, "wordnet");
  OutputDir dir(require(o.out, "out"));
  const LexicalStore wn = load_wordnet(o.wordnet);
  save_lexical_store(wn, dir.path());
  dir.commit();
  out << "synsets\t" << wn.size() << '\n';
}

void cmd_expand(Options o, std::ostream& out) {
  default_from_root(o.store, "wiki");
  default_from_root(o.wordnet, "wordnet");
  const auto params = expansion_params(o);
  const auto topics = load_topics(o);
  const auto tagger = make_tagger(o);
  const GraphStore graph = load_graph_store(require_input(o.store, "store"), o.threads);
  const LexicalStore wn = open_lexical_store(require_input(o.wordnet, "wordnet"));
  OutputDir dir(require(o.out, "out"));
  const auto ex = expand_topics(graph, wn, tagger, topics, params);
  dir.write("expansion.tsv", ex.report);
  dir.write("queries.tsv", format_weighted_queries(ex.queries));
  dir.write("baseline.tsv", format_weighted_queries(baseline_queries(topics, tagger)));
  dir.commit();
  out << ex.report;
}

void cmd_index(Options o, std::ostream& out) {
  default_from_root(o.out, "index");
  require_input(o.corpus, "corpus");
  const auto stopwords = load_stopwords(o);
  OutputDir dir(require(o.out, "out"));
  const auto index = build_index(store::read_file(o.corpus), stopwords, !o.no_stem);
  save_index(index, dir.path());
  dir.commit();
  out << "documents\t" << index.n_docs() << "\nvocabulary\t" << index.vocabulary_size()
      << "\navg_doc_length\t" << format_double(index.avg_doc_length(), 4) << '\n';
}

void cmd_search(Options o, std::ostream& out) {
  default_from_root(o.index, "index");
  const Model model = parse_model(o.model);
  if (o.k == 0) throw UsageError("--k must be at least 1");
  WeightedQueries queries;
  if (!o.queries.empty()) {
    queries = parse_weighted_queries(store::read_file(require_input(o.queries, "queries")));
  } else if (!o.topics.empty()) {
    queries = baseline_queries(load_topics(o), make_tagger(o));
  } else {
    throw UsageError("search needs --queries or --topics");
  }
  const auto index = load_index(require_input(o.index, "index"));
  OutputDir dir(require(o.out, "out"));
  const auto run = search_all(index, queries, model, o.k, o.threads);
  const std::string name = "run." + std::string(to_string(model)) + ".txt";
  dir.write(name, format_run(run, run_tag(model)));
  dir.commit();
  std::size_t lines = 0;
  for (const auto& [_, entries] : run) lines += entries.size();
  out << "topics\t" << run.size() << "\nlines\t" << lines << "\nrun\t"
      << dir.file(name).string() << '\n';
}

void cmd_eval(Options o, std::ostream& out) {
  const auto run = parse_run(store::read_file(require_input(o.run, "run")));
  const auto qrels = parse_qrels(store::read_file(require_input(o.qrels, "qrels")));
  const auto report = evaluate(run, qrels, o.cutoffs);
  const std::string table = format_report(report);
  const std::string curve = format_curve(report.interpolated);
  if (!o.out.empty()) {
    OutputDir dir(o.out);
    dir.write("report.tsv", table);
    dir.write("curve.tsv", curve);
    dir.commit();
  }
  out << table << "\nrecall\tprecision\n" << curve;
}

void cmd_sweep(Options o, std::ostream& out) {
  default_from_root(o.store, "wiki");
  default_from_root(o.wordnet, "wordnet");
  default_from_root(o.index, "index");
  if (o.ms.empty()) throw UsageError("--ms needs at least one value");
  std::vector<Model> models;
  for (const auto& name : o.models) models.push_back(parse_model(name));
  if (models.empty()) throw UsageError("--models needs at least one model");
  auto params = expansion_params(o);
  for (std::size_t m : o.ms) {
    params.m_final = m;
    try {
      params.validate();
    } catch (const Error& e) {
      throw UsageError("--ms " + std::to_string(m) + ": " + e.what());
    }
  }
  const auto topics = load_topics(o);
  const auto qrels = parse_qrels(store::read_file(require_input(o.qrels, "qrels")));
  const auto tagger = make_tagger(o);
  const GraphStore graph = load_graph_store(require_input(o.store, "store"), o.threads);
  const LexicalStore wn = open_lexical_store(require_input(o.wordnet, "wordnet"));
  const auto index = load_index(require_input(o.index, "index"));
  OutputDir dir(require(o.out, "out"));

  std::string header = "m";
  for (Model model : models) header += "\t" + std::string(to_string(model));
  header += '\n';

  std::string baseline = "run";
  for (Model model : models) baseline += "\t" + std::string(to_string(model));
  baseline += "\nbaseline";
  const auto base_queries = baseline_queries(topics, tagger);
  for (Model model : models) {
    const auto run = search_all(index, base_queries, model, o.k, o.threads);
    dir.write("runs/baseline." + std::string(to_string(model)) + ".txt",
              format_run(run, run_tag(model)));
    baseline += '\t' + format_double(evaluate(run, qrels, o.cutoffs, true).map, 4);
  }
  baseline += '\n';

  std::string table = header;
  for (std::size_t m : o.ms) {
    params.m_final = m;
    const auto ex = expand_topics(graph, wn, tagger, topics, params);
    const std::string suffix = "m" + std::to_string(m);
    dir.write("expansions/expansion." + suffix + ".tsv", ex.report);
    table += std::to_string(m);
    for (Model model : models) {
      const auto run = search_all(index, ex.queries, model, o.k, o.threads);
      dir.write("runs/run." + suffix + "." + std::string(to_string(model)) + ".txt",
                format_run(run, run_tag(model)));
      table += '\t' + format_double(evaluate(run, qrels, o.cutoffs, true).map, 4);
    }
    table += '\n';
  }
  dir.write("sweep.tsv", table);
  dir.write("baseline.tsv", baseline);
  dir.commit();
  out << table;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Wikipedia and WordNet query expansion with a TREC-style retrieval harness"};
  app.name("wwqe");
  app.require_subcommand(1);
  app.set_config("--config", "", "INI file; keys under [subcommand] sections set its flags");

  const auto threads = [&](CLI::App* c) {
    c->add_option("--threads", o.threads, "Worker threads (0 = hardware concurrency)");
  };
  const auto expansion = [&](CLI::App* c) {
    c->add_option("--store", o.store, "Wikipedia store directory (from ingest-wiki)");
    c->add_option("--wordnet", o.wordnet, "WordNet store or database directory");
    c->add_option("--topics", o.topics, "TREC topic file");
    c->add_option("--lexicon", o.lexicon, "Extra tagger lexicon, one 'word TAG' per line");
    c->add_option("--n", o.n, "Candidates kept per source after stage-1 scoring")
        ->capture_default_str();
    c->add_option("--relations", o.relations, "WordNet relations: synonym,hyponym or none")
        ->capture_default_str();
    c->add_option("--sources", o.sources, "Expansion sources: wiki,wordnet")
        ->capture_default_str();
    c->add_option("--expansion-weight", o.expansion_weight,
                  "Weight of the strongest expansion term relative to original terms")
        ->capture_default_str();
    c->add_option("--phrase-boost", o.phrase_boost,
                  "Stage-1 score multiplier for candidates found from phrases")
        ->capture_default_str();
    threads(c);
  };

  auto* ingest_wiki = app.add_subcommand("ingest-wiki", "Build a Wikipedia store from an XML dump");
  ingest_wiki->add_option("--dump", o.dump, "pages-articles XML dump");
  ingest_wiki->add_option("--out", o.out, "Store directory to write");
  threads(ingest_wiki);

  auto* ingest_wordnet =
      app.add_subcommand("ingest-wordnet", "Build a lexical store from a WordNet database");
  ingest_wordnet->add_option("--wordnet", o.wordnet, "WordNet database directory (index.*, data.*)");
  ingest_wordnet->add_option("--out", o.out, "Store directory to write");

  auto* expand_cmd = app.add_subcommand("expand", "Expand every topic and write weighted queries");
  expansion(expand_cmd);
  expand_cmd->add_option("--m", o.m, "Final expansion terms per query")->capture_default_str();
  expand_cmd->add_option("--out", o.out, "Output directory");

  auto* index_cmd = app.add_subcommand("index", "Index a TREC corpus");
  index_cmd->add_option("--corpus", o.corpus, "TREC DOC/DOCNO/TEXT file");
  index_cmd->add_option("--stopwords", o.stopwords,
                        "Stopword file, one per line ('none' disables; default built-in list)");
  index_cmd->add_flag("--no-stem", o.no_stem, "Index surface forms without Porter stemming");
  index_cmd->add_option("--out", o.out, "Index directory to write");

  auto* search_cmd = app.add_subcommand("search", "Rank documents for weighted queries or topics");
  search_cmd->add_option("--index", o.index, "Index directory");
  search_cmd->add_option("--queries", o.queries, "Weighted query file (from expand)");
  search_cmd->add_option("--topics", o.topics, "TREC topics, searched unexpanded");
  search_cmd->add_option("--lexicon", o.lexicon, "Extra tagger lexicon for --topics");
  search_cmd->add_option("--model", o.model, "bm25 or tfidf")->capture_default_str();
  search_cmd->add_option("--k", o.k, "Documents retrieved per topic")->capture_default_str();
  search_cmd->add_option("--out", o.out, "Output directory");
  threads(search_cmd);

  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a run against relevance judgments");
  eval_cmd->add_option("--run", o.run, "Six-column TREC run file");
  eval_cmd->add_option("--qrels", o.qrels, "Four-column qrels file");
  eval_cmd->add_option("--cutoffs", o.cutoffs, "Precision cutoffs")->capture_default_str();
  eval_cmd->add_option("--out", o.out, "Optional directory for report.tsv and curve.tsv");

  auto* sweep_cmd = app.add_subcommand("sweep", "MAP for a range of expansion-term counts");
  expansion(sweep_cmd);
  sweep_cmd->add_option("--index", o.index, "Index directory");
  sweep_cmd->add_option("--qrels", o.qrels, "Four-column qrels file");
  sweep_cmd->add_option("--models", o.models, "Retrieval models")->capture_default_str();
  sweep_cmd->add_option("--ms", o.ms, "Expansion-term counts")->capture_default_str();
  sweep_cmd->add_option("--k", o.k, "Documents retrieved per topic")->capture_default_str();
  sweep_cmd->add_option("--out", o.out, "Output directory");

  // --config belongs to the top-level app; accept it after the subcommand too.
  std::vector<std::string> ordered;
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      ordered.push_back(args[i]);
      ordered.push_back(args[++i]);
    } else if (args[i].starts_with("--config=")) {
      ordered.push_back(args[i]);
    } else {
      rest.push_back(args[i]);
    }
  }
  ordered.insert(ordered.end(), rest.begin(), rest.end());
  std::vector<std::string> reversed(ordered.rbegin(), ordered.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*ingest_wiki) cmd_ingest_wiki(o, out);
    else if (*ingest_wordnet) cmd_ingest_wordnet(o, out);
    else if (*expand_cmd) cmd_expand(o, out);
    else if (*index_cmd) cmd_index(o, out);
    else if (*search_cmd) cmd_search(o, out);
    else if (*eval_cmd) cmd_eval(o, out);
    else if (*sweep_cmd) cmd_sweep(o, out);
  } catch (const UsageError& e) {
    err << "wwqe: " << e.what() << "\nRun 'wwqe --help' for usage.\n";
    return 2;
  } catch (const std::exception& e) {
    err << "wwqe: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace wwqe::cli
