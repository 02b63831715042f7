#include <benchmark/benchmark.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "wwqe/evaluation.hpp"
#include "wwqe/expansion.hpp"
#include "wwqe/query_prep.hpp"
#include "wwqe/retrieval.hpp"
#include "wwqe/trec_io.hpp"
#include "wwqe/wiki_graph.hpp"
#include "wwqe/wordnet.hpp"

namespace fs = std::filesystem;

namespace {

fs::path data(const char* rel) { return fs::path(WWQE_BENCH_DATA_DIR) / rel; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Dump of `pages` articles with roughly 40 links each.
std::string synthetic_dump(std::size_t pages) {
  std::mt19937 rng(7);
  std::string xml = "<mediawiki>\n";
  for (std::size_t p = 0; p < pages; ++p) {
    xml += "<page><title>Page " + std::to_string(p) + "</title><ns>0</ns><id>" +
           std::to_string(p + 1) + "</id><revision><text>";
    for (int i = 0; i < 1000; ++i) {
      if (i % 25 == 0) {
        xml += "[[Page " + std::to_string(rng() % pages) + "]] ";
      } else {
        xml += "word" + std::to_string(rng() % 500) + " ";
      }
    }
    xml += "</text></revision></page>\n";
  }
  return xml + "</mediawiki>\n";
}

void BM_IngestDump(benchmark::State& state) {
  const auto xml = synthetic_dump(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    std::istringstream in(xml);
    benchmark::DoNotOptimize(wwqe::ingest_dump(in, 1));
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * xml.size()));
}
BENCHMARK(BM_IngestDump)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_BuildIndex(benchmark::State& state) {
  const auto corpus = slurp(data("planted/corpus.trec"));
  for (auto _ : state) {
    benchmark::DoNotOptimize(wwqe::build_index(corpus, wwqe::default_stopwords(), true));
  }
}
BENCHMARK(BM_BuildIndex);

void BM_Search(benchmark::State& state) {
  const auto index =
      wwqe::build_index(slurp(data("planted/corpus.trec")), wwqe::default_stopwords(), true);
  const std::vector<wwqe::WeightedTerm> q = {{"bird", 1.0}, {"nest", 1.0}, {"ship", 0.5}};
  const auto model = static_cast<wwqe::Model>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(wwqe::search(index, q, model));
}
BENCHMARK(BM_Search)
    ->Arg(static_cast<int>(wwqe::Model::bm25))
    ->Arg(static_cast<int>(wwqe::Model::tfidf));

void BM_Expand(benchmark::State& state) {
  std::istringstream dump(slurp(data("scores8.xml")));
  const auto graph = wwqe::ingest_dump(dump, 1);
  const auto wn = wwqe::load_wordnet(data("wordnet10"));
  const wwqe::LexiconTagger tagger;
  wwqe::ExpansionParams params;
  params.m_final = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        wwqe::expand(graph, wn, "Swine_NN flu_NN vaccine_NN", tagger, params));
  }
}
BENCHMARK(BM_Expand)->Arg(4)->Arg(30);

void BM_Evaluate(benchmark::State& state) {
  const auto run = wwqe::parse_run(slurp(data("oracle_run.txt")));
  const auto qrels = wwqe::parse_qrels(slurp(data("oracle_qrels.txt")));
  for (auto _ : state) benchmark::DoNotOptimize(wwqe::evaluate(run, qrels));
}
BENCHMARK(BM_Evaluate);

}  // namespace

BENCHMARK_MAIN();
