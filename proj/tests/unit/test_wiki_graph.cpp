#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "wwqe/error.hpp"
#include "wwqe/wiki_graph.hpp"

namespace wwqe {
namespace {

using testing::data_path;
using testing::make_dump;
using testing::slurp;

GraphStore load_fixture(std::string_view name) {
  return GraphStore(parse_dump(slurp(data_path(name))));
}

ArticleId id_of(const GraphStore& g, std::string_view title) {
  auto id = g.resolve_title(title);
  if (!id) throw std::runtime_error("no article " + std::string(title));
  return *id;
}

std::set<std::string> titles(const GraphStore& g, const std::vector<ArticleId>& ids) {
  std::set<std::string> out;
  for (auto id : ids) out.insert(g.article(id).display_title);
  return out;
}

// Links of graph12.xml, enumerated by reading the wikitext, after redirect
// resolution and with dangling targets removed.
const std::map<std::string, std::set<std::string>> kGraph12Links = {
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

TEST(IngestDump, CountsContentArticlesOnly) {
  const auto g = load_fixture("graph12.xml");
  EXPECT_EQ(g.n_articles(), 11u);
  EXPECT_EQ(g.stats().pages, 12u);
  EXPECT_EQ(g.stats().redirects, 1u);
  EXPECT_EQ(g.stats().dangling_links, 2u);  // No Such Page, England
}

TEST(IngestDump, RedirectMapsToTarget) {
  const auto g = load_fixture("graph12.xml");
  ASSERT_TRUE(g.resolve_title("UK").has_value());
  EXPECT_EQ(*g.resolve_title("UK"), id_of(g, "United Kingdom"));
  for (std::uint32_t i = 0; i < g.n_articles(); ++i) {
    EXPECT_NE(g.article(ArticleId{i}).title, "uk");
  }
}

TEST(IngestDump, SingleArticleWithoutLinks) {
  const GraphStore g(parse_dump(make_dump({{"Solo", "Just text."}})));
  ASSERT_EQ(g.n_articles(), 1u);
  EXPECT_TRUE(g.out_links(ArticleId{0}).empty());
  EXPECT_TRUE(g.in_links(ArticleId{0}).empty());
}

TEST(IngestDump, SkipsOtherNamespaces) {
  const std::string xml =
      "<mediawiki><page><title>Talk:Bird</title><ns>1</ns><revision><text>x</text>"
      "</revision></page><page><title>Bird</title><ns>0</ns><revision><text>y</text>"
      "</revision></page></mediawiki>";
  const GraphStore g(parse_dump(xml));
  EXPECT_EQ(g.n_articles(), 1u);
  EXPECT_EQ(g.stats().skipped_namespace, 1u);
}

TEST(IngestDump, RedirectElementAndChains) {
  const GraphStore g(parse_dump(make_dump({{"Target", "body"},
                                           {"Alias", "#REDIRECT [[Middle]]"},
                                           {"Middle", "#REDIRECT [[Target]]"},
                                           {"Linker", "[[Alias]]"}})));
  EXPECT_EQ(g.n_articles(), 2u);
  EXPECT_EQ(g.resolve_title("alias"), g.resolve_title("Target"));
  EXPECT_EQ(titles(g, g.out_links(id_of(g, "Linker"))), std::set<std::string>{"Target"});
}

TEST(IngestDump, MalformedXmlReportsOffset) {
  const std::string xml = "<mediawiki><page><title>A</title><revision><text>x</revision>";
  try {
    (void)parse_dump(xml);
    FAIL() << "expected IngestError";
  } catch (const IngestError& e) {
    EXPECT_GT(e.offset(), 0u);
    EXPECT_LE(e.offset(), xml.size());
  }
}

TEST(IngestDump, EmptyDumpIsAnError) {
  try {
    (void)GraphStore(parse_dump(std::string_view("<mediawiki></mediawiki>")));
    FAIL() << "expected IngestError";
  } catch (const IngestError& e) {
    EXPECT_NE(std::string(e.what()).find("no content articles"), std::string::npos);
  }
  EXPECT_THROW((void)GraphStore(parse_dump(make_dump({{"UK", "#REDIRECT [[X]]"}}))), IngestError);
}

TEST(ResolveTitle, RedirectAlias) {
  const GraphStore g(parse_dump(
      make_dump({{"Indian Space Research Organisation", "The space agency of India."},
                 {"ISRO", "#REDIRECT [[Indian Space Research Organisation]]"}})));
  EXPECT_EQ(g.resolve_title("ISRO"), g.resolve_title("Indian Space Research Organisation"));
  EXPECT_EQ(g.resolve_title("indian  space research organisation"),
            g.resolve_title("Indian Space Research Organisation"));
  EXPECT_EQ(g.resolve_title("Indian_Space_Research_Organisation"),
            g.resolve_title("Indian Space Research Organisation"));
  EXPECT_FALSE(g.resolve_title("No Such Page").has_value());
}

TEST(OutLinks, FixtureExamples) {
  const auto g = load_fixture("graph12.xml");
  EXPECT_EQ(titles(g, g.out_links(id_of(g, "Bird"))), (std::set<std::string>{"Wing", "Feather"}));
  EXPECT_TRUE(g.out_links(id_of(g, "Lonely")).empty());
  EXPECT_TRUE(g.out_links(id_of(g, "Dangling")).empty());
  EXPECT_THROW((void)g.out_links(ArticleId{99}), Error);
}

TEST(InLinks, FixtureExamples) {
  const auto g = load_fixture("graph12.xml");
  EXPECT_EQ(titles(g, g.in_links(id_of(g, "Bird"))), (std::set<std::string>{"Wing", "Feather"}));
  EXPECT_TRUE(g.in_links(id_of(g, "Lonely")).empty());
  EXPECT_TRUE(titles(g, g.in_links(id_of(g, "Nest"))).contains("Egg"));
  EXPECT_TRUE(titles(g, g.in_links(id_of(g, "Egg"))).contains("Nest"));
  EXPECT_THROW((void)g.in_links(ArticleId{11}), Error);
}

TEST(LinkGraph, MatchesHandEnumeratedLinksAndTranspose) {
  const auto g = load_fixture("graph12.xml");
  std::map<std::string, std::set<std::string>> incoming;
  for (const auto& [from, tos] : kGraph12Links) {
    incoming[from];
    for (const auto& to : tos) incoming[to].insert(from);
  }
  for (const auto& [title, outs] : kGraph12Links) {
    const auto id = id_of(g, title);
    EXPECT_EQ(titles(g, g.out_links(id)), outs) << title;
    EXPECT_EQ(titles(g, g.in_links(id)), incoming[title]) << title;
  }
}

TEST(TermFrequency, FixtureCounts) {
  const auto g = load_fixture("graph12.xml");
  const auto wing = id_of(g, "Wing");
  EXPECT_EQ(g.term_frequency(wing, std::vector<std::string>{"bird"}), 3u);
  EXPECT_EQ(g.term_frequency(wing, std::vector<std::string>{"bird", "fowl"}), 4u);
  EXPECT_EQ(g.term_frequency(wing, std::vector<std::string>{"submarine"}), 0u);
  EXPECT_THROW((void)g.term_frequency(wing, std::vector<std::string>{}), Error);
}

TEST(TermFrequency, MultiWordTermsCountContiguousMatches) {
  const GraphStore g(parse_dump(make_dump({{"A", "swine flu and swine and flu swine flu"}})));
  EXPECT_EQ(g.term_frequency(ArticleId{0}, "swine flu"), 2u);
  EXPECT_EQ(g.term_frequency(ArticleId{0}, "Swine_Flu"), 2u);
  EXPECT_EQ(g.term_frequency(ArticleId{0}, "flu swine"), 1u);
}

TEST(Idf, FourArticleFixture) {
  const GraphStore g(parse_dump(make_dump(
      {{"A", "apple pear"}, {"B", "apple plum"}, {"C", "fig plum"}, {"D", "fig kiwi"}})));
  EXPECT_NEAR(g.idf("apple").value, std::log(2.0), 1e-12);
  EXPECT_NEAR(g.idf("apple").value, 0.6931, 1e-4);
  EXPECT_FALSE(g.idf("apple").df_substituted);
}

TEST(Idf, TermInEveryArticleIsZero) {
  const GraphStore g(parse_dump(make_dump({{"A", "x y"}, {"B", "x z"}})));
  EXPECT_EQ(g.idf("x").value, 0.0);
}

TEST(Idf, SingleArticleTermInEightArticleFixture) {
  const auto g = load_fixture("scores8.xml");
  ASSERT_EQ(g.n_articles(), 8u);
  const oracle::Wiki w(g);
  ASSERT_EQ(w.df("plumage"), 1u);
  EXPECT_NEAR(g.idf("plumage").value, std::log(8.0), 1e-12);
  EXPECT_NEAR(g.idf("plumage").value, 2.0794, 1e-4);
}

TEST(Idf, UnseenTermSubstitutesDfOne) {
  const auto g = load_fixture("scores8.xml");
  const auto idf = g.idf("zeppelin");
  EXPECT_TRUE(idf.df_substituted);
  EXPECT_NEAR(idf.value, std::log(8.0), 1e-12);
}

TEST(DocumentFrequency, MatchesBruteForceOnFixtures) {
  for (const char* name : {"graph12.xml", "scores8.xml", "planted/wiki.xml"}) {
    const auto g = load_fixture(name);
    const oracle::Wiki w(g);
    for (std::uint32_t t = 0; t < g.vocabulary_size(); ++t) {
      const auto& term = g.term_text(t);
      const auto df = g.document_frequency(term);
      EXPECT_EQ(df, w.df(term)) << name << " " << term;
      EXPECT_GE(df, 1u);
      EXPECT_LE(df, g.n_articles());
    }
  }
}

TEST(Idf, AntiMonotoneInDf) {
  const auto g = load_fixture("scores8.xml");
  std::vector<std::pair<std::size_t, double>> points;
  for (std::uint32_t t = 0; t < g.vocabulary_size(); ++t) {
    const auto& term = g.term_text(t);
    points.emplace_back(g.document_frequency(term), g.idf(term).value);
  }
  for (const auto& a : points) {
    for (const auto& b : points) {
      if (a.first < b.first) {
        EXPECT_GT(a.second, b.second);
      }
    }
  }
}

TEST(IngestDump, DeterministicAcrossRunsAndThreadCounts) {
  const std::string xml = slurp(data_path("graph12.xml"));
  const GraphStore a(parse_dump(xml), 1);
  const GraphStore b(parse_dump(xml), 4);
  ASSERT_EQ(a.n_articles(), b.n_articles());
  ASSERT_EQ(a.vocabulary_size(), b.vocabulary_size());
  for (std::uint32_t i = 0; i < a.n_articles(); ++i) {
    EXPECT_EQ(a.out_links(ArticleId{i}), b.out_links(ArticleId{i}));
    EXPECT_EQ(a.in_links(ArticleId{i}), b.in_links(ArticleId{i}));
  }
  for (std::uint32_t t = 0; t < a.vocabulary_size(); ++t) {
    EXPECT_EQ(a.term_text(t), b.term_text(t));
    EXPECT_EQ(a.document_frequency(a.term_text(t)), b.document_frequency(a.term_text(t)));
  }
}

TEST(GraphStoreFiles, RoundTripIsExactAndBitStable) {
  testing::TempDir tmp;
  std::istringstream in(slurp(data_path("graph12.xml")));
  const auto g = ingest_dump(in);
  save_graph_store(g, tmp / "a");
  const auto loaded = load_graph_store(tmp / "a");
  save_graph_store(loaded, tmp / "b");
  for (const char* f : {"manifest.json", "articles.tsv", "links.tsv", "redirects.tsv"}) {
    EXPECT_EQ(slurp(tmp / "a" / f), slurp(tmp / "b" / f)) << f;
  }
  EXPECT_EQ(loaded.stats(), g.stats());
  EXPECT_EQ(loaded.resolve_title("UK"), g.resolve_title("UK"));
}

TEST(GraphStoreFiles, DetectsCorruption) {
  testing::TempDir tmp;
  save_graph_store(load_fixture("graph12.xml"), tmp.path());
  auto text = slurp(tmp / "articles.tsv");
  text[text.size() / 2] ^= 1;
  testing::spit(tmp / "articles.tsv", text);
  EXPECT_THROW((void)load_graph_store(tmp.path()), LoadError);
  EXPECT_THROW((void)load_graph_store(tmp / "missing"), LoadError);
}

// Random dumps: titles, links (some dangling, some through redirects).
TEST(LinkGraph, TransposeAndRedirectPropertiesOnRandomDumps) {
  std::mt19937 rng(1234);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 12);
    const int r = static_cast<int>(rng() % 4);
    std::string xml = "<mediawiki>\n";
    std::map<std::string, std::set<std::string>> expected;
    std::map<std::string, std::string> redirects;
    for (int k = 0; k < r; ++k) {
      redirects["Alias " + std::to_string(k)] = "Page " + std::to_string(rng() % n);
    }
    for (int i = 0; i < n; ++i) {
      const std::string title = "Page " + std::to_string(i);
      std::string text = "words ";
      auto& outs = expected[title];
      const int links = static_cast<int>(rng() % 6);
      for (int l = 0; l < links; ++l) {
        const int kind = static_cast<int>(rng() % 3);
        if (kind == 0) {
          const std::string to = "Page " + std::to_string(rng() % n);
          text += "[[" + to + "]] ";
          outs.insert(to);
        } else if (kind == 1 && r > 0) {
          const std::string alias = "Alias " + std::to_string(rng() % r);
          text += "[[" + alias + "|label]] ";
          outs.insert(redirects[alias]);
        } else {
          text += "[[Missing " + std::to_string(rng() % 5) + "]] ";
        }
      }
      xml += "<page><title>" + title + "</title><ns>0</ns><revision><text>" + text +
             "</text></revision></page>\n";
    }
    for (const auto& [alias, to] : redirects) {
      xml += "<page><title>" + alias + "</title><ns>0</ns><redirect title=\"" + to +
             "\"/><revision><text>#REDIRECT [[" + to + "]]</text></revision></page>\n";
    }
    xml += "</mediawiki>\n";
    const GraphStore g(parse_dump(xml));
    ASSERT_EQ(g.n_articles(), static_cast<std::size_t>(n));
    for (const auto& [title, outs] : expected) {
      EXPECT_EQ(titles(g, g.out_links(id_of(g, title))), outs);
    }
    for (std::uint32_t x = 0; x < g.n_articles(); ++x) {
      for (std::uint32_t y = 0; y < g.n_articles(); ++y) {
        const auto& ox = g.out_links(ArticleId{x});
        const auto& iy = g.in_links(ArticleId{y});
        const bool forward = std::find(ox.begin(), ox.end(), ArticleId{y}) != ox.end();
        const bool backward = std::find(iy.begin(), iy.end(), ArticleId{x}) != iy.end();
        EXPECT_EQ(forward, backward);
      }
    }
    for (const auto& [alias, to] : redirects) EXPECT_EQ(g.resolve_title(alias), g.resolve_title(to));
  }
}

}  // namespace
}  // namespace wwqe
