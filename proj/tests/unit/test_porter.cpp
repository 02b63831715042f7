#include <gtest/gtest.h>

#include <utility>

#include "wwqe/porter.hpp"

namespace wwqe {
namespace {

// Input/output pairs from Porter's published vocabulary and the examples of
// the original article.
const std::pair<const char*, const char*> kPairs[] = {
    {"caresses", "caress"},     {"ponies", "poni"},           {"ties", "ti"},
    {"caress", "caress"},       {"cats", "cat"},              {"feed", "feed"},
    {"agreed", "agre"},         {"plastered", "plaster"},     {"bled", "bled"},
    {"motoring", "motor"},      {"sing", "sing"},             {"conflated", "conflat"},
    {"troubled", "troubl"},     {"sized", "size"},            {"hopping", "hop"},
    {"tanned", "tan"},          {"falling", "fall"},          {"hissing", "hiss"},
    {"fizzed", "fizz"},         {"failing", "fail"},          {"filing", "file"},
    {"happy", "happi"},         {"sky", "sky"},               {"relational", "relat"},
    {"conditional", "condit"},  {"rational", "ration"},       {"valenci", "valenc"},
    {"hesitanci", "hesit"},     {"digitizer", "digit"},       {"conformabli", "conform"},
    {"radicalli", "radic"},     {"differentli", "differ"},    {"vileli", "vile"},
    {"analogousli", "analog"},  {"vietnamization", "vietnam"}, {"predication", "predic"},
    {"operator", "oper"},       {"feudalism", "feudal"},      {"decisiveness", "decis"},
    {"hopefulness", "hope"},    {"callousness", "callous"},   {"formaliti", "formal"},
    {"sensitiviti", "sensit"},  {"sensibiliti", "sensibl"},   {"triplicate", "triplic"},
    {"formative", "form"},      {"formalize", "formal"},      {"electriciti", "electr"},
    {"electrical", "electr"},   {"hopeful", "hope"},          {"goodness", "good"},
    {"revival", "reviv"},       {"allowance", "allow"},       {"inference", "infer"},
    {"airliner", "airlin"},     {"gyroscopic", "gyroscop"},   {"adjustable", "adjust"},
    {"defensible", "defens"},   {"irritant", "irrit"},        {"replacement", "replac"},
    {"adjustment", "adjust"},   {"dependent", "depend"},      {"adoption", "adopt"},
    {"homologous", "homolog"},  {"communism", "commun"},      {"activate", "activ"},
    {"angulariti", "angular"},  {"effective", "effect"},      {"bowdlerize", "bowdler"},
    {"probate", "probat"},      {"rate", "rate"},             {"cease", "ceas"},
    {"controlling", "control"}, {"roll", "roll"},             {"generalizations", "gener"},
    {"oscillators", "oscil"},   {"connections", "connect"},   {"connecting", "connect"},
};

TEST(PorterStem, PublishedVocabulary) {
  for (const auto& [in, out] : kPairs) EXPECT_EQ(porter_stem(in), out) << in;
}

TEST(PorterStem, ShortAndNonAlphabeticWordsUnchanged) {
  EXPECT_EQ(porter_stem("as"), "as");
  EXPECT_EQ(porter_stem("a"), "a");
  EXPECT_EQ(porter_stem(""), "");
  EXPECT_EQ(porter_stem("h1n1"), "h1n1");
  EXPECT_EQ(porter_stem("2009"), "2009");
}

TEST(PorterStem, NeverLengthens) {
  for (const auto& [in, out] : kPairs) {
    const auto stem = porter_stem(in);
    EXPECT_LE(stem.size(), std::string_view(in).size());
  }
}

}  // namespace
}  // namespace wwqe
