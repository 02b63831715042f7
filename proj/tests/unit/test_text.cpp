#include <gtest/gtest.h>

#include <random>

#include "wwqe/text.hpp"

namespace wwqe::text {
namespace {

TEST(Tokenize, SplitsOnPunctuationAndFoldsCase) {
  EXPECT_EQ(tokenize("Swine-flu, VACCINE (2009)!"),
            (std::vector<std::string>{"swine", "flu", "vaccine", "2009"}));
  EXPECT_TRUE(tokenize("").empty());
  EXPECT_TRUE(tokenize(" ... --- ").empty());
}

TEST(Tokenize, HandlesUnicodeLettersAndPunctuation) {
  EXPECT_EQ(tokenize("Ärger—Über café"),
            (std::vector<std::string>{"ärger", "über", "café"}));
  EXPECT_EQ(tokenize("Москва"),
            (std::vector<std::string>{"москва"}));
}

TEST(Tokenize, InvalidUtf8SeparatesTokens) {
  EXPECT_EQ(tokenize("ab\xff" "cd"), (std::vector<std::string>{"ab", "cd"}));
  EXPECT_EQ(tokenize("ab\xe2\x82"), (std::vector<std::string>{"ab"}));
}

TEST(SplitWords, KeepsSurfaceCase) {
  EXPECT_EQ(split_words("Ram Janmabhoomi verdict"),
            (std::vector<std::string>{"Ram", "Janmabhoomi", "verdict"}));
}

TEST(AppendFoldedTokens, MatchesTokenize) {
  std::string out;
  append_folded_tokens("A Wing, a BIRD.", out);
  EXPECT_EQ(out, "a wing a bird ");
}

TEST(NormalizeTitle, UnifiesUnderscoresSpacesAndCase) {
  EXPECT_EQ(normalize_title("Indian_Space  Research Organisation "),
            "indian space research organisation");
  EXPECT_EQ(normalize_title("  UK "), "uk");
  EXPECT_EQ(normalize_title("C++"), "c++");
}

TEST(NormalizeTerm, JoinsTokens) {
  EXPECT_EQ(normalize_term("Swine_Flu"), "swine flu");
  EXPECT_EQ(normalize_term("swine   flu"), "swine flu");
}

TEST(Normalization, IsIdempotentOnRandomStrings) {
  std::mt19937 rng(7);
  const std::string alphabet = "abcXYZ _-.\tÄ";
  for (int trial = 0; trial < 500; ++trial) {
    std::string s;
    const int len = static_cast<int>(rng() % 20);
    for (int i = 0; i < len; ++i) s += alphabet[rng() % alphabet.size()];
    const auto t = normalize_title(s);
    EXPECT_EQ(normalize_title(t), t) << s;
    const auto n = normalize_term(s);
    EXPECT_EQ(normalize_term(n), n) << s;
  }
}

}  // namespace
}  // namespace wwqe::text
