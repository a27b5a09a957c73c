#include <gtest/gtest.h>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "anchorlight/text.hpp"

using namespace anchorlight::text;
using Tokens = std::vector<std::string>;

namespace {

std::vector<std::string> read_lines(const std::string& name) {
  std::ifstream f(std::string(ANCHORLIGHT_TEST_DATA_DIR) + "/" + name);
  std::vector<std::string> lines;
  for (std::string line; std::getline(f, line);) lines.push_back(line);
  return lines;
}

std::string read_file(const std::string& name) {
  std::ifstream f(std::string(ANCHORLIGHT_TEST_DATA_DIR) + "/" + name);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

TokenStream stream(Tokens t) { return {std::move(t), Source::Content}; }

}  // namespace

TEST(Tokenize, PunctuationSplitAndLowercase) {
  EXPECT_EQ(tokenize("Web Search-Engine!").tokens, (Tokens{"web", "search", "engine"}));
  EXPECT_TRUE(tokenize("").tokens.empty());
  EXPECT_TRUE(tokenize("  ...  --- ").tokens.empty());
  EXPECT_EQ(tokenize("HTTP/1.1 status 404").tokens, (Tokens{"http", "1", "1", "status", "404"}));
}

TEST(Tokenize, HundredWordParagraphInOrder) {
  auto tokens = tokenize(read_file("paragraph_100.txt")).tokens;
  ASSERT_EQ(tokens.size(), 100u);
  EXPECT_EQ(tokens.front(), "the");
  EXPECT_EQ(tokens[1], "harbor");
  EXPECT_EQ(tokens[37], "42");
  EXPECT_EQ(tokens.back(), "stars");
  for (const auto& t : tokens) {
    EXPECT_FALSE(t.empty());
    EXPECT_EQ(t.find_first_of(" \t\n"), std::string::npos);
  }
}

TEST(Tokenize, NonAsciiLettersKeptAndFolded) {
  EXPECT_EQ(tokenize("Café ÉCOLE Straße").tokens, (Tokens{"café", "école", "straße"}));
  EXPECT_EQ(tokenize("ΑΘΗΝΑ").tokens, (Tokens{"αθηνα"}));
  EXPECT_EQ(tokenize("left—right “quoted”").tokens, (Tokens{"left", "right", "quoted"}));
}

TEST(Tokenize, LongTokensTruncated) {
  std::string junk(200, 'x');
  auto tokens = tokenize("a " + junk + " b").tokens;
  ASSERT_EQ(tokens.size(), 3u);
  EXPECT_EQ(tokens[1].size(), kMaxTokenLength);
}

TEST(Tokenize, MalformedUtf8DoesNotThrow) {
  std::string bad = "ok \xff\xfe tail \xe2\x82";
  auto tokens = tokenize(bad).tokens;
  ASSERT_GE(tokens.size(), 2u);
  EXPECT_EQ(tokens[0], "ok");
  EXPECT_EQ(tokens[1], "tail");
}

TEST(StopWords, BundledListShape) {
  const auto& sl = StopList::standard();
  EXPECT_FALSE(sl.contains("computer"));
  EXPECT_TRUE(sl.contains("the"));
  EXPECT_TRUE(sl.contains("and"));
  EXPECT_TRUE(sl.contains("of"));
  EXPECT_EQ(sl.terms().size(), 318u);
  EXPECT_EQ(sl.version(), "glasgow-318");
}

TEST(StopWords, ComputerIsKept) {
  EXPECT_EQ(filter_stopwords(stream({"the", "computer", "is", "fast"}), StopList::standard()).tokens,
            (Tokens{"computer", "fast"}));
  EXPECT_TRUE(filter_stopwords(stream({}), StopList::standard()).tokens.empty());
}

TEST(StopWords, ListFiltersItselfAway) {
  const auto& sl = StopList::standard();
  Tokens all(sl.terms().begin(), sl.terms().end());
  EXPECT_TRUE(filter_stopwords(stream(all), sl).tokens.empty());
}

TEST(StopWords, FilteringIsAProjection) {
  auto tokens = tokenize(read_file("paragraph_100.txt"));
  auto once = filter_stopwords(tokens, StopList::standard());
  auto twice = filter_stopwords(once, StopList::standard());
  EXPECT_EQ(once.tokens, twice.tokens);
  EXPECT_LT(once.tokens.size(), tokens.tokens.size());
}

TEST(StopWords, ParseVersionAndComments) {
  auto sl = StopList::parse("# comment\n# version: v7\nfoo\n\n  Bar  \n");
  EXPECT_EQ(sl.version(), "v7");
  EXPECT_TRUE(sl.contains("foo"));
  EXPECT_TRUE(sl.contains("bar"));
  EXPECT_EQ(sl.terms().size(), 2u);
}

TEST(Stem, NavigationFamily) {
  EXPECT_EQ(stem("navigational"), "navig");
  EXPECT_EQ(stem("navigation"), "navig");
  EXPECT_EQ(stem("navigate"), "navig");
  EXPECT_EQ(stem("a"), "a");
  EXPECT_EQ(stem("is"), "is");
}

TEST(Stem, ReferenceVocabularyExact) {
  auto voc = read_lines("porter_voc.txt");
  auto expected = read_lines("porter_output.txt");
  ASSERT_EQ(voc.size(), expected.size());
  ASSERT_GT(voc.size(), 20000u);
  std::size_t mismatches = 0;
  for (std::size_t i = 0; i < voc.size(); ++i) {
    if (stem(voc[i]) != expected[i]) {
      if (++mismatches <= 20) ADD_FAILURE() << voc[i] << " -> " << stem(voc[i]) << ", expected " << expected[i];
    }
  }
  EXPECT_EQ(mismatches, 0u);
}

TEST(Stem, IdempotentOnReferenceVocabulary) {
  // Porter is not idempotent in general; record every counterexample so a
  // change in behaviour shows up as a diff in this list.
  std::vector<std::string> exceptions;
  for (const auto& w : read_lines("porter_voc.txt")) {
    auto s = stem(w);
    if (stem(s) != s) exceptions.push_back(w);
  }
  std::cout << "[ stem ] " << exceptions.size() << " words whose stem re-stems differently\n";
  auto documented = read_lines("porter_restem_exceptions.txt");
  EXPECT_EQ(exceptions, documented);
}

TEST(Normalize, ComposesPipeline) {
  const auto& sl = StopList::standard();
  EXPECT_EQ(normalize("Navigational computers", true, sl).tokens, (Tokens{"navig", "comput"}));
  EXPECT_EQ(normalize("Navigational computers", false, sl).tokens, (Tokens{"navigational", "computers"}));
  EXPECT_EQ(normalize("The Navigation", true, sl, Source::Query).tokens, (Tokens{"navig"}));
}

TEST(Normalize, ContentAndQueryPathsAgree) {
  const auto& sl = StopList::standard();
  for (const auto& line : read_lines("paragraph_100.txt")) {
    for (bool stemming : {true, false}) {
      auto content = normalize(line, stemming, sl, Source::Content);
      auto anchor = normalize(line, stemming, sl, Source::Anchor);
      auto query = normalize(line, stemming, sl, Source::Query);
      EXPECT_EQ(content.tokens, query.tokens);
      EXPECT_EQ(content.tokens, anchor.tokens);
      EXPECT_EQ(query.source, Source::Query);
    }
  }
}
