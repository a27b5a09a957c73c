#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "anchorlight/html.hpp"
#include "anchorlight/url.hpp"

using namespace anchorlight;

namespace {

std::string read_file(const std::string& name) {
  std::ifstream f(std::string(ANCHORLIGHT_TEST_DATA_DIR) + "/" + name, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST(NormalizeUrl, BasicCases) {
  EXPECT_EQ(normalize_url("http://a/x/", "y.html#top"), "http://a/x/y.html");
  EXPECT_EQ(normalize_url("http://a/", "mailto:z@a"), std::nullopt);
  EXPECT_EQ(normalize_url("HTTP://A//b/../c", ""), "http://a/c");
}

TEST(NormalizeUrl, MatchesReferenceResolver) {
  std::ifstream f(std::string(ANCHORLIGHT_TEST_DATA_DIR) + "/url_cases.tsv");
  int cases = 0;
  for (std::string line; std::getline(f, line);) {
    auto t1 = line.find('\t');
    auto t2 = line.find('\t', t1 + 1);
    std::string base = line.substr(0, t1), href = line.substr(t1 + 1, t2 - t1 - 1), want = line.substr(t2 + 1);
    auto got = normalize_url(base, href);
    if (want == "-")
      EXPECT_EQ(got, std::nullopt) << base << " + " << href;
    else
      EXPECT_EQ(got.value_or("<none>"), want) << base << " + " << href;
    ++cases;
  }
  EXPECT_GT(cases, 50);
}

TEST(NormalizeUrl, RejectsGarbage) {
  EXPECT_EQ(normalize_url("http://a/", "javascript:alert(1)"), std::nullopt);
  EXPECT_EQ(normalize_url("not a url", "x"), std::nullopt);
  EXPECT_EQ(normalize_url("http://a/", "http://"), std::nullopt);
}

TEST(Url, ParseAndRender) {
  auto u = Url::parse("https://Example.com:8443/a/b?x=1");
  ASSERT_TRUE(u);
  EXPECT_EQ(u->host, "example.com");
  EXPECT_EQ(u->effective_port(), 8443);
  EXPECT_EQ(u->target(), "/a/b?x=1");
  EXPECT_EQ(u->str(), "https://example.com:8443/a/b?x=1");
  EXPECT_EQ(Url::parse("http://h")->effective_port(), 80);
  EXPECT_EQ(Url::parse("http://h")->path, "/");
}

TEST(Extract, SingleAnchor) {
  auto page = html::extract(R"(<a href="/b">Good Page</a>)", "http://a/");
  ASSERT_TRUE(page);
  ASSERT_EQ(page->links.size(), 1u);
  EXPECT_EQ(page->links[0], (html::Link{"http://a/b", "Good Page"}));
}

TEST(Extract, ScriptAndStyleRemoved) {
  auto page = html::extract("<script>x</script>hello", "http://a/");
  ASSERT_TRUE(page);
  EXPECT_EQ(page->text, "hello");
  page = html::extract("<style>p{}</style><p>a &amp; b</p><!-- hidden --><p>c</p>", "http://a/");
  EXPECT_EQ(page->text, "a & b c");
}

TEST(Extract, TwelveAnchorFixture) {
  auto page = html::extract(read_file("twelve_anchors.html"), "http://fixture.test/guide/index.html");
  ASSERT_TRUE(page);
  std::vector<html::Link> expected = {
      {"http://fixture.test/tides.html", "tide tables"},
      {"http://fixture.test/guide/charts/north.html", "northern charts"},
      {"http://fixture.test/boats/", "Boats & ships"},
      {"http://fixture.test/guide/weather.html", "Today's weather"},
      {"http://fixture.test/about.html", "About the harbor"},
      {"https://external.example.org/maps", "External maps"},
      {"http://fixture.test/tides.html", "Tide tables again"},
      {"http://fixture.test/guide/index.html?page=2", "Next page"},
      {"http://cdn.example.net/photos/", "Photo gallery"},
      {"http://fixture.test/guide/lighthouse.html", "Lighthouse"},
  };
  EXPECT_EQ(page->links, expected);
  EXPECT_EQ(page->text.find("document.write"), std::string::npos);
  EXPECT_EQ(page->text.find("display"), std::string::npos);
  EXPECT_NE(page->text.find("Harbor guide"), std::string::npos);
}

TEST(Extract, BaseHrefAndEntities) {
  auto page = html::extract(R"(<base href="http://other/dir/"><a href="x">caf&eacute; &#169; &#x41;</a>)",
                            "http://a/");
  ASSERT_TRUE(page);
  ASSERT_EQ(page->links.size(), 1u);
  EXPECT_EQ(page->links[0].url, "http://other/dir/x");
  EXPECT_EQ(page->links[0].anchor_text, "café © A");
}

TEST(Decode, CharsetHandling) {
  EXPECT_EQ(html::charset_from_content_type("text/html; charset=ISO-8859-1"), "iso-8859-1");
  EXPECT_EQ(html::charset_from_content_type("text/html"), "");
  EXPECT_EQ(html::sniff_meta_charset(R"(<meta charset="windows-1252">)"), "windows-1252");
  EXPECT_EQ(html::decode("caf\xe9", "iso-8859-1"), "café");
  EXPECT_EQ(html::decode("\x93q\x94", "windows-1252"), "\xe2\x80\x9cq\xe2\x80\x9d");
  EXPECT_EQ(html::decode("ok", "utf-8"), "ok");
  EXPECT_EQ(html::decode("bad \xff\xfe bytes", "utf-8"), std::nullopt);
  EXPECT_EQ(html::decode("bad \xc3", ""), std::nullopt);
}

TEST(Extract, UndecodableBodyIsRejected) {
  EXPECT_EQ(html::extract("<p>\xff\xfe\xfd</p>", "http://a/", "utf-8"), std::nullopt);
  auto latin = html::extract("<p>na\xefve</p>", "http://a/", "iso-8859-1");
  ASSERT_TRUE(latin);
  EXPECT_EQ(latin->text, "naïve");
}

TEST(Sniff, LooksLikeHtml) {
  EXPECT_TRUE(html::looks_like_html("  <!DOCTYPE html><html>"));
  EXPECT_TRUE(html::looks_like_html("<html><body>"));
  EXPECT_FALSE(html::looks_like_html("%PDF-1.4 binary"));
  EXPECT_FALSE(html::looks_like_html("{\"json\": true}"));
}
