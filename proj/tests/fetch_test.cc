#include "newslens/fetch.h"

#include <string>
#include <thread>

#include "gtest/gtest.h"
#include "httplib.h"
#include "newslens/error.h"

namespace newslens {
namespace {

// 500 visible characters made of 10 sentences of exactly 50 characters.
std::string FiveHundredChars() {
  std::string out;
  for (int i = 0; i < 10; ++i) {
    std::string s = "Sentence " + std::to_string(i) + " of the visible article text";
    while (s.size() < 49) s += "x";
    s += ".";
    if (!out.empty()) out += " ";
    out += s;
  }
  return out.substr(0, 500);
}

class LocalSite : public ::testing::Test {
 protected:
  void SetUp() override {
    server_.Get("/article", [](const httplib::Request &, httplib::Response &res) {
      res.set_content(
          "<html><head><title>Budget talks</title><style>p{color:red}</style>"
          "<script>var x = '<div>not text</div>';</script></head><body>"
          "<nav><a href='/'>Home</a> <a href='/world'>World</a></nav>"
          "<article>" + FiveHundredChars() + "</article>"
          "<footer>Copyright 2023 Example News</footer></body></html>",
          "text/html");
    });
    server_.Get("/short", [](const httplib::Request &, httplib::Response &res) {
      res.set_content("<html><body><div>Ten chars.</div></body></html>", "text/html");
    });
    server_.Get("/missing", [](const httplib::Request &, httplib::Response &res) {
      res.status = 404;
      res.set_content("gone", "text/plain");
    });
    server_.Get("/moved", [](const httplib::Request &, httplib::Response &res) {
      res.set_redirect("/article");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    ASSERT_GT(port_, 0);
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  void TearDown() override {
    server_.stop();
    if (thread_.joinable()) thread_.join();
  }

  std::string Url(const std::string &path) const {
    return "http://127.0.0.1:" + std::to_string(port_) + path;
  }

  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
};

TEST_F(LocalSite, BodyEqualsArticleBlock) {
  ArticleDraft draft = FetchArticle(Url("/article"));
  EXPECT_EQ(draft.body, FiveHundredChars());
  EXPECT_EQ(draft.body.size(), 500u);
  EXPECT_EQ(draft.title, "Budget talks");
  EXPECT_EQ(draft.url, Url("/article"));
}

TEST_F(LocalSite, FollowsRedirects) {
  EXPECT_EQ(FetchArticle(Url("/moved")).body, FiveHundredChars());
}

TEST_F(LocalSite, ShortPageIsExtractionEmpty) {
  try {
    FetchArticle(Url("/short"));
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kExtractionEmpty);
  }
}

TEST_F(LocalSite, HttpErrorIsFetchFailed) {
  try {
    FetchArticle(Url("/missing"));
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kFetchFailed);
    EXPECT_NE(e.detail().find("404"), std::string::npos);
  }
}

TEST(FetchTest, UnreachableHostIsFetchFailed) {
  // Bind and release a port so nothing listens on it.
  int port;
  {
    httplib::Server probe;
    port = probe.bind_to_any_port("127.0.0.1");
  }
  FetchOptions options;
  options.timeout_seconds = 2;
  try {
    FetchArticle("http://127.0.0.1:" + std::to_string(port) + "/x", options);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kFetchFailed);
  }
}

TEST(FetchTest, NetworkDisabledOrBadUrlIsConfigError) {
  FetchOptions offline;
  offline.allow_network = false;
  for (const auto &[url, options] :
       {std::pair<std::string, FetchOptions>{"http://example.org/", offline},
        {"ftp://example.org/", FetchOptions{}},
        {"not a url", FetchOptions{}}}) {
    try {
      FetchArticle(url, options);
      ADD_FAILURE() << url;
    } catch (const Error &e) {
      EXPECT_EQ(e.code(), ErrorCode::kInvalidConfig) << url;
    }
  }
}

TEST(FetchTest, ParseUrl) {
  auto u = ParseUrl("https://news.example.org/a/b?c=d");
  ASSERT_TRUE(u.has_value());
  EXPECT_EQ(u->scheme, "https");
  EXPECT_EQ(u->host, "news.example.org");
  EXPECT_EQ(u->port, 443);
  EXPECT_EQ(u->path, "/a/b?c=d");
  auto v = ParseUrl("http://localhost:8081");
  ASSERT_TRUE(v.has_value());
  EXPECT_EQ(v->port, 8081);
  EXPECT_EQ(v->path, "/");
  EXPECT_FALSE(ParseUrl("mailto:x@y").has_value());
}

TEST(ExtractTest, LongestBlockWinsAndParagraphsJoin) {
  std::string block(320, 'a');
  std::string html = "<div><p>" + block + "</p><p>second &amp; last</p></div>"
                     "<div>" + std::string(330, 'b') + "</div>";
  ExtractedText text = ExtractMainText(html, 300);
  EXPECT_EQ(text.body, block + "\n\nsecond & last");
}

TEST(ExtractTest, ScriptAndStyleAreInvisible) {
  std::string words;
  for (int i = 0; i < 40; ++i) words += "word" + std::to_string(i) + " ";
  std::string html = "<article><script>if (a < b) { x(); }</script>" + words +
                     "<style>.a{}</style></article>";
  ExtractedText text = ExtractMainText(html, 100);
  EXPECT_EQ(text.body.find("x()"), std::string::npos);
  EXPECT_EQ(text.body.find(".a{}"), std::string::npos);
  EXPECT_EQ(text.body.rfind("word0 ", 0), 0u);
}

TEST(ExtractTest, TitleFallsBackToHeading) {
  std::string html = "<body><h1>Main &quot;headline&quot;</h1><div>" +
                     std::string(310, 'z') + "</div></body>";
  EXPECT_EQ(ExtractMainText(html, 300).title, "Main \"headline\"");
}

TEST(ExtractTest, MinimumCountsCharactersNotBytes) {
  std::string block;
  for (int i = 0; i < 300; ++i) block += "é";  // 600 bytes, 300 characters
  EXPECT_NO_THROW(ExtractMainText("<div>" + block + "</div>", 300));
  EXPECT_THROW(ExtractMainText("<div>" + block + "</div>", 301), Error);
}

}  // namespace
}  // namespace newslens
