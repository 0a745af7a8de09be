#include "newslens/server.h"

#include <chrono>
#include <random>
#include <string>
#include <thread>

#include "analysis_fixture.h"
#include "gtest/gtest.h"
#include "httplib.h"
#include "json.hpp"
#include "newslens/error.h"
#include "newslens/util.h"

namespace newslens {
namespace {

using Json = nlohmann::json;

void WriteSnapshot(const std::filesystem::path &path, const Snapshot &s) {
  WriteFile(path, SerializeSnapshot(s));
}

class ServerTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    study_ = new Snapshot(testing::StudySnapshot());
    mini_ = new Snapshot(testing::MiniSnapshot());
  }
  static void TearDownTestSuite() {
    delete study_;
    delete mini_;
  }

  void SetUp() override {
    WriteSnapshot(dir_ / "a_study.json", *study_);
    WriteSnapshot(dir_ / "b_mini.json", *mini_);
    WriteFile(dir_ / "notes.txt", "ignored");
    store_ = std::make_shared<SnapshotStore>(dir_.path());
    server_ = std::make_unique<HttpServer>(store_);
    server_->SetReloadCheck([this] { return reload_.exchange(false); });
    port_ = server_->Bind("127.0.0.1", 0);
    thread_ = std::thread([this] { server_->Run(); });
    server_->WaitUntilReady();
    client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
    client_->set_read_timeout(10, 0);
  }
  void TearDown() override {
    server_->Stop();
    thread_.join();
  }

  httplib::Result Get(const std::string &path) { return client_->Get(path); }

  static Snapshot *study_;
  static Snapshot *mini_;
  testing::TempDir dir_;
  std::shared_ptr<SnapshotStore> store_;
  std::unique_ptr<HttpServer> server_;
  std::unique_ptr<httplib::Client> client_;
  std::thread thread_;
  std::atomic<bool> reload_{false};
  int port_ = 0;
};

Snapshot *ServerTest::study_ = nullptr;
Snapshot *ServerTest::mini_ = nullptr;

TEST_F(ServerTest, Health) {
  auto r = Get("/health");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 200);
  EXPECT_EQ(r->body, "ok");
}

TEST_F(ServerTest, TopicsListsEverySnapshot) {
  auto r = Get("/topics");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 200);
  EXPECT_NE(r->get_header_value("Content-Type").find("application/json"), std::string::npos);
  Json topics = Json::parse(r->body);
  ASSERT_EQ(topics.size(), 4u);
  std::map<std::string, Json> by_id;
  for (const Json &t : topics) by_id[t["id"]] = t;
  EXPECT_EQ(by_id["debt_ceiling"]["article_count"], 10);
  EXPECT_EQ(by_id["debt_ceiling"]["mfa"]["name"], "Marcus Hale");
  EXPECT_EQ(by_id["mini"]["mfa"]["name"], "Nora Lind");
  EXPECT_EQ(by_id["mini"]["corpus_digest"], mini_->corpus_digest);
  EXPECT_EQ(by_id["bushfires"]["created_at"], "2023-03-01T00:00:00Z");
}

TEST_F(ServerTest, OverviewMatchesInProcessModel) {
  auto r = Get("/topics/debt_ceiling/overview?layout=polsides&tags=both");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 200);
  OverviewModel m = BuildOverview(*study_->FindTopic("debt_ceiling"), study_->corpus,
                                  Layout::kPolsides, TagConfig{true, true}, study_->seed);
  EXPECT_EQ(r->body, SerializeOverview(m));

  // Defaults: plain layout, no tags, snapshot seed.
  auto d = Get("/topics/gun_control/overview");
  ASSERT_TRUE(d);
  EXPECT_EQ(d->body, SerializeOverview(BuildOverview(*study_->FindTopic("gun_control"),
                                                     study_->corpus, Layout::kPlain, {},
                                                     study_->seed)));
}

TEST_F(ServerTest, RandomLayoutSeedParameter) {
  auto a = Get("/topics/debt_ceiling/overview?layout=mfap_random&seed=1");
  auto b = Get("/topics/debt_ceiling/overview?layout=mfap_random&seed=1");
  auto c = Get("/topics/debt_ceiling/overview?layout=mfap_random&seed=2");
  ASSERT_TRUE(a && b && c);
  EXPECT_EQ(a->body, b->body);
  EXPECT_NE(Json::parse(a->body)["groups"], Json::parse(c->body)["groups"]);
}

TEST_F(ServerTest, ArticleViewMatchesInProcessModel) {
  auto r = Get("/articles/m1/view?highlight=three&tags=mfap");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 200);
  const Article *a = mini_->corpus.FindArticle("m1");
  EXPECT_EQ(r->body, SerializeArticleView(BuildArticleView(*a, *mini_->TopicOfArticle("m1"),
                                                           HighlightMode::kThree,
                                                           TagConfig{false, true})));
  auto d = Get("/articles/d03/view");
  ASSERT_TRUE(d);
  EXPECT_EQ(Json::parse(d->body)["highlight_mode"], "disabled");
  EXPECT_TRUE(Json::parse(d->body)["highlights"].empty());
}

TEST_F(ServerTest, ErrorResponses) {
  struct Case {
    std::string path;
    int status;
    std::string error;
  };
  for (const Case &c : std::vector<Case>{
           {"/topics/nope/overview", 404, "NotFound"},
           {"/articles/nope/view", 404, "NotFound"},
           {"/nowhere", 404, "NotFound"},
           {"/topics/mini/overview?layout=grid", 400, "UnknownLayout"},
           {"/topics/mini/overview?tags=all", 400, "InvalidInput"},
           {"/topics/mini/overview?seed=-4", 400, "InvalidInput"},
           {"/articles/m1/view?highlight=rainbow", 400, "InvalidInput"},
       }) {
    auto r = Get(c.path);
    ASSERT_TRUE(r) << c.path;
    EXPECT_EQ(r->status, c.status) << c.path;
    Json body = Json::parse(r->body);
    EXPECT_EQ(body["error"], c.error) << c.path;
    EXPECT_TRUE(body["detail"].is_string());
  }
  auto post = client_->Post("/topics", "{}", "application/json");
  ASSERT_TRUE(post);
  EXPECT_EQ(post->status, 405);
  EXPECT_EQ(Json::parse(post->body)["error"], "MethodNotAllowed");
}

TEST_F(ServerTest, ReloadSwapsSnapshotsAndSurvivesBadFiles) {
  std::filesystem::remove(dir_ / "b_mini.json");
  reload_ = true;
  auto r = Get("/topics");
  ASSERT_TRUE(r);
  EXPECT_EQ(Json::parse(r->body).size(), 3u);
  EXPECT_EQ(Get("/articles/m1/view")->status, 404);

  // A corrupt file makes the reload fail; the previous catalog stays.
  WriteFile(dir_ / "c_bad.json", "{\"format\": 1}");
  reload_ = true;
  auto still = Get("/topics");
  ASSERT_TRUE(still);
  EXPECT_EQ(still->status, 200);
  EXPECT_EQ(Json::parse(still->body).size(), 3u);
}

TEST_F(ServerTest, FiftyRandomQueriesMatchInProcessModels) {
  std::mt19937_64 rng(2024);
  const char *layouts[] = {"plain", "polsides", "mfap", "mfap_random"};
  const char *tag_names[] = {"none", "polsides", "mfap", "both"};
  const char *modes[] = {"disabled", "single", "two", "three"};
  std::vector<const Article *> articles;
  for (const Article &a : study_->corpus.articles()) articles.push_back(&a);
  for (int q = 0; q < 50; ++q) {
    const std::string tags = tag_names[rng() % 4];
    TagConfig tag_config = *TagConfig::Parse(tags);
    if (q % 2 == 0) {
      const TopicAnalysis &t = study_->topics[rng() % study_->topics.size()];
      const std::string layout = layouts[rng() % 4];
      const uint64_t seed = rng() % 1000;
      auto r = Get("/topics/" + t.topic.id + "/overview?layout=" + layout + "&tags=" + tags +
                   "&seed=" + std::to_string(seed));
      ASSERT_TRUE(r);
      ASSERT_EQ(r->status, 200);
      EXPECT_EQ(r->body, SerializeOverview(BuildOverview(t, study_->corpus, ParseLayout(layout),
                                                         tag_config, seed)));
    } else {
      const Article *a = articles[rng() % articles.size()];
      const std::string mode = modes[rng() % 4];
      auto r = Get("/articles/" + a->id + "/view?highlight=" + mode + "&tags=" + tags);
      ASSERT_TRUE(r);
      ASSERT_EQ(r->status, 200);
      EXPECT_EQ(r->body,
                SerializeArticleView(BuildArticleView(*a, *study_->TopicOfArticle(a->id),
                                                      *ParseHighlightMode(mode), tag_config)));
    }
  }
}

TEST(SnapshotCatalogTest, RejectsEmptyAndCollidingDirectories) {
  testing::TempDir dir;
  auto expect_corrupt = [&] {
    try {
      SnapshotCatalog::LoadDirectory(dir.path());
      ADD_FAILURE();
    } catch (const Error &e) {
      EXPECT_EQ(e.code(), ErrorCode::kSnapshotCorrupt);
    }
  };
  expect_corrupt();
  Snapshot mini = testing::MiniSnapshot();
  WriteSnapshot(dir / "one.json", mini);
  EXPECT_EQ(SnapshotCatalog::LoadDirectory(dir.path()).topics.size(), 1u);
  WriteSnapshot(dir / "two.json", mini);
  expect_corrupt();
}

TEST(SnapshotStoreTest, ReloadKeepsCatalogOnFailure) {
  testing::TempDir dir;
  WriteSnapshot(dir / "one.json", testing::MiniSnapshot());
  SnapshotStore store(dir.path());
  auto before = store.Current();
  std::filesystem::remove(dir / "one.json");
  EXPECT_THROW(store.Reload(), Error);
  EXPECT_EQ(store.Current(), before);
}

TEST(BindAddressTest, Parse) {
  EXPECT_EQ(ParseBindAddress("127.0.0.1:8080"), std::make_pair(std::string("127.0.0.1"), 8080));
  EXPECT_EQ(ParseBindAddress("[::1]:0"), std::make_pair(std::string("::1"), 0));
  for (const char *bad : {"localhost", ":80", "host:", "host:65536", "host:x", "host:-1"}) {
    try {
      ParseBindAddress(bad);
      ADD_FAILURE() << bad;
    } catch (const Error &e) {
      EXPECT_EQ(e.code(), ErrorCode::kInvalidConfig) << bad;
    }
  }
}

TEST(HttpServerTest, BindFailureIsReported) {
  auto store = std::make_shared<SnapshotStore>(
      SnapshotCatalog::Build({testing::MiniSnapshot()}));
  HttpServer first(store);
  int port = first.Bind("127.0.0.1", 0);
  std::thread thread([&] { first.Run(); });
  first.WaitUntilReady();
  HttpServer second(store);
  try {
    second.Bind("127.0.0.1", port);
    ADD_FAILURE() << "second bind succeeded";
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kBindFailed);
  }
  first.Stop();
  thread.join();
}

TEST(ApiServiceTest, WorksWithoutTransport) {
  auto store = std::make_shared<SnapshotStore>(
      SnapshotCatalog::Build({testing::MiniSnapshot()}));
  ApiService api(store);
  ApiResponse r = api.Handle("GET", "/topics/mini/overview", {{"layout", "mfap"}});
  EXPECT_EQ(r.status, 200);
  EXPECT_EQ(Json::parse(r.body)["mfa"], "Nora Lind");
  EXPECT_EQ(api.Handle("DELETE", "/topics", {}).status, 405);
}

}  // namespace
}  // namespace newslens
