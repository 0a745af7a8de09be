#include "newslens/server.h"

#include <algorithm>
#include <charconv>
#include <iostream>

#include "httplib.h"
#include "json.hpp"
#include "newslens/error.h"

namespace newslens {
namespace {

using Json = nlohmann::json;

ApiResponse ErrorResponse(int status, const std::string &error,
                          const std::string &detail) {
  return ApiResponse{status, "application/json", ErrorBody(error, detail)};
}

ApiResponse FromError(const Error &e) {
  int status = 500;
  switch (e.code()) {
    case ErrorCode::kUnknownLayout:
    case ErrorCode::kInvalidConfig:
    case ErrorCode::kInvalidInput:
      status = 400;
      break;
    case ErrorCode::kArticleNotInTopic:
      status = 404;
      break;
    default:
      break;
  }
  return ErrorResponse(status, ErrorCodeName(e.code()), e.detail());
}

std::optional<std::string> Param(const std::multimap<std::string, std::string> &params,
                                 const std::string &key) {
  auto it = params.find(key);
  if (it == params.end()) return std::nullopt;
  return it->second;
}

std::optional<uint64_t> ParseUint64(const std::string &s) {
  uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return value;
}

// "/topics/{id}/overview" -> id, when `path` has that shape.
std::optional<std::string> Segment(const std::string &path, const std::string &prefix,
                                   const std::string &suffix) {
  if (path.size() <= prefix.size() + suffix.size()) return std::nullopt;
  if (path.compare(0, prefix.size(), prefix) != 0) return std::nullopt;
  if (path.compare(path.size() - suffix.size(), suffix.size(), suffix) != 0) {
    return std::nullopt;
  }
  std::string id = path.substr(prefix.size(), path.size() - prefix.size() - suffix.size());
  if (id.empty() || id.find('/') != std::string::npos) return std::nullopt;
  return id;
}

}  // namespace

std::string ErrorBody(const std::string &error, const std::string &detail) {
  return Json{{"error", error}, {"detail", detail}}.dump();
}

SnapshotCatalog SnapshotCatalog::Build(std::vector<Snapshot> snapshots) {
  if (snapshots.empty()) throw Error(ErrorCode::kSnapshotCorrupt, "no snapshots found");
  SnapshotCatalog catalog;
  catalog.snapshots = std::move(snapshots);
  for (size_t s = 0; s < catalog.snapshots.size(); ++s) {
    const Snapshot &snapshot = catalog.snapshots[s];
    for (size_t t = 0; t < snapshot.topics.size(); ++t) {
      const std::string &id = snapshot.topics[t].topic.id;
      if (!catalog.topics.emplace(id, std::make_pair(s, t)).second) {
        throw Error(ErrorCode::kSnapshotCorrupt, "topic '" + id + "' appears twice");
      }
    }
    for (const Article &a : snapshot.corpus.articles()) {
      if (!catalog.articles.emplace(a.id, s).second) {
        throw Error(ErrorCode::kSnapshotCorrupt, "article '" + a.id + "' appears twice");
      }
    }
  }
  return catalog;
}

SnapshotCatalog SnapshotCatalog::LoadDirectory(const std::filesystem::path &dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw Error(ErrorCode::kSnapshotCorrupt, dir.string() + " is not a directory");
  }
  std::vector<std::filesystem::path> files;
  for (const auto &entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<Snapshot> snapshots;
  for (const auto &f : files) snapshots.push_back(LoadSnapshot(f));
  return Build(std::move(snapshots));
}

SnapshotStore::SnapshotStore(std::filesystem::path dir)
    : dir_(std::move(dir)),
      catalog_(std::make_shared<const SnapshotCatalog>(
          SnapshotCatalog::LoadDirectory(dir_))) {}

SnapshotStore::SnapshotStore(SnapshotCatalog catalog)
    : catalog_(std::make_shared<const SnapshotCatalog>(std::move(catalog))) {}

std::shared_ptr<const SnapshotCatalog> SnapshotStore::Current() const {
  std::lock_guard<std::mutex> lock(mu_);
  return catalog_;
}

void SnapshotStore::Reload() {
  if (dir_.empty()) return;
  auto fresh = std::make_shared<const SnapshotCatalog>(SnapshotCatalog::LoadDirectory(dir_));
  std::lock_guard<std::mutex> lock(mu_);
  catalog_ = std::move(fresh);
}

ApiService::ApiService(std::shared_ptr<SnapshotStore> store, VizConfig config)
    : store_(std::move(store)), config_(std::move(config)) {}

ApiResponse ApiService::Handle(
    const std::string &method, const std::string &path,
    const std::multimap<std::string, std::string> &params) const {
  if (method != "GET") {
    return ErrorResponse(405, "MethodNotAllowed", "the API is read-only");
  }
  if (path == "/health") return ApiResponse{200, "text/plain", "ok"};
  auto catalog = store_->Current();
  try {
    if (path == "/topics") return Topics(*catalog);
    if (auto id = Segment(path, "/topics/", "/overview")) {
      return Overview(*catalog, *id, params);
    }
    if (auto id = Segment(path, "/articles/", "/view")) {
      return ArticleView(*catalog, *id, params);
    }
  } catch (const Error &e) {
    return FromError(e);
  }
  return ErrorResponse(404, "NotFound", "no route for " + path);
}

ApiResponse ApiService::Topics(const SnapshotCatalog &catalog) const {
  Json out = Json::array();
  for (const auto &[id, where] : catalog.topics) {
    const Snapshot &snapshot = catalog.snapshots[where.first];
    const TopicAnalysis &t = snapshot.topics[where.second];
    const Person *mfa = t.FindPerson(t.event.mfa);
    out.push_back(Json{{"id", t.topic.id},
                       {"name", t.topic.name},
                       {"article_count", t.topic.article_ids.size()},
                       {"mfa", Json{{"person_id", t.event.mfa},
                                    {"name", mfa ? mfa->canonical_name : t.event.mfa}}},
                       {"corpus_digest", snapshot.corpus_digest},
                       {"created_at", snapshot.created_at}});
  }
  return ApiResponse{200, "application/json", out.dump()};
}

ApiResponse ApiService::Overview(
    const SnapshotCatalog &catalog, const std::string &topic_id,
    const std::multimap<std::string, std::string> &params) const {
  auto where = catalog.topics.find(topic_id);
  if (where == catalog.topics.end()) {
    return ErrorResponse(404, "NotFound", "unknown topic '" + topic_id + "'");
  }
  const Snapshot &snapshot = catalog.snapshots[where->second.first];
  const TopicAnalysis &topic = snapshot.topics[where->second.second];

  Layout layout = ParseLayout(Param(params, "layout").value_or("plain"));
  std::string tag_name = Param(params, "tags").value_or("none");
  auto tags = TagConfig::Parse(tag_name);
  if (!tags) return ErrorResponse(400, "InvalidInput", "unknown tags '" + tag_name + "'");
  uint64_t seed = snapshot.seed;
  if (auto raw = Param(params, "seed")) {
    auto parsed = ParseUint64(*raw);
    if (!parsed) return ErrorResponse(400, "InvalidInput", "seed must be an unsigned integer");
    seed = *parsed;
  }
  OverviewModel model = BuildOverview(topic, snapshot.corpus, layout, *tags, seed, config_);
  return ApiResponse{200, "application/json", SerializeOverview(model)};
}

ApiResponse ApiService::ArticleView(
    const SnapshotCatalog &catalog, const std::string &article_id,
    const std::multimap<std::string, std::string> &params) const {
  auto where = catalog.articles.find(article_id);
  if (where == catalog.articles.end()) {
    return ErrorResponse(404, "NotFound", "unknown article '" + article_id + "'");
  }
  const Snapshot &snapshot = catalog.snapshots[where->second];
  const Article *article = snapshot.corpus.FindArticle(article_id);
  const TopicAnalysis *topic = snapshot.TopicOfArticle(article_id);
  if (article == nullptr || topic == nullptr) {
    return ErrorResponse(404, "NotFound", "unknown article '" + article_id + "'");
  }
  std::string mode_name = Param(params, "highlight").value_or("disabled");
  auto mode = ParseHighlightMode(mode_name);
  if (!mode) {
    return ErrorResponse(400, "InvalidInput", "unknown highlight mode '" + mode_name + "'");
  }
  std::string tag_name = Param(params, "tags").value_or("none");
  auto tags = TagConfig::Parse(tag_name);
  if (!tags) return ErrorResponse(400, "InvalidInput", "unknown tags '" + tag_name + "'");
  ArticleViewModel view = BuildArticleView(*article, *topic, *mode, *tags);
  return ApiResponse{200, "application/json", SerializeArticleView(view)};
}

std::pair<std::string, int> ParseBindAddress(const std::string &bind) {
  size_t colon = bind.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == bind.size()) {
    throw Error(ErrorCode::kInvalidConfig, "bind address must be host:port");
  }
  std::string host = bind.substr(0, colon);
  if (host.size() > 2 && host.front() == '[' && host.back() == ']') {
    host = host.substr(1, host.size() - 2);
  }
  int port = 0;
  const std::string digits = bind.substr(colon + 1);
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), port);
  if (ec != std::errc() || ptr != digits.data() + digits.size() || port < 0 ||
      port > 65535) {
    throw Error(ErrorCode::kInvalidConfig, "invalid port in '" + bind + "'");
  }
  return {host, port};
}

HttpServer::HttpServer(std::shared_ptr<SnapshotStore> store, VizConfig config)
    : store_(store),
      service_(std::move(store), std::move(config)),
      server_(std::make_unique<httplib::Server>()) {
  // SO_REUSEADDR only: httplib's default SO_REUSEPORT would let a second
  // server share a port that is already in use.
  server_->set_socket_options([](int sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });
  server_->set_pre_routing_handler([this](const httplib::Request &,
                                          httplib::Response &) {
    if (reload_check_ && reload_check_()) {
      try {
        store_->Reload();
        std::cerr << "snapshots reloaded\n";
      } catch (const Error &e) {
        std::cerr << "reload failed, keeping previous snapshots: " << e.what() << "\n";
      }
    }
    return httplib::Server::HandlerResponse::Unhandled;
  });
  auto handler = [this](const httplib::Request &req, httplib::Response &res) {
    std::multimap<std::string, std::string> params(req.params.begin(), req.params.end());
    ApiResponse r = service_.Handle(req.method, req.path, params);
    res.status = r.status;
    res.set_content(r.body, r.content_type);
  };
  server_->Get(".*", handler);
  server_->Post(".*", handler);
  server_->Put(".*", handler);
  server_->Delete(".*", handler);
}

HttpServer::~HttpServer() = default;

int HttpServer::Bind(const std::string &host, int port) {
  int bound = port;
  if (port == 0) {
    bound = server_->bind_to_any_port(host);
  } else if (!server_->bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound <= 0) {
    throw Error(ErrorCode::kBindFailed,
                "cannot bind " + host + ":" + std::to_string(port));
  }
  return bound;
}

void HttpServer::Run() { server_->listen_after_bind(); }

void HttpServer::WaitUntilReady() const { server_->wait_until_ready(); }

void HttpServer::Stop() { server_->stop(); }

}  // namespace newslens
