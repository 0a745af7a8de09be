#ifndef NEWSLENS_SERVER_H_
#define NEWSLENS_SERVER_H_

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "newslens/pipeline.h"
#include "newslens/vizmodel.h"

namespace httplib {
class Server;
}

namespace newslens {

// Every snapshot found in a directory, indexed by topic and article id.
struct SnapshotCatalog {
  std::vector<Snapshot> snapshots;
  std::map<std::string, std::pair<size_t, size_t>> topics;  // -> (snapshot, topic)
  std::map<std::string, size_t> articles;                   // -> snapshot

  // Throws Error(kSnapshotCorrupt) when empty or when ids collide.
  static SnapshotCatalog Build(std::vector<Snapshot> snapshots);
  // Loads every *.json file in `dir`, sorted by file name.
  static SnapshotCatalog LoadDirectory(const std::filesystem::path &dir);
};

// Holds the catalog being served. Readers take a reference-counted copy;
// Reload swaps in a fresh catalog without disturbing in-flight requests.
class SnapshotStore {
 public:
  explicit SnapshotStore(std::filesystem::path dir);
  explicit SnapshotStore(SnapshotCatalog catalog);

  std::shared_ptr<const SnapshotCatalog> Current() const;
  // Keeps the old catalog and rethrows if the directory no longer loads.
  void Reload();

 private:
  std::filesystem::path dir_;
  mutable std::mutex mu_;
  std::shared_ptr<const SnapshotCatalog> catalog_;
};

struct ApiResponse {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

// Request routing independent of the HTTP transport. Bodies of successful
// view requests are exactly SerializeOverview / SerializeArticleView of the
// in-process models; errors are {"error": ..., "detail": ...}.
class ApiService {
 public:
  explicit ApiService(std::shared_ptr<SnapshotStore> store, VizConfig config = {});

  ApiResponse Handle(const std::string &method, const std::string &path,
                     const std::multimap<std::string, std::string> &params) const;

 private:
  ApiResponse Topics(const SnapshotCatalog &catalog) const;
  ApiResponse Overview(const SnapshotCatalog &catalog, const std::string &topic_id,
                       const std::multimap<std::string, std::string> &params) const;
  ApiResponse ArticleView(const SnapshotCatalog &catalog, const std::string &article_id,
                          const std::multimap<std::string, std::string> &params) const;

  std::shared_ptr<SnapshotStore> store_;
  VizConfig config_;
};

std::string ErrorBody(const std::string &error, const std::string &detail);

// Splits "host:port". Throws Error(kInvalidConfig).
std::pair<std::string, int> ParseBindAddress(const std::string &bind);

// Read-only HTTP front end for ApiService.
class HttpServer {
 public:
  explicit HttpServer(std::shared_ptr<SnapshotStore> store, VizConfig config = {});
  ~HttpServer();

  // Binds without serving yet. Returns the bound port (useful with port 0).
  // Throws Error(kBindFailed).
  int Bind(const std::string &host, int port);
  // Blocks until Stop().
  void Run();
  // Blocks until Run() is accepting connections.
  void WaitUntilReady() const;
  void Stop();

  // Called before each request; a true return reloads the store.
  void SetReloadCheck(std::function<bool()> check) { reload_check_ = std::move(check); }

 private:
  std::shared_ptr<SnapshotStore> store_;
  ApiService service_;
  std::unique_ptr<httplib::Server> server_;
  std::function<bool()> reload_check_;
};

}  // namespace newslens

#endif  // NEWSLENS_SERVER_H_
