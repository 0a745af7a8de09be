#include "newslens/cli.h"

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdlib>
#include <ctime>
#include <iostream>
#include <memory>
#include <thread>

#include "CLI11.hpp"
#include "newslens/conjoint.h"
#include "newslens/corpus.h"
#include "newslens/error.h"
#include "newslens/fetch.h"
#include "newslens/pipeline.h"
#include "newslens/polarity.h"
#include "newslens/server.h"
#include "newslens/sidecar_client.h"
#include "newslens/textproc.h"
#include "newslens/util.h"

namespace newslens {
namespace {

constexpr int kUsageStatus = 2;

struct AnalyzeFlags {
  std::string corpus;
  std::string gazetteer;
  std::string lexicon;
  std::string negations;
  double theta = kDefaultTheta;
  std::string classifier = "lexicon";
  std::string sidecar_url;
  uint64_t seed = 0;
  std::string out;
  int jobs = 0;
  bool lenient = false;
};

struct AmceFlags {
  std::string responses;
  std::string baselines;
  std::string se = "cluster";
  std::string out;
};

struct ServeFlags {
  std::string bind;
  std::string snapshots;
};

struct FetchFlags {
  std::string url;
  std::string id;
  std::string topic_id;
  std::string outlet;
  std::string orientation = "unknown";
  std::string published_at;
  std::string out;
  size_t min_block_length = 300;
};

std::atomic<bool> reload_requested{false};
std::atomic<bool> stop_requested{false};

extern "C" void OnSighup(int) { reload_requested = true; }
extern "C" void OnStop(int) { stop_requested = true; }

std::string FormatEpoch(int64_t seconds) {
  std::time_t t = static_cast<std::time_t>(seconds);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buffer;
}

int Analyze(const AnalyzeFlags &flags, std::ostream &out, std::ostream &err) {
  if (!(flags.theta > 0.0 && flags.theta < 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "--theta must lie in (0, 1)");
  }
  if (flags.classifier != "lexicon" && flags.classifier != "sidecar") {
    throw Error(ErrorCode::kInvalidConfig, "--classifier must be lexicon or sidecar");
  }
  if (flags.classifier == "lexicon" && flags.lexicon.empty()) {
    throw Error(ErrorCode::kInvalidConfig, "--lexicon is required with the lexicon classifier");
  }
  if (flags.classifier == "sidecar" && flags.sidecar_url.empty()) {
    throw Error(ErrorCode::kInvalidConfig, "--sidecar-url is required with the sidecar classifier");
  }

  std::vector<std::string> warnings;
  Corpus corpus = LoadCorpus(flags.corpus, LoadOptions{flags.lenient, &warnings});
  for (const std::string &w : warnings) err << "warning: " << w << "\n";
  Gazetteer gazetteer;
  if (!flags.gazetteer.empty()) gazetteer = Gazetteer::Load(flags.gazetteer);
  NegationList negations = flags.negations.empty() ? NegationList::Default()
                                                   : NegationList::Load(flags.negations);

  std::shared_ptr<const TargetClassifier> lexicon;
  if (!flags.lexicon.empty()) {
    lexicon = std::make_shared<LexiconClassifier>(Lexicon::Load(flags.lexicon), negations);
  }
  std::shared_ptr<const TargetClassifier> classifier = lexicon;
  if (flags.classifier == "sidecar") {
    auto sidecar = std::make_shared<SidecarClassifier>(SidecarOptions{flags.sidecar_url});
    sidecar->Probe();
    classifier = lexicon ? std::shared_ptr<const TargetClassifier>(
                               std::make_shared<FallbackClassifier>(sidecar, lexicon))
                         : sidecar;
  }

  AnalysisConfig config;
  config.theta = flags.theta;
  config.seed = flags.seed;
  config.jobs = flags.jobs > 0 ? flags.jobs
                               : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  config.created_at = SnapshotTimestamp(corpus);
  Snapshot snapshot = AnalyzeCorpus(corpus, gazetteer, *classifier, config);

  std::filesystem::path dir(flags.out);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + dir.string() + ": " + ec.message());
  std::string serialized = SerializeSnapshot(snapshot);
  WriteFile(dir / "snapshot.json", serialized);
  // Read back so that a zero exit status guarantees a loadable snapshot.
  Snapshot reloaded = LoadSnapshot(dir / "snapshot.json");
  if (SerializeSnapshot(reloaded) != serialized) {
    throw Error(ErrorCode::kSnapshotCorrupt, "snapshot does not round-trip");
  }
  std::string summary = SummarizeSnapshot(snapshot);
  WriteFile(dir / "summary.txt", summary);
  out << summary;
  return 0;
}

int Amce(const AmceFlags &flags, std::ostream &out) {
  auto se_mode = ParseSeMode(flags.se);
  if (!se_mode) throw Error(ErrorCode::kInvalidConfig, "--se must be classical or cluster");
  ConjointData data = LoadResponses(flags.responses);
  std::vector<AmceEstimate> estimates =
      EstimateAmce(data, ParseBaselines(flags.baselines), *se_mode);
  out << FormatAmceTable(estimates);
  if (!flags.out.empty()) WriteFile(flags.out, SerializeAmceRecords(estimates));
  return 0;
}

int Serve(const ServeFlags &flags, std::ostream &out) {
  std::string bind = flags.bind;
  std::string dir = flags.snapshots;
  if (bind.empty()) {
    const char *env = std::getenv("NEWSLENS_BIND");
    bind = env && *env ? env : "127.0.0.1:8080";
  }
  if (dir.empty()) {
    const char *env = std::getenv("NEWSLENS_SNAPSHOTS");
    if (env == nullptr || *env == '\0') {
      throw Error(ErrorCode::kInvalidConfig, "--snapshots or NEWSLENS_SNAPSHOTS is required");
    }
    dir = env;
  }
  auto [host, port] = ParseBindAddress(bind);
  auto store = std::make_shared<SnapshotStore>(std::filesystem::path(dir));
  HttpServer server(store);
  int bound = server.Bind(host, port);
  server.SetReloadCheck([] { return reload_requested.exchange(false); });

  reload_requested = false;
  stop_requested = false;
  std::signal(SIGHUP, OnSighup);
  std::signal(SIGINT, OnStop);
  std::signal(SIGTERM, OnStop);
  std::thread watcher([&server] {
    while (!stop_requested) std::this_thread::sleep_for(std::chrono::milliseconds(100));
    server.Stop();
  });
  out << "serving " << dir << " on " << host << ":" << bound << std::endl;
  server.Run();
  stop_requested = true;
  watcher.join();
  return 0;
}

int Fetch(const FetchFlags &flags, std::ostream &out) {
  auto orientation = ParseOrientation(flags.orientation);
  if (!orientation) {
    throw Error(ErrorCode::kInvalidConfig, "unknown orientation '" + flags.orientation + "'");
  }
  FetchOptions options;
  options.min_block_length = flags.min_block_length;
  ArticleDraft draft = FetchArticle(flags.url, options);
  Article article;
  article.id = flags.id;
  article.topic_id = flags.topic_id;
  article.outlet = flags.outlet;
  article.orientation = *orientation;
  article.title = draft.title;
  article.body = draft.body;
  article.published_at = flags.published_at;
  article.url = draft.url;
  if (auto reason = ValidateArticle(article)) {
    throw Error(ErrorCode::kInvalidInput, *reason);
  }
  std::string line = SerializeArticle(article) + "\n";
  if (flags.out.empty()) {
    out << line;
  } else {
    std::string existing;
    if (std::filesystem::exists(flags.out)) existing = ReadFile(flags.out);
    if (!existing.empty() && existing.back() != '\n') existing += '\n';
    WriteFile(flags.out, existing + line);
  }
  return 0;
}

}  // namespace

std::string SnapshotTimestamp(const Corpus &corpus) {
  if (const char *epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch && *epoch) {
    char *end = nullptr;
    long long seconds = std::strtoll(epoch, &end, 10);
    if (end != epoch && *end == '\0' && seconds >= 0) return FormatEpoch(seconds);
  }
  std::string latest;
  for (const Article &a : corpus.articles()) latest = std::max(latest, a.published_at);
  return latest;
}

int RunCli(const std::vector<std::string> &args, std::ostream &out,
           std::ostream &err) {
  CLI::App app{"News bias analysis pipeline"};
  app.require_subcommand(1);

  AnalyzeFlags analyze;
  CLI::App *analyze_cmd = app.add_subcommand("analyze", "Analyze a corpus into a snapshot");
  analyze_cmd->add_option("--corpus", analyze.corpus, "Corpus file (JSON lines)")->required();
  analyze_cmd->add_option("--gazetteer", analyze.gazetteer, "Person gazetteer (TSV)");
  analyze_cmd->add_option("--lexicon", analyze.lexicon, "Polarity lexicon (TSV)");
  analyze_cmd->add_option("--negations", analyze.negations, "Negation word list");
  analyze_cmd->add_option("--theta", analyze.theta, "Grouping threshold in (0,1)");
  analyze_cmd->add_option("--classifier", analyze.classifier, "lexicon or sidecar");
  analyze_cmd->add_option("--sidecar-url", analyze.sidecar_url, "Sidecar base URL");
  analyze_cmd->add_option("--seed", analyze.seed, "Seed for randomized layouts");
  analyze_cmd->add_option("--out", analyze.out, "Output directory")->required();
  analyze_cmd->add_option("--jobs", analyze.jobs, "Worker threads (default: processors)");
  analyze_cmd->add_flag("--lenient", analyze.lenient, "Drop unknown record fields");

  AmceFlags amce;
  CLI::App *amce_cmd = app.add_subcommand("amce", "Estimate AMCEs from conjoint responses");
  amce_cmd->add_option("--responses", amce.responses, "Response CSV")->required();
  amce_cmd->add_option("--baselines", amce.baselines, "attr=level,...");
  amce_cmd->add_option("--se", amce.se, "classical or cluster");
  amce_cmd->add_option("--out", amce.out, "Record file (JSON lines)");

  ServeFlags serve;
  CLI::App *serve_cmd = app.add_subcommand("serve", "Serve snapshots over HTTP");
  serve_cmd->add_option("--bind", serve.bind, "host:port (env NEWSLENS_BIND)");
  serve_cmd->add_option("--snapshots", serve.snapshots, "Snapshot directory (env NEWSLENS_SNAPSHOTS)");

  FetchFlags fetch;
  CLI::App *fetch_cmd = app.add_subcommand("fetch", "Fetch a web article as a corpus record");
  fetch_cmd->add_option("url", fetch.url, "Article URL")->required();
  fetch_cmd->add_option("--id", fetch.id, "Article id")->required();
  fetch_cmd->add_option("--topic", fetch.topic_id, "Topic id")->required();
  fetch_cmd->add_option("--outlet", fetch.outlet, "Outlet name")->required();
  fetch_cmd->add_option("--orientation", fetch.orientation, "left|center|right|unknown");
  fetch_cmd->add_option("--published-at", fetch.published_at, "ISO-8601 timestamp")->required();
  fetch_cmd->add_option("--min-block", fetch.min_block_length, "Minimum text block length");
  fetch_cmd->add_option("--out", fetch.out, "Append to this corpus file");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp &) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError &e) {
    err << "error: " << e.what() << "\n";
    return kUsageStatus;
  }

  try {
    if (analyze_cmd->parsed()) return Analyze(analyze, out, err);
    if (amce_cmd->parsed()) return Amce(amce, out);
    if (serve_cmd->parsed()) return Serve(serve, out);
    if (fetch_cmd->parsed()) return Fetch(fetch, out);
  } catch (const Error &e) {
    err << "error: " << e.what() << "\n";
    return ExitStatus(e.code());
  } catch (const std::exception &e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return kUsageStatus;
}

}  // namespace newslens
