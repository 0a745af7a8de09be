#ifndef NEWSLENS_CORPUS_H_
#define NEWSLENS_CORPUS_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace newslens {

// Self-declared political orientation of an article's outlet. Never inferred.
enum class Orientation { kLeft, kCenter, kRight, kUnknown };

const char *OrientationName(Orientation orientation);
std::optional<Orientation> ParseOrientation(std::string_view name);

struct Article {
  std::string id;
  std::string topic_id;
  std::string outlet;
  Orientation orientation = Orientation::kUnknown;
  std::string title;
  std::optional<std::string> excerpt;
  std::string body;
  std::string published_at;
  std::optional<std::string> url;

  bool operator==(const Article &) const = default;
};

// A named event and the ordered ids of the articles reporting on it.
struct Topic {
  std::string id;
  std::string name;
  std::vector<std::string> article_ids;

  bool operator==(const Topic &) const = default;
};

// Immutable set of topics and their articles. Articles are kept sorted by
// (topic_id, id) regardless of input order.
class Corpus {
 public:
  // Validates every article and normalizes ordering. Throws Error with
  // kEmptyCorpus or kDuplicateId.
  explicit Corpus(std::vector<Article> articles);

  const std::vector<Article> &articles() const { return articles_; }
  const std::vector<Topic> &topics() const { return topics_; }

  // nullptr if absent.
  const Article *FindArticle(std::string_view id) const;
  const Topic *FindTopic(std::string_view id) const;

  // Articles of one topic in corpus order.
  std::vector<const Article *> TopicArticles(std::string_view topic_id) const;

  bool operator==(const Corpus &other) const {
    return articles_ == other.articles_;
  }

 private:
  std::vector<Article> articles_;
  std::vector<Topic> topics_;
};

struct LoadOptions {
  // Unknown record fields are rejected unless lenient, in which case they
  // are dropped and reported through `warnings`.
  bool lenient = false;
  std::vector<std::string> *warnings = nullptr;
};

// Parses the line-delimited corpus format: one JSON object per line, blank
// lines ignored. Throws Error (kMalformedRecord with the 1-based line,
// kDuplicateId, kEmptyCorpus).
Corpus ParseCorpus(std::string_view content, const LoadOptions &options = {});
Corpus LoadCorpus(const std::filesystem::path &path,
                  const LoadOptions &options = {});

// One record, no trailing newline. Field order is fixed.
std::string SerializeArticle(const Article &article);
// Every article, one per line, in corpus order.
std::string SerializeCorpus(const Corpus &corpus);

// Checks the Article invariants that do not depend on the rest of the
// corpus. Returns the reason on failure.
std::optional<std::string> ValidateArticle(const Article &article);

bool IsIso8601Timestamp(std::string_view value);

}  // namespace newslens

#endif  // NEWSLENS_CORPUS_H_
