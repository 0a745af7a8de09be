#include "newslens/corpus.h"

#include <algorithm>
#include <regex>
#include <tuple>
#include <unordered_set>

#include "json.hpp"
#include "newslens/error.h"
#include "newslens/util.h"

namespace newslens {
namespace {

using Json = nlohmann::json;

const char *const kRequiredFields[] = {"id",    "topic_id", "outlet",
                                       "orientation", "title", "body",
                                       "published_at"};
const char *const kOptionalFields[] = {"excerpt", "url"};

bool IsKnownField(const std::string &key) {
  for (const char *f : kRequiredFields) {
    if (key == f) return true;
  }
  for (const char *f : kOptionalFields) {
    if (key == f) return true;
  }
  return false;
}

std::string RequireString(const Json &record, const char *field, int line) {
  auto it = record.find(field);
  if (it == record.end()) {
    throw Error(ErrorCode::kMalformedRecord, line,
                std::string("missing field '") + field + "'");
  }
  if (!it->is_string()) {
    throw Error(ErrorCode::kMalformedRecord, line,
                std::string("field '") + field + "' must be a string");
  }
  return it->get<std::string>();
}

std::optional<std::string> OptionalString(const Json &record,
                                          const char *field, int line) {
  auto it = record.find(field);
  if (it == record.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) {
    throw Error(ErrorCode::kMalformedRecord, line,
                std::string("field '") + field + "' must be a string");
  }
  return it->get<std::string>();
}

Article ParseRecord(std::string_view text, int line,
                    const LoadOptions &options) {
  Json record;
  try {
    record = Json::parse(text);
  } catch (const Json::parse_error &e) {
    throw Error(ErrorCode::kMalformedRecord, line,
                std::string("invalid JSON: ") + e.what());
  }
  if (!record.is_object()) {
    throw Error(ErrorCode::kMalformedRecord, line, "record is not an object");
  }
  for (const auto &[key, value] : record.items()) {
    if (IsKnownField(key)) continue;
    if (!options.lenient) {
      throw Error(ErrorCode::kMalformedRecord, line,
                  "unknown field '" + key + "'");
    }
    if (options.warnings != nullptr) {
      options.warnings->push_back("line " + std::to_string(line) +
                                  ": ignoring unknown field '" + key + "'");
    }
  }

  Article article;
  article.id = RequireString(record, "id", line);
  article.topic_id = RequireString(record, "topic_id", line);
  article.outlet = RequireString(record, "outlet", line);
  std::string orientation = RequireString(record, "orientation", line);
  auto parsed = ParseOrientation(orientation);
  if (!parsed) {
    throw Error(ErrorCode::kMalformedRecord, line,
                "orientation '" + orientation + "' is not one of "
                "left, center, right, unknown");
  }
  article.orientation = *parsed;
  article.title = RequireString(record, "title", line);
  article.excerpt = OptionalString(record, "excerpt", line);
  article.body = RequireString(record, "body", line);
  article.published_at = RequireString(record, "published_at", line);
  article.url = OptionalString(record, "url", line);

  if (auto reason = ValidateArticle(article)) {
    throw Error(ErrorCode::kMalformedRecord, line, *reason);
  }
  return article;
}

}  // namespace

const char *OrientationName(Orientation orientation) {
  switch (orientation) {
    case Orientation::kLeft: return "left";
    case Orientation::kCenter: return "center";
    case Orientation::kRight: return "right";
    case Orientation::kUnknown: return "unknown";
  }
  return "unknown";
}

std::optional<Orientation> ParseOrientation(std::string_view name) {
  if (name == "left") return Orientation::kLeft;
  if (name == "center") return Orientation::kCenter;
  if (name == "right") return Orientation::kRight;
  if (name == "unknown") return Orientation::kUnknown;
  return std::nullopt;
}

bool IsIso8601Timestamp(std::string_view value) {
  static const std::regex kPattern(
      R"(^(\d{4})-(\d{2})-(\d{2})(T(\d{2}):(\d{2})(:(\d{2})(\.\d+)?)?)"
      R"((Z|[+-]\d{2}:?\d{2})?)?$)");
  std::match_results<std::string_view::const_iterator> m;
  if (!std::regex_match(value.begin(), value.end(), m, kPattern)) return false;
  int month = std::stoi(m[2].str());
  int day = std::stoi(m[3].str());
  if (month < 1 || month > 12 || day < 1 || day > 31) return false;
  if (m[4].matched) {
    if (std::stoi(m[5].str()) > 23 || std::stoi(m[6].str()) > 59) return false;
    if (m[8].matched && std::stoi(m[8].str()) > 60) return false;
  }
  return true;
}

std::optional<std::string> ValidateArticle(const Article &article) {
  if (article.id.empty()) return "id is empty";
  if (article.topic_id.empty()) return "topic_id is empty";
  if (TrimWhitespace(article.body).empty()) return "body is empty";
  if (!IsIso8601Timestamp(article.published_at)) {
    return "published_at '" + article.published_at + "' is not ISO-8601";
  }
  return std::nullopt;
}

Corpus::Corpus(std::vector<Article> articles) : articles_(std::move(articles)) {
  if (articles_.empty()) throw Error(ErrorCode::kEmptyCorpus, "no records");
  std::unordered_set<std::string> seen;
  for (const Article &a : articles_) {
    if (auto reason = ValidateArticle(a)) {
      throw Error(ErrorCode::kMalformedRecord, "article '" + a.id + "': " +
                                                   *reason);
    }
    if (!seen.insert(a.id).second) {
      throw Error(ErrorCode::kDuplicateId, "duplicate article id '" + a.id +
                                               "'");
    }
  }
  std::sort(articles_.begin(), articles_.end(),
            [](const Article &a, const Article &b) {
              return std::tie(a.topic_id, a.id) < std::tie(b.topic_id, b.id);
            });
  for (const Article &a : articles_) {
    if (topics_.empty() || topics_.back().id != a.topic_id) {
      topics_.push_back(Topic{a.topic_id, a.topic_id, {}});
    }
    topics_.back().article_ids.push_back(a.id);
  }
}

const Article *Corpus::FindArticle(std::string_view id) const {
  for (const Article &a : articles_) {
    if (a.id == id) return &a;
  }
  return nullptr;
}

const Topic *Corpus::FindTopic(std::string_view id) const {
  for (const Topic &t : topics_) {
    if (t.id == id) return &t;
  }
  return nullptr;
}

std::vector<const Article *> Corpus::TopicArticles(
    std::string_view topic_id) const {
  std::vector<const Article *> out;
  for (const Article &a : articles_) {
    if (a.topic_id == topic_id) out.push_back(&a);
  }
  return out;
}

Corpus ParseCorpus(std::string_view content, const LoadOptions &options) {
  std::vector<Article> articles;
  std::unordered_set<std::string> seen;
  int line_no = 0;
  for (std::string_view line : SplitLines(content)) {
    ++line_no;
    if (TrimWhitespace(line).empty()) continue;
    Article article = ParseRecord(line, line_no, options);
    if (!seen.insert(article.id).second) {
      throw Error(ErrorCode::kDuplicateId, line_no,
                  "duplicate article id '" + article.id + "'");
    }
    articles.push_back(std::move(article));
  }
  if (articles.empty()) throw Error(ErrorCode::kEmptyCorpus, "no records");
  return Corpus(std::move(articles));
}

Corpus LoadCorpus(const std::filesystem::path &path,
                  const LoadOptions &options) {
  return ParseCorpus(ReadFile(path), options);
}

std::string SerializeArticle(const Article &article) {
  nlohmann::ordered_json record;
  record["id"] = article.id;
  record["topic_id"] = article.topic_id;
  record["outlet"] = article.outlet;
  record["orientation"] = OrientationName(article.orientation);
  record["title"] = article.title;
  if (article.excerpt) record["excerpt"] = *article.excerpt;
  record["body"] = article.body;
  record["published_at"] = article.published_at;
  if (article.url) record["url"] = *article.url;
  return record.dump();
}

std::string SerializeCorpus(const Corpus &corpus) {
  std::string out;
  for (const Article &a : corpus.articles()) {
    out += SerializeArticle(a);
    out += '\n';
  }
  return out;
}

}  // namespace newslens
