#ifndef NEWSLENS_PIPELINE_H_
#define NEWSLENS_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "newslens/corpus.h"
#include "newslens/framing.h"
#include "newslens/persons.h"
#include "newslens/polarity.h"
#include "newslens/textproc.h"

namespace newslens {

// Per-article results of the text, person and polarity stages.
struct ArticleAnalysis {
  std::string article_id;
  std::vector<Span> sentences;  // into the body
  std::vector<PersonMention> mentions;  // resolved, person_id set
  // Label of every sentence that mentions the MFA, keyed by sentence index.
  std::map<int, PolarityLabel> mfa_labels;
  ArticlePolarity polarity;  // toward the MFA

  bool operator==(const ArticleAnalysis &) const = default;
};

struct TopicAnalysis {
  Topic topic;
  std::vector<Person> persons;
  EventAnalysis event;
  std::vector<ArticleAnalysis> articles;  // topic order

  const ArticleAnalysis *FindArticle(std::string_view id) const;
  const Person *FindPerson(std::string_view id) const;
  bool operator==(const TopicAnalysis &) const = default;
};

struct AnalysisConfig {
  double theta = kDefaultTheta;
  uint64_t seed = 0;
  int jobs = 1;
  std::string created_at;
};

// Immutable result of one analysis run, including the articles themselves
// so that views can be assembled without the original corpus file.
struct Snapshot {
  std::string corpus_digest;  // SHA-256 of SerializeCorpus(corpus)
  std::string created_at;
  double theta = kDefaultTheta;
  ClassifierInfo classifier;
  uint64_t seed = 0;
  Corpus corpus;
  std::vector<TopicAnalysis> topics;

  const TopicAnalysis *FindTopic(std::string_view id) const;
  // Topic analysis containing the article, nullptr if none.
  const TopicAnalysis *TopicOfArticle(std::string_view article_id) const;
};

std::string CorpusDigest(const Corpus &corpus);

// Runs segmentation, mention detection, person resolution, MFA selection,
// sentence classification, aggregation and framing for every topic.
// Per-article stages fan out over config.jobs threads; the output does not
// depend on the thread count.
Snapshot AnalyzeCorpus(const Corpus &corpus, const Gazetteer &gazetteer,
                       const TargetClassifier &classifier,
                       const AnalysisConfig &config);

// Analysis of one topic's articles (corpus order).
TopicAnalysis AnalyzeTopic(const Topic &topic,
                           const std::vector<const Article *> &articles,
                           const Gazetteer &gazetteer,
                           const TargetClassifier &classifier,
                           const AnalysisConfig &config);

// Snapshot serialization: a single JSON document with sorted keys.
std::string SerializeSnapshot(const Snapshot &snapshot);
// Throws Error(kSnapshotCorrupt) for malformed input or a digest mismatch.
Snapshot ParseSnapshot(std::string_view content);
Snapshot LoadSnapshot(const std::filesystem::path &path);

// MFA, group sizes and representatives per topic, for humans.
std::string SummarizeSnapshot(const Snapshot &snapshot);

}  // namespace newslens

#endif  // NEWSLENS_PIPELINE_H_
