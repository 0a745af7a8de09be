#ifndef NEWSLENS_FRAMING_H_
#define NEWSLENS_FRAMING_H_

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "newslens/corpus.h"
#include "newslens/polarity.h"

namespace newslens {

// Dense term vectors for the articles of one topic, aligned with the input
// order. All vectors share `vocabulary`.
struct TopicVectors {
  std::vector<std::string> vocabulary;  // sorted
  std::vector<std::vector<double>> vectors;
};

// Source of article vectors for relevance scoring. The default is
// topic-local TF-IDF; pretrained embeddings can be plugged in here.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual TopicVectors Embed(const std::vector<const Article *> &articles) const = 0;
};

// Raw term counts of lowercased title + body tokens, weighted by the
// smoothed inverse document frequency ln((1 + n) / (1 + df)) + 1 within the
// topic, then L2-normalized.
class TfIdfProvider : public EmbeddingProvider {
 public:
  TopicVectors Embed(const std::vector<const Article *> &articles) const override;
};

// Cosine similarity clamped to [0, 1]. Zero vectors score 0.
double ClampedCosine(const std::vector<double> &a, const std::vector<double> &b);

// L2-normalized mean of the selected vectors.
std::vector<double> Centroid(const std::vector<std::vector<double>> &vectors,
                             const std::vector<size_t> &members);

struct EventAnalysis {
  std::string topic_id;
  std::string mfa;  // person id
  // Keyed by positive, ambivalent, negative. Each list is ordered by group
  // relevance (descending, ties by id). Groups without articles are absent.
  std::map<PolarityGroup, std::vector<std::string>> groups;
  std::map<PolarityGroup, std::string> representative;
  std::string main_article;
  // Cosine scores rounded to 12 decimals.
  std::map<std::string, double> event_relevance;
  // Only articles that belong to a group.
  std::map<std::string, double> group_relevance;
  // All articles except the main one and the representatives, by event
  // relevance descending (ties by id).
  std::vector<std::string> further_articles;
  uint64_t seed = 0;

  bool operator==(const EventAnalysis &) const = default;
};

// `polarities` is aligned with `articles` and holds each article's polarity
// toward the MFA. Every argmax tie goes to the smaller article id.
EventAnalysis AnalyzeEvent(const std::string &topic_id,
                           const std::vector<const Article *> &articles,
                           const std::string &mfa,
                           const std::vector<ArticlePolarity> &polarities,
                           const EmbeddingProvider &provider, uint64_t seed);

}  // namespace newslens

#endif  // NEWSLENS_FRAMING_H_
