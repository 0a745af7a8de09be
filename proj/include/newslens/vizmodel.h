#ifndef NEWSLENS_VIZMODEL_H_
#define NEWSLENS_VIZMODEL_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "newslens/corpus.h"
#include "newslens/pipeline.h"
#include "newslens/textproc.h"

namespace newslens {

enum class Layout { kPlain, kPolsides, kMfap, kMfapRandom };
const char *LayoutName(Layout layout);
// Throws Error(kUnknownLayout).
Layout ParseLayout(std::string_view name);

enum class HighlightMode { kDisabled, kSingle, kTwo, kThree };
const char *HighlightModeName(HighlightMode mode);
std::optional<HighlightMode> ParseHighlightMode(std::string_view name);

enum class HighlightColor { kGreen, kRed, kGray };
const char *HighlightColorName(HighlightColor color);

enum class TagKind { kPolsides, kMfap };

struct TagConfig {
  bool polsides = false;
  bool mfap = false;

  // "none", "polsides", "mfap" or "both".
  static std::optional<TagConfig> Parse(std::string_view name);
  std::string Name() const;
  bool operator==(const TagConfig &) const = default;
};

struct Tag {
  TagKind kind;
  // Orientation name for polsides, polarity group name for mfap.
  std::string value;
  bool operator==(const Tag &) const = default;
};

struct Card {
  std::string article_id;
  std::string title;
  std::optional<std::string> excerpt;  // absent on headline-only rows
  std::vector<Tag> tags;
  bool operator==(const Card &) const = default;
};

struct GroupColumn {
  std::string group;        // left/center/right or positive/ambivalent/negative
  std::string group_label;  // left/center/right or pro-mfa/ambivalent/anti-mfa
  std::string explanation_text;
  std::vector<Card> cards;
  bool operator==(const GroupColumn &) const = default;
};

struct OverviewModel {
  Layout layout = Layout::kPlain;
  std::string topic_id;
  std::optional<std::string> mfa_name;  // mfap layouts only
  std::optional<Card> main;
  std::vector<GroupColumn> groups;
  std::vector<Card> further;
  TagConfig tag_config;
  uint64_t seed = 0;
  bool operator==(const OverviewModel &) const = default;
};

struct Highlight {
  int sentence_index = 0;
  Span span;  // into the sentence
  HighlightColor color = HighlightColor::kGray;
  bool operator==(const Highlight &) const = default;
};

struct ContextPoint {
  std::string article_id;
  double x = 0.5;  // (s + 1) / 2
  bool is_current = false;
  bool operator==(const ContextPoint &) const = default;
};

struct ArticleViewModel {
  std::string article_id;
  std::string topic_id;
  std::string title;
  std::string body;
  std::vector<Span> sentences;
  std::string mfa_name;
  HighlightMode highlight_mode = HighlightMode::kDisabled;
  std::vector<Highlight> highlights;
  std::vector<ContextPoint> context_bar;  // by x, then article id
  std::vector<Tag> tags;
  TagConfig tag_config;
  bool operator==(const ArticleViewModel &) const = default;
};

struct VizConfig {
  // Column explanations keyed "<layout>.<group>", e.g. "mfap.positive".
  // "{mfa}" expands to the MFA's name. mfap_random uses the mfap texts.
  std::map<std::string, std::string> explanations = DefaultExplanations();
  size_t excerpt_limit = 220;  // characters

  static std::map<std::string, std::string> DefaultExplanations();
};

// Provided excerpt, else the first sentence cut to `limit` characters at a
// word boundary.
std::string CardExcerpt(const Article &article, const ArticleAnalysis &analysis,
                        size_t limit);

// Column index in [0, 3) for the randomized layout; depends only on the
// seed and the article id.
int RandomColumn(uint64_t seed, std::string_view article_id);

OverviewModel BuildOverview(const TopicAnalysis &analysis, const Corpus &corpus,
                            Layout layout, TagConfig tags, uint64_t seed,
                            const VizConfig &config = {});

// Throws Error(kArticleNotInTopic) when the article has no analysis in the
// topic.
ArticleViewModel BuildArticleView(const Article &article,
                                  const TopicAnalysis &analysis,
                                  HighlightMode mode, TagConfig tags);

// Compact JSON; field names and enum spellings are the public contract.
std::string SerializeOverview(const OverviewModel &model);
std::string SerializeArticleView(const ArticleViewModel &model);

}  // namespace newslens

#endif  // NEWSLENS_VIZMODEL_H_
