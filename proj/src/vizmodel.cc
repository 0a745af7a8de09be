#include "newslens/vizmodel.h"

#include <algorithm>
#include <set>

#include "json.hpp"
#include "newslens/error.h"
#include "newslens/utf8.h"
#include "newslens/util.h"

namespace newslens {
namespace {

using Json = nlohmann::json;

uint64_t SplitMix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

uint64_t Fnv1a64(std::string_view s) {
  uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

std::string Expand(std::string text, const std::string &mfa) {
  const std::string key = "{mfa}";
  for (size_t pos = text.find(key); pos != std::string::npos;
       pos = text.find(key, pos + mfa.size())) {
    text.replace(pos, key.size(), mfa);
  }
  return text;
}

std::vector<Tag> TagsFor(const Article &article, const ArticleAnalysis &analysis,
                         TagConfig config) {
  std::vector<Tag> tags;
  if (config.polsides) {
    tags.push_back(Tag{TagKind::kPolsides, OrientationName(article.orientation)});
  }
  if (config.mfap) {
    tags.push_back(Tag{TagKind::kMfap, PolarityGroupName(analysis.polarity.group)});
  }
  return tags;
}

// Articles sorted by a relevance map, descending, ties by id.
void SortByRelevance(std::vector<std::string> &ids,
                     const std::map<std::string, double> &relevance) {
  auto score = [&](const std::string &id) {
    auto it = relevance.find(id);
    return it == relevance.end() ? 0.0 : it->second;
  };
  std::sort(ids.begin(), ids.end(), [&](const std::string &a, const std::string &b) {
    double sa = score(a);
    double sb = score(b);
    if (sa != sb) return sa > sb;
    return a < b;
  });
}

Json TagJson(const Tag &t) {
  return Json{{"kind", t.kind == TagKind::kPolsides ? "polsides" : "mfap"},
              {"value", t.value}};
}

Json TagsJson(const std::vector<Tag> &tags) {
  Json out = Json::array();
  for (const Tag &t : tags) out.push_back(TagJson(t));
  return out;
}

Json TagConfigJson(TagConfig c) {
  Json out = Json::array();
  if (c.polsides) out.push_back("polsides_tag");
  if (c.mfap) out.push_back("mfap_tag");
  return out;
}

Json CardJson(const Card &c) {
  return Json{{"article_id", c.article_id},
              {"title", c.title},
              {"excerpt", c.excerpt ? Json(*c.excerpt) : Json(nullptr)},
              {"tags", TagsJson(c.tags)}};
}

}  // namespace

const char *LayoutName(Layout layout) {
  switch (layout) {
    case Layout::kPlain: return "plain";
    case Layout::kPolsides: return "polsides";
    case Layout::kMfap: return "mfap";
    case Layout::kMfapRandom: return "mfap_random";
  }
  return "plain";
}

Layout ParseLayout(std::string_view name) {
  if (name == "plain") return Layout::kPlain;
  if (name == "polsides") return Layout::kPolsides;
  if (name == "mfap") return Layout::kMfap;
  if (name == "mfap_random") return Layout::kMfapRandom;
  throw Error(ErrorCode::kUnknownLayout, "unknown layout '" + std::string(name) + "'");
}

const char *HighlightModeName(HighlightMode mode) {
  switch (mode) {
    case HighlightMode::kDisabled: return "disabled";
    case HighlightMode::kSingle: return "single";
    case HighlightMode::kTwo: return "two";
    case HighlightMode::kThree: return "three";
  }
  return "disabled";
}

std::optional<HighlightMode> ParseHighlightMode(std::string_view name) {
  if (name == "disabled") return HighlightMode::kDisabled;
  if (name == "single") return HighlightMode::kSingle;
  if (name == "two") return HighlightMode::kTwo;
  if (name == "three") return HighlightMode::kThree;
  return std::nullopt;
}

const char *HighlightColorName(HighlightColor color) {
  switch (color) {
    case HighlightColor::kGreen: return "green";
    case HighlightColor::kRed: return "red";
    case HighlightColor::kGray: return "gray";
  }
  return "gray";
}

std::optional<TagConfig> TagConfig::Parse(std::string_view name) {
  if (name == "none") return TagConfig{false, false};
  if (name == "polsides") return TagConfig{true, false};
  if (name == "mfap") return TagConfig{false, true};
  if (name == "both") return TagConfig{true, true};
  return std::nullopt;
}

std::string TagConfig::Name() const {
  if (polsides && mfap) return "both";
  if (polsides) return "polsides";
  if (mfap) return "mfap";
  return "none";
}

std::map<std::string, std::string> VizConfig::DefaultExplanations() {
  return {
      {"polsides.left",
       "Articles from outlets that describe themselves as left-leaning."},
      {"polsides.center",
       "Articles from outlets that describe themselves as centrist."},
      {"polsides.right",
       "Articles from outlets that describe themselves as right-leaning."},
      {"mfap.positive",
       "{mfa} is the person mentioned most often across all articles. "
       "Sentences in these articles mostly portray {mfa} positively."},
      {"mfap.ambivalent",
       "{mfa} is the person mentioned most often across all articles. "
       "These articles portray {mfa} neither mostly positively nor mostly "
       "negatively."},
      {"mfap.negative",
       "{mfa} is the person mentioned most often across all articles. "
       "Sentences in these articles mostly portray {mfa} negatively."},
  };
}

std::string CardExcerpt(const Article &article, const ArticleAnalysis &analysis,
                        size_t limit) {
  if (article.excerpt) return *article.excerpt;
  std::string_view first = article.body;
  if (!analysis.sentences.empty()) {
    const Span &s = analysis.sentences.front();
    first = first.substr(s.begin, s.size());
  }
  first = TrimWhitespace(first);
  if (utf8::CodepointCount(first) <= limit) return std::string(first);
  // Byte offset just past the limit-th code point.
  size_t pos = 0;
  for (size_t i = 0; i < limit; ++i) utf8::Next(first, pos);
  size_t cut = pos;
  if (!IsAsciiSpace(first[cut])) {
    size_t space = first.rfind(' ', cut);
    if (space != std::string_view::npos && space > 0) cut = space;
  }
  return std::string(TrimWhitespace(first.substr(0, cut)));
}

int RandomColumn(uint64_t seed, std::string_view article_id) {
  uint64_t h = SplitMix64(SplitMix64(seed) ^ Fnv1a64(article_id));
  return static_cast<int>((static_cast<unsigned __int128>(h) * 3) >> 64);
}

OverviewModel BuildOverview(const TopicAnalysis &analysis, const Corpus &corpus,
                            Layout layout, TagConfig tags, uint64_t seed,
                            const VizConfig &config) {
  const EventAnalysis &event = analysis.event;
  OverviewModel model;
  model.layout = layout;
  model.topic_id = analysis.topic.id;
  model.tag_config = tags;
  model.seed = seed;

  auto article_of = [&](const std::string &id) -> const Article & {
    const Article *a = corpus.FindArticle(id);
    if (a == nullptr) {
      throw Error(ErrorCode::kArticleNotInTopic, "article '" + id + "' not in corpus");
    }
    return *a;
  };
  auto analysis_of = [&](const std::string &id) -> const ArticleAnalysis & {
    const ArticleAnalysis *a = analysis.FindArticle(id);
    if (a == nullptr) {
      throw Error(ErrorCode::kArticleNotInTopic,
                  "article '" + id + "' not in topic '" + analysis.topic.id + "'");
    }
    return *a;
  };
  auto card = [&](const std::string &id, bool with_excerpt) {
    const Article &a = article_of(id);
    const ArticleAnalysis &aa = analysis_of(id);
    Card c{a.id, a.title, std::nullopt, TagsFor(a, aa, tags)};
    if (with_excerpt) c.excerpt = CardExcerpt(a, aa, config.excerpt_limit);
    return c;
  };
  auto explanation = [&](const std::string &key) {
    auto it = config.explanations.find(key);
    if (it == config.explanations.end()) return std::string();
    const Person *mfa = analysis.FindPerson(event.mfa);
    return Expand(it->second, mfa ? mfa->canonical_name : event.mfa);
  };

  std::vector<std::string> ranked = analysis.topic.article_ids;
  SortByRelevance(ranked, event.event_relevance);

  if (layout == Layout::kPlain) {
    for (const std::string &id : ranked) model.further.push_back(card(id, true));
    return model;
  }

  std::vector<std::pair<std::string, std::vector<std::string>>> columns;
  std::vector<std::string> labels;
  std::vector<std::string> keys;
  if (layout == Layout::kPolsides) {
    for (Orientation o : {Orientation::kLeft, Orientation::kCenter, Orientation::kRight}) {
      std::vector<std::string> ids;
      for (const std::string &id : ranked) {
        if (article_of(id).orientation == o) ids.push_back(id);
      }
      columns.emplace_back(OrientationName(o), std::move(ids));
      labels.push_back(OrientationName(o));
      keys.push_back(std::string("polsides.") + OrientationName(o));
    }
  } else {
    const PolarityGroup kGroups[3] = {PolarityGroup::kPositive,
                                      PolarityGroup::kAmbivalent,
                                      PolarityGroup::kNegative};
    const char *const kLabels[3] = {"pro-mfa", "ambivalent", "anti-mfa"};
    std::vector<std::vector<std::string>> ids(3);
    if (layout == Layout::kMfap) {
      for (int g = 0; g < 3; ++g) {
        auto it = event.groups.find(kGroups[g]);
        if (it != event.groups.end()) ids[g] = it->second;
      }
    } else {
      for (const std::string &id : ranked) {
        if (analysis_of(id).polarity.group == PolarityGroup::kNone) continue;
        ids[RandomColumn(seed, id)].push_back(id);
      }
    }
    for (int g = 0; g < 3; ++g) {
      columns.emplace_back(PolarityGroupName(kGroups[g]), std::move(ids[g]));
      labels.push_back(kLabels[g]);
      keys.push_back(std::string("mfap.") + PolarityGroupName(kGroups[g]));
    }
    const Person *mfa = analysis.FindPerson(event.mfa);
    model.mfa_name = mfa ? mfa->canonical_name : event.mfa;
  }

  model.main = card(event.main_article, true);
  std::set<std::string> shown = {event.main_article};
  for (size_t c = 0; c < columns.size(); ++c) {
    if (columns[c].second.empty()) continue;
    GroupColumn column{columns[c].first, labels[c], explanation(keys[c]), {}};
    for (const std::string &id : columns[c].second) {
      column.cards.push_back(card(id, true));
      shown.insert(id);
    }
    model.groups.push_back(std::move(column));
  }
  for (const std::string &id : ranked) {
    if (shown.count(id) == 0) model.further.push_back(card(id, false));
  }
  return model;
}

ArticleViewModel BuildArticleView(const Article &article,
                                  const TopicAnalysis &analysis,
                                  HighlightMode mode, TagConfig tags) {
  const ArticleAnalysis *aa = analysis.FindArticle(article.id);
  if (aa == nullptr || article.topic_id != analysis.topic.id) {
    throw Error(ErrorCode::kArticleNotInTopic,
                "article '" + article.id + "' not in topic '" + analysis.topic.id + "'");
  }
  const std::string &mfa = analysis.event.mfa;
  ArticleViewModel view;
  view.article_id = article.id;
  view.topic_id = analysis.topic.id;
  view.title = article.title;
  view.body = article.body;
  view.sentences = aa->sentences;
  const Person *person = analysis.FindPerson(mfa);
  view.mfa_name = person ? person->canonical_name : mfa;
  view.highlight_mode = mode;
  view.tags = TagsFor(article, *aa, tags);
  view.tag_config = tags;

  if (mode != HighlightMode::kDisabled) {
    for (const PersonMention &m : aa->mentions) {
      if (m.person_id != mfa) continue;
      auto label = aa->mfa_labels.find(m.sentence_index);
      if (label == aa->mfa_labels.end()) continue;
      std::optional<HighlightColor> color;
      switch (label->second.label) {
        case Polarity::kPositive:
          color = mode == HighlightMode::kSingle ? HighlightColor::kGray
                                                 : HighlightColor::kGreen;
          break;
        case Polarity::kNegative:
          color = mode == HighlightMode::kSingle ? HighlightColor::kGray
                                                 : HighlightColor::kRed;
          break;
        case Polarity::kNeutral:
          if (mode == HighlightMode::kThree) color = HighlightColor::kGray;
          break;
      }
      if (color) view.highlights.push_back(Highlight{m.sentence_index, m.span, *color});
    }
  }

  for (const ArticleAnalysis &other : analysis.articles) {
    if (other.polarity.group == PolarityGroup::kNone) continue;
    view.context_bar.push_back(ContextPoint{
        other.article_id, (other.polarity.score + 1.0) / 2.0,
        other.article_id == article.id});
  }
  std::sort(view.context_bar.begin(), view.context_bar.end(),
            [](const ContextPoint &a, const ContextPoint &b) {
              if (a.x != b.x) return a.x < b.x;
              return a.article_id < b.article_id;
            });
  return view;
}

std::string SerializeOverview(const OverviewModel &model) {
  Json groups = Json::array();
  for (const GroupColumn &g : model.groups) {
    Json cards = Json::array();
    for (const Card &c : g.cards) cards.push_back(CardJson(c));
    groups.push_back(Json{{"group", g.group},
                          {"group_label", g.group_label},
                          {"explanation_text", g.explanation_text},
                          {"cards", cards}});
  }
  Json further = Json::array();
  for (const Card &c : model.further) further.push_back(CardJson(c));
  Json root{{"layout", LayoutName(model.layout)},
            {"topic_id", model.topic_id},
            {"mfa", model.mfa_name ? Json(*model.mfa_name) : Json(nullptr)},
            {"main", model.main ? CardJson(*model.main) : Json(nullptr)},
            {"groups", groups},
            {"further", further},
            {"tag_config", TagConfigJson(model.tag_config)},
            {"seed", model.seed}};
  return root.dump();
}

std::string SerializeArticleView(const ArticleViewModel &model) {
  Json sentences = Json::array();
  for (const Span &s : model.sentences) sentences.push_back(Json::array({s.begin, s.end}));
  Json highlights = Json::array();
  for (const Highlight &h : model.highlights) {
    highlights.push_back(Json{{"sentence_index", h.sentence_index},
                              {"span", Json::array({h.span.begin, h.span.end})},
                              {"color", HighlightColorName(h.color)}});
  }
  Json bar = Json::array();
  for (const ContextPoint &p : model.context_bar) {
    bar.push_back(Json{{"article_id", p.article_id},
                       {"x", p.x},
                       {"is_current", p.is_current}});
  }
  Json root{{"article_id", model.article_id},
            {"topic_id", model.topic_id},
            {"title", model.title},
            {"body", model.body},
            {"sentences", sentences},
            {"mfa", model.mfa_name},
            {"highlight_mode", HighlightModeName(model.highlight_mode)},
            {"highlights", highlights},
            {"context_bar", bar},
            {"tags", TagsJson(model.tags)},
            {"tag_config", TagConfigJson(model.tag_config)}};
  return root.dump();
}

}  // namespace newslens
