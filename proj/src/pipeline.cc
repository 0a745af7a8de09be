#include "newslens/pipeline.h"

#include <algorithm>
#include <set>
#include <sstream>
#include <tuple>

#include "json.hpp"
#include "newslens/error.h"
#include "newslens/parallel.h"
#include "newslens/util.h"

namespace newslens {
namespace {

using Json = nlohmann::json;

constexpr const char *kSnapshotFormat = "newslens-snapshot/1";

struct TextStage {
  std::vector<Sentence> sentences;
  std::vector<PersonMention> mentions;
};

Json SpanJson(const Span &s) { return Json::array({s.begin, s.end}); }

Span SpanFrom(const Json &j) {
  if (!j.is_array() || j.size() != 2) throw std::runtime_error("bad span");
  Span s{j[0].get<size_t>(), j[1].get<size_t>()};
  if (s.begin > s.end) throw std::runtime_error("inverted span");
  return s;
}

Json ArticleJson(const Article &a) {
  Json j;
  j["id"] = a.id;
  j["topic_id"] = a.topic_id;
  j["outlet"] = a.outlet;
  j["orientation"] = OrientationName(a.orientation);
  j["title"] = a.title;
  j["excerpt"] = a.excerpt ? Json(*a.excerpt) : Json(nullptr);
  j["body"] = a.body;
  j["published_at"] = a.published_at;
  j["url"] = a.url ? Json(*a.url) : Json(nullptr);
  return j;
}

Article ArticleFrom(const Json &j) {
  Article a;
  a.id = j.at("id").get<std::string>();
  a.topic_id = j.at("topic_id").get<std::string>();
  a.outlet = j.at("outlet").get<std::string>();
  auto orientation = ParseOrientation(j.at("orientation").get<std::string>());
  if (!orientation) throw std::runtime_error("bad orientation");
  a.orientation = *orientation;
  a.title = j.at("title").get<std::string>();
  if (!j.at("excerpt").is_null()) a.excerpt = j.at("excerpt").get<std::string>();
  a.body = j.at("body").get<std::string>();
  a.published_at = j.at("published_at").get<std::string>();
  if (!j.at("url").is_null()) a.url = j.at("url").get<std::string>();
  return a;
}

Json LabelJson(const PolarityLabel &l) {
  return Json{{"label", PolarityName(l.label)},
              {"positive", l.positive},
              {"neutral", l.neutral},
              {"negative", l.negative}};
}

PolarityLabel LabelFrom(const Json &j) {
  PolarityLabel l = PolarityLabel::FromProbabilities(
      j.at("positive").get<double>(), j.at("neutral").get<double>(),
      j.at("negative").get<double>());
  if (PolarityName(l.label) != j.at("label").get<std::string>()) {
    throw std::runtime_error("label is not the argmax");
  }
  return l;
}

PolarityGroup GroupFrom(const std::string &name) {
  auto g = ParsePolarityGroup(name);
  if (!g) throw std::runtime_error("bad group '" + name + "'");
  return *g;
}

Json PolarityJson(const ArticlePolarity &p) {
  return Json{{"person_id", p.person_id},
              {"positive", p.counts.positive},
              {"negative", p.counts.negative},
              {"neutral", p.counts.neutral},
              {"score", p.score},
              {"group", PolarityGroupName(p.group)}};
}

ArticlePolarity PolarityFrom(const std::string &article_id, const Json &j) {
  ArticlePolarity p;
  p.article_id = article_id;
  p.person_id = j.at("person_id").get<std::string>();
  p.counts.positive = j.at("positive").get<int>();
  p.counts.negative = j.at("negative").get<int>();
  p.counts.neutral = j.at("neutral").get<int>();
  p.score = j.at("score").get<double>();
  p.group = GroupFrom(j.at("group").get<std::string>());
  return p;
}

Json PersonJson(const Person &p) {
  return Json{{"person_id", p.person_id},
              {"canonical_name", p.canonical_name},
              {"aliases", p.aliases},
              {"mention_counts", p.mention_counts},
              {"total_mentions", p.total_mentions}};
}

Person PersonFrom(const Json &j) {
  Person p;
  p.person_id = j.at("person_id").get<std::string>();
  p.canonical_name = j.at("canonical_name").get<std::string>();
  p.aliases = j.at("aliases").get<std::set<std::string>>();
  p.mention_counts = j.at("mention_counts").get<std::map<std::string, int>>();
  p.total_mentions = j.at("total_mentions").get<int>();
  return p;
}

Json EventJson(const EventAnalysis &e) {
  Json groups = Json::object();
  for (const auto &[g, ids] : e.groups) groups[PolarityGroupName(g)] = ids;
  Json reps = Json::object();
  for (const auto &[g, id] : e.representative) reps[PolarityGroupName(g)] = id;
  return Json{{"topic_id", e.topic_id},
              {"mfa", e.mfa},
              {"groups", groups},
              {"representative", reps},
              {"main_article", e.main_article},
              {"event_relevance", e.event_relevance},
              {"group_relevance", e.group_relevance},
              {"further_articles", e.further_articles},
              {"seed", e.seed}};
}

EventAnalysis EventFrom(const Json &j) {
  EventAnalysis e;
  e.topic_id = j.at("topic_id").get<std::string>();
  e.mfa = j.at("mfa").get<std::string>();
  for (const auto &[g, ids] : j.at("groups").items()) {
    e.groups[GroupFrom(g)] = ids.get<std::vector<std::string>>();
  }
  for (const auto &[g, id] : j.at("representative").items()) {
    e.representative[GroupFrom(g)] = id.get<std::string>();
  }
  e.main_article = j.at("main_article").get<std::string>();
  e.event_relevance = j.at("event_relevance").get<std::map<std::string, double>>();
  e.group_relevance = j.at("group_relevance").get<std::map<std::string, double>>();
  e.further_articles = j.at("further_articles").get<std::vector<std::string>>();
  e.seed = j.at("seed").get<uint64_t>();
  return e;
}

Json ArticleAnalysisJson(const ArticleAnalysis &a) {
  Json sentences = Json::array();
  for (const Span &s : a.sentences) sentences.push_back(SpanJson(s));
  Json mentions = Json::array();
  for (const PersonMention &m : a.mentions) {
    Json jm{{"sentence_index", m.sentence_index},
            {"span", SpanJson(m.span)},
            {"surface", m.surface},
            {"person_id", m.person_id.value_or("")}};
    if (m.canonical) jm["canonical"] = *m.canonical;
    mentions.push_back(std::move(jm));
  }
  Json labels = Json::array();
  for (const auto &[index, label] : a.mfa_labels) {
    Json jl = LabelJson(label);
    jl["sentence_index"] = index;
    labels.push_back(std::move(jl));
  }
  return Json{{"article_id", a.article_id},
              {"sentences", sentences},
              {"mentions", mentions},
              {"mfa_labels", labels},
              {"polarity", PolarityJson(a.polarity)}};
}

ArticleAnalysis ArticleAnalysisFrom(const Json &j) {
  ArticleAnalysis a;
  a.article_id = j.at("article_id").get<std::string>();
  for (const Json &s : j.at("sentences")) a.sentences.push_back(SpanFrom(s));
  for (const Json &jm : j.at("mentions")) {
    PersonMention m;
    m.article_id = a.article_id;
    m.sentence_index = jm.at("sentence_index").get<int>();
    m.span = SpanFrom(jm.at("span"));
    m.surface = jm.at("surface").get<std::string>();
    m.person_id = jm.at("person_id").get<std::string>();
    if (jm.contains("canonical")) m.canonical = jm.at("canonical").get<std::string>();
    a.mentions.push_back(std::move(m));
  }
  for (const Json &jl : j.at("mfa_labels")) {
    a.mfa_labels[jl.at("sentence_index").get<int>()] = LabelFrom(jl);
  }
  a.polarity = PolarityFrom(a.article_id, j.at("polarity"));
  return a;
}

// Checks that every offset stays inside the article text.
void CheckArticleAnalysis(const ArticleAnalysis &a, const Article &article) {
  for (const Span &s : a.sentences) {
    if (s.end > article.body.size()) throw std::runtime_error("sentence out of range");
  }
  for (const PersonMention &m : a.mentions) {
    if (m.sentence_index < 0 ||
        m.sentence_index >= static_cast<int>(a.sentences.size())) {
      throw std::runtime_error("mention sentence out of range");
    }
    const Span &s = a.sentences[m.sentence_index];
    if (m.span.end > s.size() ||
        article.body.compare(s.begin + m.span.begin, m.span.size(), m.surface) != 0) {
      throw std::runtime_error("mention does not match text");
    }
  }
}

}  // namespace

const ArticleAnalysis *TopicAnalysis::FindArticle(std::string_view id) const {
  for (const ArticleAnalysis &a : articles) {
    if (a.article_id == id) return &a;
  }
  return nullptr;
}

const Person *TopicAnalysis::FindPerson(std::string_view id) const {
  for (const Person &p : persons) {
    if (p.person_id == id) return &p;
  }
  return nullptr;
}

const TopicAnalysis *Snapshot::FindTopic(std::string_view id) const {
  for (const TopicAnalysis &t : topics) {
    if (t.topic.id == id) return &t;
  }
  return nullptr;
}

const TopicAnalysis *Snapshot::TopicOfArticle(std::string_view article_id) const {
  const Article *article = corpus.FindArticle(article_id);
  return article == nullptr ? nullptr : FindTopic(article->topic_id);
}

std::string CorpusDigest(const Corpus &corpus) {
  return Sha256Hex(SerializeCorpus(corpus));
}

TopicAnalysis AnalyzeTopic(const Topic &topic,
                           const std::vector<const Article *> &articles,
                           const Gazetteer &gazetteer,
                           const TargetClassifier &classifier,
                           const AnalysisConfig &config) {
  const size_t n = articles.size();
  std::vector<TextStage> text(n);
  ParallelFor(n, config.jobs, [&](size_t i) {
    TextStage &stage = text[i];
    stage.sentences = SegmentSentences(articles[i]->body, articles[i]->id);
    for (const Sentence &s : stage.sentences) {
      for (PersonMention &m : DetectMentions(s, gazetteer)) {
        stage.mentions.push_back(std::move(m));
      }
    }
  });

  std::vector<PersonMention> all;
  for (TextStage &stage : text) {
    for (PersonMention &m : stage.mentions) all.push_back(std::move(m));
    stage.mentions.clear();
  }
  TopicAnalysis out;
  out.topic = topic;
  out.persons = ResolvePersons(all);
  const std::string mfa = MostFrequentActor(out.persons).person_id;
  for (PersonMention &m : all) {
    for (size_t i = 0; i < n; ++i) {
      if (articles[i]->id == m.article_id) {
        text[i].mentions.push_back(std::move(m));
        break;
      }
    }
  }

  out.articles.resize(n);
  ParallelFor(n, config.jobs, [&](size_t i) {
    ArticleAnalysis &a = out.articles[i];
    a.article_id = articles[i]->id;
    for (const Sentence &s : text[i].sentences) a.sentences.push_back(s.span);
    a.mentions = std::move(text[i].mentions);
    std::sort(a.mentions.begin(), a.mentions.end(),
              [](const PersonMention &x, const PersonMention &y) {
                return std::tie(x.sentence_index, x.span.begin) <
                       std::tie(y.sentence_index, y.span.begin);
              });
    // One label per sentence, targeted at the first MFA mention in it.
    std::vector<PolarityLabel> labels;
    for (const PersonMention &m : a.mentions) {
      if (m.person_id != mfa || a.mfa_labels.count(m.sentence_index)) continue;
      const Sentence &s = text[i].sentences[m.sentence_index];
      PolarityLabel label = classifier.Classify(s.text, m.span);
      a.mfa_labels.emplace(m.sentence_index, label);
      labels.push_back(label);
    }
    a.polarity = AggregatePolarity(a.article_id, mfa, labels, config.theta);
  });

  std::vector<ArticlePolarity> polarities;
  for (const ArticleAnalysis &a : out.articles) polarities.push_back(a.polarity);
  out.event = AnalyzeEvent(topic.id, articles, mfa, polarities, TfIdfProvider(),
                           config.seed);
  return out;
}

Snapshot AnalyzeCorpus(const Corpus &corpus, const Gazetteer &gazetteer,
                       const TargetClassifier &classifier,
                       const AnalysisConfig &config) {
  if (!(config.theta > 0.0 && config.theta < 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "theta must lie in (0, 1)");
  }
  Snapshot snapshot{CorpusDigest(corpus), config.created_at, config.theta,
                    classifier.Info(), config.seed, corpus, {}};
  for (const Topic &topic : corpus.topics()) {
    snapshot.topics.push_back(AnalyzeTopic(
        topic, corpus.TopicArticles(topic.id), gazetteer, classifier, config));
  }
  return snapshot;
}

std::string SerializeSnapshot(const Snapshot &snapshot) {
  Json classifier{{"name", snapshot.classifier.name},
                  {"kind", ClassifierKindName(snapshot.classifier.kind)}};
  if (snapshot.classifier.reported_f1) {
    classifier["reported_f1"] = *snapshot.classifier.reported_f1;
  }
  Json articles = Json::array();
  for (const Article &a : snapshot.corpus.articles()) articles.push_back(ArticleJson(a));
  Json topics = Json::array();
  for (const TopicAnalysis &t : snapshot.topics) {
    Json persons = Json::array();
    for (const Person &p : t.persons) persons.push_back(PersonJson(p));
    Json analyses = Json::array();
    for (const ArticleAnalysis &a : t.articles) analyses.push_back(ArticleAnalysisJson(a));
    topics.push_back(Json{{"id", t.topic.id},
                          {"name", t.topic.name},
                          {"article_ids", t.topic.article_ids},
                          {"persons", persons},
                          {"event", EventJson(t.event)},
                          {"articles", analyses}});
  }
  Json root{{"format", kSnapshotFormat},
            {"corpus_digest", snapshot.corpus_digest},
            {"created_at", snapshot.created_at},
            {"config", Json{{"theta", snapshot.theta},
                            {"seed", snapshot.seed},
                            {"classifier", classifier}}},
            {"articles", articles},
            {"topics", topics}};
  return root.dump(1) + "\n";
}

Snapshot ParseSnapshot(std::string_view content) {
  try {
    Json root = Json::parse(content);
    if (root.at("format").get<std::string>() != kSnapshotFormat) {
      throw Error(ErrorCode::kSnapshotCorrupt, "unsupported snapshot format");
    }
    std::vector<Article> articles;
    for (const Json &a : root.at("articles")) articles.push_back(ArticleFrom(a));
    Corpus corpus(std::move(articles));
    const Json &config = root.at("config");
    const Json &jc = config.at("classifier");
    ClassifierInfo classifier;
    classifier.name = jc.at("name").get<std::string>();
    classifier.kind = jc.at("kind").get<std::string>() == "sidecar"
                          ? ClassifierKind::kSidecar
                          : ClassifierKind::kLexicon;
    if (jc.contains("reported_f1")) classifier.reported_f1 = jc.at("reported_f1").get<double>();

    Snapshot snapshot{root.at("corpus_digest").get<std::string>(),
                      root.at("created_at").get<std::string>(),
                      config.at("theta").get<double>(),
                      classifier,
                      config.at("seed").get<uint64_t>(),
                      std::move(corpus),
                      {}};
    if (snapshot.corpus_digest != CorpusDigest(snapshot.corpus)) {
      throw Error(ErrorCode::kSnapshotCorrupt, "corpus digest mismatch");
    }
    for (const Json &jt : root.at("topics")) {
      TopicAnalysis t;
      t.topic.id = jt.at("id").get<std::string>();
      t.topic.name = jt.at("name").get<std::string>();
      t.topic.article_ids = jt.at("article_ids").get<std::vector<std::string>>();
      const Topic *known = snapshot.corpus.FindTopic(t.topic.id);
      if (known == nullptr || known->article_ids != t.topic.article_ids) {
        throw Error(ErrorCode::kSnapshotCorrupt,
                    "topic '" + t.topic.id + "' does not match the corpus");
      }
      for (const Json &p : jt.at("persons")) t.persons.push_back(PersonFrom(p));
      t.event = EventFrom(jt.at("event"));
      for (const Json &a : jt.at("articles")) {
        ArticleAnalysis analysis = ArticleAnalysisFrom(a);
        const Article *article = snapshot.corpus.FindArticle(analysis.article_id);
        if (article == nullptr || article->topic_id != t.topic.id) {
          throw Error(ErrorCode::kSnapshotCorrupt,
                      "analysis for unknown article '" + analysis.article_id + "'");
        }
        CheckArticleAnalysis(analysis, *article);
        t.articles.push_back(std::move(analysis));
      }
      if (t.articles.size() != t.topic.article_ids.size()) {
        throw Error(ErrorCode::kSnapshotCorrupt,
                    "topic '" + t.topic.id + "' lacks article analyses");
      }
      snapshot.topics.push_back(std::move(t));
    }
    return snapshot;
  } catch (const Error &e) {
    if (e.code() == ErrorCode::kSnapshotCorrupt) throw;
    throw Error(ErrorCode::kSnapshotCorrupt, e.what());
  } catch (const std::exception &e) {
    throw Error(ErrorCode::kSnapshotCorrupt, e.what());
  }
}

Snapshot LoadSnapshot(const std::filesystem::path &path) {
  try {
    return ParseSnapshot(ReadFile(path));
  } catch (const Error &e) {
    throw Error(e.code(), path.string() + ": " + e.detail());
  }
}

std::string SummarizeSnapshot(const Snapshot &snapshot) {
  std::ostringstream out;
  out << "corpus " << snapshot.corpus_digest.substr(0, 12) << ", "
      << snapshot.corpus.articles().size() << " articles, "
      << snapshot.topics.size() << " topics, classifier "
      << snapshot.classifier.name << ", theta " << snapshot.theta << "\n";
  for (const TopicAnalysis &t : snapshot.topics) {
    const Person *mfa = t.FindPerson(t.event.mfa);
    out << "\ntopic " << t.topic.id << " (" << t.topic.article_ids.size()
        << " articles)\n";
    out << "  MFA: " << (mfa ? mfa->canonical_name : t.event.mfa);
    if (mfa) out << " (" << mfa->total_mentions << " mentions)";
    out << "\n  main article: " << t.event.main_article << "\n";
    size_t grouped = 0;
    for (PolarityGroup g : {PolarityGroup::kPositive, PolarityGroup::kAmbivalent,
                            PolarityGroup::kNegative}) {
      auto it = t.event.groups.find(g);
      size_t size = it == t.event.groups.end() ? 0 : it->second.size();
      grouped += size;
      out << "  " << PolarityGroupName(g) << ": " << size << " articles";
      auto rep = t.event.representative.find(g);
      if (rep != t.event.representative.end()) {
        out << ", representative " << rep->second;
      }
      out << "\n";
    }
    out << "  none: " << t.topic.article_ids.size() - grouped << " articles\n";
  }
  return out.str();
}

}  // namespace newslens
