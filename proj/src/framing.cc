#include "newslens/framing.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>

#include "newslens/error.h"
#include "newslens/textproc.h"

namespace newslens {
namespace {

double Norm(const std::vector<double> &v) {
  double sum = 0.0;
  for (double x : v) sum += x * x;
  return std::sqrt(sum);
}

void Normalize(std::vector<double> &v) {
  double norm = Norm(v);
  if (norm == 0.0) return;
  for (double &x : v) x /= norm;
}

// Scores are rounded to 12 decimals so that mathematically equal
// similarities (e.g. both members of a two-article group) tie exactly and
// fall through to the id tie-break instead of floating-point noise.
double Quantize(double x) { return std::round(x * 1e12) / 1e12; }

// Index of the best score; ties go to the smaller id.
size_t Argmax(const std::vector<size_t> &members,
              const std::vector<double> &scores,
              const std::vector<const Article *> &articles) {
  size_t best = members.front();
  for (size_t m : members) {
    if (scores[m] > scores[best] ||
        (scores[m] == scores[best] && articles[m]->id < articles[best]->id)) {
      best = m;
    }
  }
  return best;
}

void SortByScore(std::vector<size_t> &members, const std::vector<double> &scores,
                 const std::vector<const Article *> &articles) {
  std::sort(members.begin(), members.end(), [&](size_t a, size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return articles[a]->id < articles[b]->id;
  });
}

}  // namespace

TopicVectors TfIdfProvider::Embed(
    const std::vector<const Article *> &articles) const {
  std::vector<std::unordered_map<std::string, int>> counts(articles.size());
  std::set<std::string> vocabulary;
  for (size_t i = 0; i < articles.size(); ++i) {
    std::string text = articles[i]->title + "\n" + articles[i]->body;
    for (const Token &t : Tokenize(text)) {
      std::string term = LowercaseToken(t.text);
      ++counts[i][term];
      vocabulary.insert(std::move(term));
    }
  }
  TopicVectors out;
  out.vocabulary.assign(vocabulary.begin(), vocabulary.end());
  std::unordered_map<std::string, size_t> index;
  for (size_t k = 0; k < out.vocabulary.size(); ++k) index[out.vocabulary[k]] = k;

  std::vector<int> df(out.vocabulary.size(), 0);
  for (const auto &c : counts) {
    for (const auto &[term, n] : c) ++df[index[term]];
  }
  const double n_docs = static_cast<double>(articles.size());
  std::vector<double> idf(df.size());
  for (size_t k = 0; k < df.size(); ++k) {
    idf[k] = std::log((1.0 + n_docs) / (1.0 + df[k])) + 1.0;
  }
  for (const auto &c : counts) {
    std::vector<double> v(out.vocabulary.size(), 0.0);
    for (const auto &[term, n] : c) {
      size_t k = index[term];
      v[k] = n * idf[k];
    }
    Normalize(v);
    out.vectors.push_back(std::move(v));
  }
  return out;
}

double ClampedCosine(const std::vector<double> &a, const std::vector<double> &b) {
  double na = Norm(a);
  double nb = Norm(b);
  if (na == 0.0 || nb == 0.0) return 0.0;
  double dot = 0.0;
  for (size_t i = 0; i < a.size() && i < b.size(); ++i) dot += a[i] * b[i];
  return std::clamp(dot / (na * nb), 0.0, 1.0);
}

std::vector<double> Centroid(const std::vector<std::vector<double>> &vectors,
                             const std::vector<size_t> &members) {
  std::vector<double> c(vectors.empty() ? 0 : vectors.front().size(), 0.0);
  for (size_t m : members) {
    for (size_t k = 0; k < c.size(); ++k) c[k] += vectors[m][k];
  }
  if (!members.empty()) {
    for (double &x : c) x /= static_cast<double>(members.size());
  }
  Normalize(c);
  return c;
}

EventAnalysis AnalyzeEvent(const std::string &topic_id,
                           const std::vector<const Article *> &articles,
                           const std::string &mfa,
                           const std::vector<ArticlePolarity> &polarities,
                           const EmbeddingProvider &provider, uint64_t seed) {
  if (articles.empty()) {
    throw Error(ErrorCode::kInvalidInput, "topic '" + topic_id + "' has no articles");
  }
  if (polarities.size() != articles.size()) {
    throw Error(ErrorCode::kInvalidInput, "polarities not aligned with articles");
  }
  if (mfa.empty()) throw Error(ErrorCode::kNoPersons, "no MFA for topic '" + topic_id + "'");

  TopicVectors tv = provider.Embed(articles);
  const size_t n = articles.size();

  EventAnalysis out;
  out.topic_id = topic_id;
  out.mfa = mfa;
  out.seed = seed;

  std::vector<size_t> everyone(n);
  for (size_t i = 0; i < n; ++i) everyone[i] = i;
  std::vector<double> event_score(n);
  const std::vector<double> event_centroid = Centroid(tv.vectors, everyone);
  for (size_t i = 0; i < n; ++i) {
    event_score[i] = Quantize(ClampedCosine(tv.vectors[i], event_centroid));
    out.event_relevance[articles[i]->id] = event_score[i];
  }

  std::map<PolarityGroup, std::vector<size_t>> members;
  for (size_t i = 0; i < n; ++i) {
    if (polarities[i].group != PolarityGroup::kNone) {
      members[polarities[i].group].push_back(i);
    }
  }
  std::vector<double> group_score(n, 0.0);
  for (auto &[group, ids] : members) {
    const std::vector<double> centroid = Centroid(tv.vectors, ids);
    for (size_t i : ids) {
      group_score[i] = Quantize(ClampedCosine(tv.vectors[i], centroid));
      out.group_relevance[articles[i]->id] = group_score[i];
    }
    out.representative[group] = articles[Argmax(ids, group_score, articles)]->id;
    SortByScore(ids, group_score, articles);
    auto &list = out.groups[group];
    for (size_t i : ids) list.push_back(articles[i]->id);
  }

  out.main_article = articles[Argmax(everyone, event_score, articles)]->id;

  std::set<std::string> featured = {out.main_article};
  for (const auto &[group, id] : out.representative) featured.insert(id);
  std::vector<size_t> rest;
  for (size_t i = 0; i < n; ++i) {
    if (featured.count(articles[i]->id) == 0) rest.push_back(i);
  }
  SortByScore(rest, event_score, articles);
  for (size_t i : rest) out.further_articles.push_back(articles[i]->id);
  return out;
}

}  // namespace newslens
