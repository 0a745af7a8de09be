#include "newslens/persons.h"

#include <algorithm>
#include <numeric>
#include <optional>
#include <tuple>
#include <unordered_map>

#include "newslens/error.h"
#include "newslens/utf8.h"

namespace newslens {
namespace {

struct Cluster {
  std::string key;
  bool multi_token = false;
  std::set<std::string> last_tokens;
  std::set<std::string> aliases;
  std::map<std::string, int> counts;
  int total = 0;
};

std::vector<std::string> NameTokens(const std::string &name) {
  std::vector<std::string> out;
  for (const Token &t : Tokenize(name)) out.emplace_back(t.text);
  return out;
}

class Resolver {
 public:
  size_t Join(size_t cluster, const PersonMention &m, bool record_alias) {
    Cluster &c = clusters_[cluster];
    ++c.counts[m.article_id];
    ++c.total;
    if (record_alias) {
      c.aliases.insert(m.surface);
      exact_.emplace(m.surface, cluster);
    }
    return cluster;
  }

  size_t Create(const std::string &key, bool multi_token) {
    Cluster c;
    c.key = key;
    c.multi_token = multi_token;
    if (multi_token) {
      auto tokens = NameTokens(key);
      if (!tokens.empty()) c.last_tokens.insert(tokens.back());
    }
    clusters_.push_back(std::move(c));
    exact_.emplace(key, clusters_.size() - 1);
    return clusters_.size() - 1;
  }

  std::optional<size_t> Exact(const std::string &name) const {
    auto it = exact_.find(name);
    if (it == exact_.end()) return std::nullopt;
    return it->second;
  }

  void AddAlias(size_t cluster, const std::string &alias) {
    Cluster &c = clusters_[cluster];
    c.aliases.insert(alias);
    exact_.emplace(alias, cluster);
    if (c.multi_token) {
      auto tokens = NameTokens(alias);
      if (tokens.size() > 1) c.last_tokens.insert(tokens.back());
    }
  }

  std::vector<size_t> EndingIn(const std::string &word) const {
    std::vector<size_t> out;
    for (size_t i = 0; i < clusters_.size(); ++i) {
      if (clusters_[i].multi_token && clusters_[i].last_tokens.count(word)) {
        out.push_back(i);
      }
    }
    return out;
  }

  std::vector<Cluster> &clusters() { return clusters_; }

 private:
  std::vector<Cluster> clusters_;
  std::unordered_map<std::string, size_t> exact_;
};

std::string CanonicalOf(const std::set<std::string> &aliases) {
  std::string best;
  size_t best_length = 0;
  for (const std::string &a : aliases) {
    size_t length = utf8::CodepointCount(a);
    // std::set iterates in lexicographic order, so strict > keeps the
    // smallest among equally long aliases.
    if (best.empty() || length > best_length) {
      best = a;
      best_length = length;
    }
  }
  return best;
}

}  // namespace

std::vector<Person> ResolvePersons(std::vector<PersonMention> &mentions) {
  std::vector<size_t> order(mentions.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    const PersonMention &x = mentions[a];
    const PersonMention &y = mentions[b];
    return std::tie(x.article_id, x.sentence_index, x.span.begin) <
           std::tie(y.article_id, y.sentence_index, y.span.begin);
  });

  auto key_of = [&](size_t i) -> const std::string & {
    return mentions[i].canonical ? *mentions[i].canonical : mentions[i].surface;
  };

  Resolver resolver;
  std::vector<std::optional<size_t>> assigned(mentions.size());

  // Pass 1: full names.
  for (size_t i : order) {
    const std::string &key = key_of(i);
    if (NameTokens(key).size() < 2) continue;
    auto cluster = resolver.Exact(key);
    if (!cluster) cluster = resolver.Create(key, true);
    if (mentions[i].canonical) resolver.AddAlias(*cluster, key);
    assigned[i] = resolver.Join(*cluster, mentions[i], true);
    resolver.AddAlias(*cluster, mentions[i].surface);
  }

  // Pass 2: single words.
  for (size_t pos = 0; pos < order.size(); ++pos) {
    size_t i = order[pos];
    if (assigned[i]) continue;
    const PersonMention &m = mentions[i];
    const std::string &key = key_of(i);
    if (auto cluster = resolver.Exact(key)) {
      if (m.canonical) resolver.AddAlias(*cluster, key);
      assigned[i] = resolver.Join(*cluster, m, true);
      continue;
    }
    std::vector<size_t> candidates = resolver.EndingIn(key);
    if (candidates.size() == 1) {
      if (m.canonical) resolver.AddAlias(candidates[0], key);
      assigned[i] = resolver.Join(candidates[0], m, true);
      continue;
    }
    if (candidates.size() > 1) {
      std::optional<size_t> chosen;
      // Most recent full-name antecedent in the same article.
      for (size_t back = pos; back-- > 0;) {
        size_t j = order[back];
        if (mentions[j].article_id != m.article_id) break;
        if (!assigned[j]) continue;
        if (NameTokens(key_of(j)).size() < 2) continue;
        if (std::find(candidates.begin(), candidates.end(), *assigned[j]) !=
            candidates.end()) {
          chosen = *assigned[j];
          break;
        }
      }
      if (!chosen) {
        auto &clusters = resolver.clusters();
        chosen = *std::min_element(
            candidates.begin(), candidates.end(), [&](size_t a, size_t b) {
              if (clusters[a].total != clusters[b].total) {
                return clusters[a].total > clusters[b].total;
              }
              return clusters[a].key < clusters[b].key;
            });
      }
      assigned[i] = resolver.Join(*chosen, m, false);
      continue;
    }
    size_t cluster = resolver.Create(key, false);
    if (m.canonical) resolver.AddAlias(cluster, key);
    assigned[i] = resolver.Join(cluster, m, true);
  }

  auto &clusters = resolver.clusters();
  std::vector<size_t> by_name(clusters.size());
  std::iota(by_name.begin(), by_name.end(), 0);
  std::vector<std::string> names(clusters.size());
  for (size_t c = 0; c < clusters.size(); ++c) {
    names[c] = CanonicalOf(clusters[c].aliases);
  }
  std::sort(by_name.begin(), by_name.end(), [&](size_t a, size_t b) {
    return std::tie(names[a], clusters[a].key) <
           std::tie(names[b], clusters[b].key);
  });

  std::vector<std::string> ids(clusters.size());
  std::vector<Person> persons;
  persons.reserve(clusters.size());
  for (size_t rank = 0; rank < by_name.size(); ++rank) {
    size_t c = by_name[rank];
    ids[c] = "p" + std::to_string(rank + 1);
    Person p;
    p.person_id = ids[c];
    p.canonical_name = names[c];
    p.aliases = clusters[c].aliases;
    p.mention_counts = clusters[c].counts;
    p.total_mentions = clusters[c].total;
    persons.push_back(std::move(p));
  }
  for (size_t i = 0; i < mentions.size(); ++i) {
    mentions[i].person_id = ids[*assigned[i]];
  }
  return persons;
}

const Person &MostFrequentActor(const std::vector<Person> &persons) {
  const Person *best = nullptr;
  for (const Person &p : persons) {
    if (p.total_mentions <= 0) continue;
    if (best == nullptr || p.total_mentions > best->total_mentions ||
        (p.total_mentions == best->total_mentions &&
         p.canonical_name < best->canonical_name)) {
      best = &p;
    }
  }
  if (best == nullptr) throw Error(ErrorCode::kNoPersons, "no person mentions");
  return *best;
}

}  // namespace newslens
