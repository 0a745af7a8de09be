// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "analysis_fixture.h"
#include "httplib.h"
#include "newslens/cli.h"
#include "newslens/conjoint.h"
#include "newslens/error.h"
#include "newslens/pipeline.h"
#include "newslens/polarity.h"
#include "newslens/server.h"
#include "newslens/util.h"
#include "newslens/vizmodel.h"
#include "oracles.h"

namespace newslens {
namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string Fixed(double v, int digits) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.*f", digits, v);
  return buffer;
}

struct Outcome {
  enum Status { kPass, kFail, kBlocked } status;
  std::string detail;
};

Outcome Fail(std::string detail) { return {Outcome::kFail, std::move(detail)}; }
Outcome Check(bool ok, std::string detail) {
  return {ok ? Outcome::kPass : Outcome::kFail, std::move(detail)};
}

// ------------------------------------------------------------ determinism

Outcome Determinism() {
  testing::TempDir a, b;
  auto run = [](const testing::TempDir &dir, const char *jobs) {
    std::ostringstream out, err;
    std::vector<std::string> args = {
        "analyze",
        "--corpus", testing::TestData("study_corpus.jsonl").string(),
        "--gazetteer", testing::TestData("study_gazetteer.tsv").string(),
        "--lexicon", testing::DefaultData("lexicon.tsv").string(),
        "--out", dir.path().string(),
        "--seed", "1",
        "--jobs", jobs};
    auto start = Clock::now();
    int status = RunCli(args, out, err);
    return std::make_pair(status, Seconds(start));
  };
  auto [s1, t1] = run(a, "1");
  auto [s2, t2] = run(b, "4");
  if (s1 != 0 || s2 != 0) return Fail("analyze exited " + std::to_string(s1) + "/" + std::to_string(s2));
  const bool same = ReadFile(a / "snapshot.json") == ReadFile(b / "snapshot.json");
  const double slowest = std::max(t1, t2);
  return Check(same && slowest < 5.0, std::string(same ? "identical" : "DIFFERENT") +
                                          " snapshots (jobs 1 vs 4), slowest run " +
                                          Fixed(slowest, 3) + " s");
}

// ------------------------------------------------------------- MFA oracle

Outcome MfaOracle() {
  std::mt19937_64 rng(20240101);
  int matches = 0;
  for (int trial = 0; trial < 100; ++trial) {
    oracle::SyntheticCorpus synthetic = oracle::GenerateMfaCorpus(rng);
    Corpus corpus(synthetic.articles);
    AnalysisConfig config;
    Snapshot s = AnalyzeCorpus(corpus, Gazetteer(), testing::DefaultLexiconClassifier(), config);
    const TopicAnalysis &t = s.topics.at(0);
    if (t.FindPerson(t.event.mfa)->canonical_name == oracle::BruteForceMfa(synthetic)) ++matches;
  }
  return Check(matches == 100, std::to_string(matches) + "/100 corpora");
}

// -------------------------------------------------------- grouping oracle

Outcome GroupingOracle() {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> count(0, 10);
  int matches = 0;
  int boundary_cases = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int p = count(rng), n = count(rng), u = count(rng);
    std::vector<PolarityLabel> labels;
    for (int i = 0; i < p; ++i) labels.push_back(PolarityLabel::FromProbabilities(0.8, 0.1, 0.1));
    for (int i = 0; i < n; ++i) labels.push_back(PolarityLabel::FromProbabilities(0.1, 0.1, 0.8));
    for (int i = 0; i < u; ++i) labels.push_back(PolarityLabel::FromProbabilities(0.1, 0.8, 0.1));
    std::shuffle(labels.begin(), labels.end(), rng);
    double theta = std::uniform_real_distribution<double>(0.01, 0.99)(rng);
    const double s_abs = std::abs(static_cast<double>(p - n) / std::max(1, p + n));
    if (trial % 2 == 0 && s_abs > 0.0 && s_abs < 1.0) {
      theta = s_abs;
      ++boundary_cases;
    }
    ArticlePolarity got = AggregatePolarity("a", "p", labels, theta);
    oracle::GroupingResult want = oracle::GroupingFormula(p, n, u, theta);
    if (got.score == want.s && want.group == PolarityGroupName(got.group)) ++matches;
  }
  return Check(matches == 100, std::to_string(matches) + "/100 label sets, " +
                                   std::to_string(boundary_cases) + " with s = +/-theta");
}

// -------------------------------------------------------- layout contracts

std::set<std::string> CardIds(const std::vector<Card> &cards) {
  std::set<std::string> out;
  for (const Card &c : cards) out.insert(c.article_id);
  return out;
}

Outcome LayoutContracts(const Snapshot &s) {
  std::vector<std::string> problems;
  for (const TopicAnalysis &t : s.topics) {
    const std::string &id = t.topic.id;
    std::map<std::string, std::set<std::string>> by_orientation, by_group;
    for (const Article *a : s.corpus.TopicArticles(id)) {
      if (a->orientation != Orientation::kUnknown) by_orientation[OrientationName(a->orientation)].insert(a->id);
    }
    for (const ArticleAnalysis &a : t.articles) {
      if (a.polarity.group != PolarityGroup::kNone) by_group[PolarityGroupName(a.polarity.group)].insert(a.article_id);
    }
    std::map<std::string, std::set<std::string>> got;
    for (const GroupColumn &c : BuildOverview(t, s.corpus, Layout::kPolsides, {}, 1).groups) got[c.group] = CardIds(c.cards);
    if (got != by_orientation) problems.push_back(id + ": polsides partition");
    got.clear();
    for (const GroupColumn &c : BuildOverview(t, s.corpus, Layout::kMfap, {}, 1).groups) got[c.group] = CardIds(c.cards);
    if (got != by_group) problems.push_back(id + ": mfap partition");

    OverviewModel plain = BuildOverview(t, s.corpus, Layout::kPlain, {}, 1);
    if (plain.further.size() != t.articles.size()) problems.push_back(id + ": plain size");
    for (size_t i = 1; i < plain.further.size(); ++i) {
      const double prev = t.event.event_relevance.at(plain.further[i - 1].article_id);
      const double cur = t.event.event_relevance.at(plain.further[i].article_id);
      if (!(prev > cur || (prev == cur && plain.further[i - 1].article_id < plain.further[i].article_id))) {
        problems.push_back(id + ": plain order at " + std::to_string(i));
      }
    }
  }
  auto columns = [&](const TopicAnalysis &t, uint64_t seed) {
    std::map<std::string, std::string> out;
    for (const GroupColumn &c : BuildOverview(t, s.corpus, Layout::kMfapRandom, {}, seed).groups) {
      for (const Card &card : c.cards) out[card.article_id] = c.group;
    }
    return out;
  };
  int differing = 0;
  for (const TopicAnalysis &t : s.topics) {
    if (columns(t, 1) != columns(t, 1)) problems.push_back(t.topic.id + ": mfap_random rerun");
    auto one = columns(t, 1), two = columns(t, 2);
    for (const auto &[article, group] : one) differing += two.at(article) != group;
  }
  if (differing == 0) problems.push_back("mfap_random seeds 1 and 2 agree everywhere");
  std::string detail = std::to_string(s.topics.size()) + " topics, " + std::to_string(differing) +
                       " articles move between seeds 1 and 2";
  for (const std::string &p : problems) detail += "; " + p;
  return Check(problems.empty(), detail);
}

// ------------------------------------------------------ highlight contracts

using Position = std::tuple<int, size_t, size_t>;

Outcome HighlightContracts() {
  Snapshot s = testing::MiniSnapshot();
  std::map<std::pair<std::string, int>, Polarity> gold;
  const std::string content = ReadFile(testing::TestData("highlight_gold.tsv"));
  for (std::string_view line : SplitLines(content)) {
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> f;
    std::stringstream ss{std::string(line)};
    for (std::string field; std::getline(ss, field, '\t');) f.push_back(field);
    gold[{f[0], std::stoi(f[1])}] = *ParsePolarity(f[2]);
  }
  std::vector<std::string> problems;
  int spans = 0;
  for (const Article &a : s.corpus.articles()) {
    const TopicAnalysis &t = *s.TopicOfArticle(a.id);
    auto view = [&](HighlightMode m) { return BuildArticleView(a, t, m, {}); };
    auto positions = [](const ArticleViewModel &v) {
      std::set<Position> out;
      for (const Highlight &h : v.highlights) out.emplace(h.sentence_index, h.span.begin, h.span.end);
      return out;
    };
    for (const auto &[index, label] : t.FindArticle(a.id)->mfa_labels) {
      auto it = gold.find({a.id, index});
      if (it == gold.end() || it->second != label.label) {
        problems.push_back(a.id + " sentence " + std::to_string(index) + " label");
      }
    }
    ArticleViewModel disabled = view(HighlightMode::kDisabled);
    ArticleViewModel single = view(HighlightMode::kSingle);
    ArticleViewModel two = view(HighlightMode::kTwo);
    ArticleViewModel three = view(HighlightMode::kThree);
    if (!disabled.highlights.empty()) problems.push_back(a.id + ": disabled has spans");
    auto p1 = positions(single), p2 = positions(two), p3 = positions(three);
    spans += static_cast<int>(p3.size());
    if (!std::includes(p3.begin(), p3.end(), p1.begin(), p1.end())) problems.push_back(a.id + ": single not in three");
    if (!std::includes(p3.begin(), p3.end(), p2.begin(), p2.end())) problems.push_back(a.id + ": two not in three");
    std::set<Position> neutral, diff;
    for (const Position &p : p3) {
      if (gold.at({a.id, std::get<0>(p)}) == Polarity::kNeutral) neutral.insert(p);
    }
    std::set_difference(p3.begin(), p3.end(), p2.begin(), p2.end(), std::inserter(diff, diff.begin()));
    if (diff != neutral) problems.push_back(a.id + ": three minus two is not the neutral spans");
    for (const Highlight &h : single.highlights) {
      if (h.color != HighlightColor::kGray) problems.push_back(a.id + ": single color");
    }
    for (const Highlight &h : two.highlights) {
      if (h.color == HighlightColor::kGray) problems.push_back(a.id + ": two color");
    }
  }
  std::string detail = std::to_string(spans) + " spans in three-color mode";
  for (const std::string &p : problems) detail += "; " + p;
  return Check(problems.empty(), detail);
}

// ------------------------------------------------------------ context bar

Outcome ContextBar(const Snapshot &fixture) {
  TopicAnalysis t;
  t.topic = Topic{"t", "t", {"a", "b", "c"}};
  t.event.mfa = "p";
  t.persons = {Person{"p", "P", {"P"}, {}, 0}};
  const double scores[] = {-1.0, 0.0, 1.0};
  const PolarityGroup groups[] = {PolarityGroup::kNegative, PolarityGroup::kAmbivalent, PolarityGroup::kPositive};
  std::vector<Article> articles;
  for (int i = 0; i < 3; ++i) {
    ArticleAnalysis aa;
    aa.article_id = std::string(1, static_cast<char>('a' + i));
    aa.polarity.score = scores[i];
    aa.polarity.group = groups[i];
    t.articles.push_back(aa);
    articles.push_back(testing::MakeArticle(aa.article_id, "t", "Body."));
  }
  ArticleViewModel v = BuildArticleView(articles[0], t, HighlightMode::kDisabled, {});
  const bool exact = v.context_bar.size() == 3 && v.context_bar[0].x == 0.0 &&
                     v.context_bar[1].x == 0.5 && v.context_bar[2].x == 1.0;
  int violations = 0;
  int views = 0;
  for (const TopicAnalysis &topic : fixture.topics) {
    for (const ArticleAnalysis &aa : topic.articles) {
      ArticleViewModel view = BuildArticleView(*fixture.corpus.FindArticle(aa.article_id), topic,
                                               HighlightMode::kDisabled, {});
      ++views;
      for (size_t i = 0; i < view.context_bar.size(); ++i) {
        const ContextPoint &p = view.context_bar[i];
        const double s = topic.FindArticle(p.article_id)->polarity.score;
        if (p.x != (s + 1.0) / 2.0) ++violations;
        if (i > 0) {
          const double prev = topic.FindArticle(view.context_bar[i - 1].article_id)->polarity.score;
          if (prev > s || (prev < s && !(view.context_bar[i - 1].x < p.x))) ++violations;
        }
      }
    }
  }
  return Check(exact && violations == 0,
               std::string(exact ? "x(-1,0,1) = (0, 0.5, 1)" : "endpoint mismatch") + ", " +
                   std::to_string(violations) + " ordering violations over " +
                   std::to_string(views) + " views");
}

// -------------------------------------------------------- AMCE recovery

Outcome AmceRecovery() {
  const SyntheticDesign design = DefaultSyntheticDesign();
  std::map<std::string, double> truth;
  for (const SyntheticAttribute &a : design.attributes) {
    for (const auto &[level, effect] : a.levels) truth[a.name + "=" + level] = effect;
  }
  const std::map<std::string, std::string> baselines = {{"overview", "plain_none"},
                                                        {"topic", "gun_control"}};
  std::map<std::string, int> good;
  int all_good_reps = 0;
  auto start = Clock::now();
  for (int rep = 0; rep < 100; ++rep) {
    ConjointData data = GenerateResponses(design, 1000 + rep);
    bool all = true;
    for (const AmceEstimate &e : EstimateAmce(data, baselines, SeMode::kClusterByRespondent)) {
      if (e.is_baseline) continue;
      const double t = truth.at(e.attribute + "=" + e.level);
      const bool ok = std::abs(e.estimate - t) <= 0.2 && std::abs(e.estimate - t) <= 2.0 * e.se;
      good[e.attribute + "=" + e.level] += ok;
      all = all && ok;
    }
    all_good_reps += all;
  }
  const double elapsed = Seconds(start);
  bool pass = elapsed < 60.0 && good.size() == 4;
  std::string detail;
  for (const auto &[name, n] : good) {
    detail += name + " " + std::to_string(n) + "/100, ";
    pass = pass && n >= 93;
  }
  detail += "all four jointly " + std::to_string(all_good_reps) + "/100, " +
            Fixed(elapsed, 2) + " s";
  return Check(pass, detail);
}

// ------------------------------------------------- published study data

Outcome PublishedTable() {
  const char *path = std::getenv("NEWSLENS_E2_DATA");
  if (path == nullptr || *path == '\0') {
    return {Outcome::kBlocked,
            "published per-task responses unavailable; set NEWSLENS_E2_DATA to a response "
            "CSV to run"};
  }
  ConjointData data = LoadResponses(path);
  auto est = EstimateAmce(data, {{"overview", "plain_none"}, {"topic", "bushfires"}},
                          SeMode::kClusterByRespondent);
  struct Row {
    const char *attribute, *level;
    double estimate, se;
  };
  const Row rows[] = {{"overview", "polsides_polsides", 7.83, 2.06},
                      {"overview", "mfap_none", 6.13, 2.00},
                      {"overview", "mfap_random", 5.76, 2.40},
                      {"topic", "debt_ceiling", -1.52, 0.78}};
  bool pass = true;
  std::string detail;
  for (const Row &r : rows) {
    auto it = std::find_if(est.begin(), est.end(), [&](const AmceEstimate &e) {
      return e.attribute == r.attribute && e.level == r.level;
    });
    if (it == est.end()) return Fail(std::string("level ") + r.level + " missing");
    pass = pass && std::abs(it->estimate - r.estimate) <= 0.01 && std::abs(it->se - r.se) <= 0.05;
    detail += std::string(r.level) + " " + Fixed(it->estimate, 2) + " (" +
              Fixed(it->se, 2) + ") ";
  }
  return Check(pass, detail);
}

// ---------------------------------------------------------- server parity

Outcome ServerParity(const Snapshot &s) {
  testing::TempDir dir;
  WriteFile(dir / "study.json", SerializeSnapshot(s));
  auto store = std::make_shared<SnapshotStore>(dir.path());
  HttpServer server(store);
  const int port = server.Bind("127.0.0.1", 0);
  std::thread thread([&] { server.Run(); });
  server.WaitUntilReady();
  httplib::Client client("127.0.0.1", port);
  client.set_read_timeout(10, 0);

  std::mt19937_64 rng(50);
  const char *layouts[] = {"plain", "polsides", "mfap", "mfap_random"};
  const char *tags[] = {"none", "polsides", "mfap", "both"};
  const char *modes[] = {"disabled", "single", "two", "three"};
  int identical = 0;
  for (int q = 0; q < 50; ++q) {
    const std::string tag = tags[rng() % 4];
    const TagConfig config = *TagConfig::Parse(tag);
    std::string path, expected;
    if (q % 2 == 0) {
      const TopicAnalysis &t = s.topics[rng() % s.topics.size()];
      const std::string layout = layouts[rng() % 4];
      const uint64_t seed = rng() % 100;
      path = "/topics/" + t.topic.id + "/overview?layout=" + layout + "&tags=" + tag +
             "&seed=" + std::to_string(seed);
      expected = SerializeOverview(BuildOverview(t, s.corpus, ParseLayout(layout), config, seed));
    } else {
      const Article &a = s.corpus.articles()[rng() % s.corpus.articles().size()];
      const std::string mode = modes[rng() % 4];
      path = "/articles/" + a.id + "/view?highlight=" + mode + "&tags=" + tag;
      expected = SerializeArticleView(
          BuildArticleView(a, *s.TopicOfArticle(a.id), *ParseHighlightMode(mode), config));
    }
    auto r = client.Get(path);
    if (r && r->status == 200 && r->body == expected) ++identical;
  }
  server.Stop();
  thread.join();
  return Check(identical == 50, std::to_string(identical) + "/50 bodies byte-identical");
}

}  // namespace
}  // namespace newslens

int main() {
  using newslens::Outcome;
  const newslens::Snapshot fixture = newslens::testing::StudySnapshot();
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"pipeline-determinism", newslens::Determinism},
      {"mfa-oracle", newslens::MfaOracle},
      {"grouping-oracle", newslens::GroupingOracle},
      {"layout-contracts", [&] { return newslens::LayoutContracts(fixture); }},
      {"highlight-contracts", newslens::HighlightContracts},
      {"context-bar", [&] { return newslens::ContextBar(fixture); }},
      {"amce-synthetic-recovery", newslens::AmceRecovery},
      {"published-table-reproduction", newslens::PublishedTable},
      {"server-parity", [&] { return newslens::ServerParity(fixture); }},
  };
  int failures = 0;
  for (const auto &[name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception &e) {
      o = {Outcome::kFail, std::string("exception: ") + e.what()};
    }
    const char *status = o.status == Outcome::kPass   ? "PASS"
                         : o.status == Outcome::kFail ? "FAIL"
                                                      : "BLOCKED";
    failures += o.status == Outcome::kFail;
    std::cout << status << " " << name << ": " << o.detail << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
