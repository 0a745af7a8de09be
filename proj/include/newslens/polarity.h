#ifndef NEWSLENS_POLARITY_H_
#define NEWSLENS_POLARITY_H_

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "newslens/textproc.h"

namespace newslens {

enum class Polarity { kPositive, kNeutral, kNegative };
const char *PolarityName(Polarity polarity);
std::optional<Polarity> ParsePolarity(std::string_view name);

// Class distribution for one (sentence, target) pair.
struct PolarityLabel {
  double positive = 0.0;
  double neutral = 1.0;
  double negative = 0.0;
  Polarity label = Polarity::kNeutral;

  // Argmax with ties resolved neutral > positive > negative.
  static PolarityLabel FromProbabilities(double positive, double neutral,
                                         double negative);
  bool operator==(const PolarityLabel &) const = default;
};

enum class ClassifierKind { kLexicon, kSidecar };
const char *ClassifierKindName(ClassifierKind kind);

struct ClassifierInfo {
  std::string name;
  ClassifierKind kind = ClassifierKind::kLexicon;
  // Published macro F1 of the backing model, descriptive only.
  std::optional<double> reported_f1;
};

// Target-dependent sentiment classifier. Implementations must be safe to
// call concurrently.
class TargetClassifier {
 public:
  virtual ~TargetClassifier() = default;
  virtual ClassifierInfo Info() const = 0;
  // `target` is a byte span into `sentence`.
  virtual PolarityLabel Classify(std::string_view sentence, Span target) const = 0;
};

// Term -> valence in [-1, 1]. Terms are matched lowercase.
class Lexicon {
 public:
  void Add(std::string term, double value);
  std::optional<double> Find(std::string_view lowercase_term) const;
  size_t size() const { return values_.size(); }

  // Copy with every value's sign flipped.
  Lexicon Negated() const;

  // TSV term<TAB>value. Throws Error(kInvalidInput).
  static Lexicon Parse(std::string_view content);
  static Lexicon Load(const std::filesystem::path &path);

 private:
  std::unordered_map<std::string, double> values_;
};

class NegationList {
 public:
  NegationList() = default;
  explicit NegationList(std::unordered_set<std::string> words)
      : words_(std::move(words)) {}

  // Also true for contractions ending in n't.
  bool IsNegation(std::string_view lowercase_token) const;

  // One token per line.
  static NegationList Parse(std::string_view content);
  static NegationList Load(const std::filesystem::path &path);
  // not, no, never, nobody, nothing, none, neither, nor, hardly, ...
  static NegationList Default();

 private:
  std::unordered_set<std::string> words_;
};

// Sums lexicon values of tokens within `window` tokens of the target; a
// negation among the `negation_reach` tokens before a hit flips its sign.
// The chosen class gets 0.8, the other two 0.1 each.
class LexiconClassifier : public TargetClassifier {
 public:
  static constexpr int kDefaultWindow = 6;
  static constexpr int kDefaultNegationReach = 3;

  LexiconClassifier(Lexicon lexicon, NegationList negations,
                    int window = kDefaultWindow,
                    int negation_reach = kDefaultNegationReach);

  ClassifierInfo Info() const override;
  PolarityLabel Classify(std::string_view sentence, Span target) const override;

  // Raw window score. Throws Error(kInvalidInput) for a span outside the
  // sentence or covering no token.
  double Score(std::string_view sentence, Span target) const;

 private:
  Lexicon lexicon_;
  NegationList negations_;
  int window_;
  int negation_reach_;
};

std::string LowercaseToken(std::string_view token);

enum class PolarityGroup { kPositive, kAmbivalent, kNegative, kNone };
const char *PolarityGroupName(PolarityGroup group);
std::optional<PolarityGroup> ParsePolarityGroup(std::string_view name);

struct PolarityCounts {
  int positive = 0;
  int negative = 0;
  int neutral = 0;

  int total() const { return positive + negative + neutral; }
  bool operator==(const PolarityCounts &) const = default;
};

struct ArticlePolarity {
  std::string article_id;
  std::string person_id;
  PolarityCounts counts;
  double score = 0.0;  // in [-1, 1]
  PolarityGroup group = PolarityGroup::kNone;

  bool operator==(const ArticlePolarity &) const = default;
};

constexpr double kDefaultTheta = 0.25;

// (P - N) / max(1, P + N).
double PolarityScore(const PolarityCounts &counts);

// none without labels; positive if score >= theta; negative if
// score <= -theta; ambivalent otherwise.
PolarityGroup GroupFor(const PolarityCounts &counts, double theta);

// `labels` holds one label per sentence that mentions the person.
ArticlePolarity AggregatePolarity(const std::string &article_id,
                                  const std::string &person_id,
                                  const std::vector<PolarityLabel> &labels,
                                  double theta = kDefaultTheta);

}  // namespace newslens

#endif  // NEWSLENS_POLARITY_H_
