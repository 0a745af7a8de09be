#include "newslens/polarity.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "newslens/error.h"
#include "newslens/util.h"

namespace newslens {

const char *PolarityName(Polarity polarity) {
  switch (polarity) {
    case Polarity::kPositive: return "positive";
    case Polarity::kNeutral: return "neutral";
    case Polarity::kNegative: return "negative";
  }
  return "neutral";
}

std::optional<Polarity> ParsePolarity(std::string_view name) {
  if (name == "positive") return Polarity::kPositive;
  if (name == "neutral") return Polarity::kNeutral;
  if (name == "negative") return Polarity::kNegative;
  return std::nullopt;
}

PolarityLabel PolarityLabel::FromProbabilities(double positive, double neutral,
                                               double negative) {
  PolarityLabel l;
  l.positive = positive;
  l.neutral = neutral;
  l.negative = negative;
  if (neutral >= positive && neutral >= negative) {
    l.label = Polarity::kNeutral;
  } else if (positive >= negative) {
    l.label = Polarity::kPositive;
  } else {
    l.label = Polarity::kNegative;
  }
  return l;
}

const char *ClassifierKindName(ClassifierKind kind) {
  return kind == ClassifierKind::kLexicon ? "lexicon" : "sidecar";
}

std::string LowercaseToken(std::string_view token) {
  std::string out;
  out.reserve(token.size());
  for (size_t i = 0; i < token.size(); ++i) {
    if (token.compare(i, 3, "\xE2\x80\x99") == 0) {
      out += '\'';
      i += 2;
      continue;
    }
    char c = token[i];
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    out += c;
  }
  return out;
}

void Lexicon::Add(std::string term, double value) {
  if (!std::isfinite(value) || value < -1.0 || value > 1.0) {
    throw Error(ErrorCode::kInvalidInput,
                "lexicon value for '" + term + "' outside [-1, 1]");
  }
  std::string key = LowercaseToken(term);
  if (key.empty()) throw Error(ErrorCode::kInvalidInput, "empty lexicon term");
  if (!values_.emplace(key, value).second) {
    throw Error(ErrorCode::kInvalidInput, "duplicate lexicon term '" + key + "'");
  }
}

std::optional<double> Lexicon::Find(std::string_view lowercase_term) const {
  auto it = values_.find(std::string(lowercase_term));
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

Lexicon Lexicon::Negated() const {
  Lexicon out;
  for (const auto &[term, value] : values_) out.values_.emplace(term, -value);
  return out;
}

Lexicon Lexicon::Parse(std::string_view content) {
  Lexicon lexicon;
  int line_no = 0;
  for (std::string_view line : SplitLines(content)) {
    ++line_no;
    if (TrimWhitespace(line).empty() || line.front() == '#') continue;
    size_t tab = line.find('\t');
    if (tab == std::string_view::npos) {
      throw Error(ErrorCode::kInvalidInput, line_no,
                  "lexicon line must be term<TAB>value");
    }
    std::string term(TrimWhitespace(line.substr(0, tab)));
    std::string number(TrimWhitespace(line.substr(tab + 1)));
    char *end = nullptr;
    double value = std::strtod(number.c_str(), &end);
    if (number.empty() || end != number.c_str() + number.size()) {
      throw Error(ErrorCode::kInvalidInput, line_no,
                  "lexicon value '" + number + "' is not a number");
    }
    try {
      lexicon.Add(std::move(term), value);
    } catch (const Error &e) {
      throw Error(e.code(), line_no, e.detail());
    }
  }
  return lexicon;
}

Lexicon Lexicon::Load(const std::filesystem::path &path) {
  return Parse(ReadFile(path));
}

bool NegationList::IsNegation(std::string_view lowercase_token) const {
  if (words_.count(std::string(lowercase_token)) != 0) return true;
  return lowercase_token.size() > 3 &&
         lowercase_token.substr(lowercase_token.size() - 3) == "n't";
}

NegationList NegationList::Parse(std::string_view content) {
  std::unordered_set<std::string> words;
  for (std::string_view line : SplitLines(content)) {
    std::string_view word = TrimWhitespace(line);
    if (word.empty() || word.front() == '#') continue;
    words.insert(LowercaseToken(word));
  }
  return NegationList(std::move(words));
}

NegationList NegationList::Load(const std::filesystem::path &path) {
  return Parse(ReadFile(path));
}

NegationList NegationList::Default() {
  return NegationList({"not", "no", "never", "nobody", "nothing", "none",
                       "neither", "nor", "nowhere", "hardly", "barely",
                       "cannot", "without", "lack", "lacks", "lacked"});
}

LexiconClassifier::LexiconClassifier(Lexicon lexicon, NegationList negations,
                                     int window, int negation_reach)
    : lexicon_(std::move(lexicon)),
      negations_(std::move(negations)),
      window_(window),
      negation_reach_(negation_reach) {}

ClassifierInfo LexiconClassifier::Info() const {
  return ClassifierInfo{"lexicon-window", ClassifierKind::kLexicon, std::nullopt};
}

double LexiconClassifier::Score(std::string_view sentence, Span target) const {
  if (target.begin >= target.end || target.end > sentence.size()) {
    throw Error(ErrorCode::kInvalidInput, "target span outside sentence");
  }
  std::vector<Token> tokens = Tokenize(sentence);
  int first = -1;
  int last = -1;
  for (int i = 0; i < static_cast<int>(tokens.size()); ++i) {
    if (tokens[i].span.Overlaps(target)) {
      if (first < 0) first = i;
      last = i;
    }
  }
  if (first < 0) {
    throw Error(ErrorCode::kInvalidInput, "target span covers no token");
  }
  std::vector<std::string> lower;
  lower.reserve(tokens.size());
  for (const Token &t : tokens) lower.push_back(LowercaseToken(t.text));

  const int lo = std::max(0, first - window_);
  const int hi = std::min(static_cast<int>(tokens.size()) - 1, last + window_);
  double score = 0.0;
  for (int i = lo; i <= hi; ++i) {
    if (i >= first && i <= last) continue;
    auto value = lexicon_.Find(lower[i]);
    if (!value) continue;
    bool negated = false;
    for (int k = std::max(0, i - negation_reach_); k < i; ++k) {
      if (negations_.IsNegation(lower[k])) negated = true;
    }
    score += negated ? -*value : *value;
  }
  return score;
}

PolarityLabel LexiconClassifier::Classify(std::string_view sentence,
                                          Span target) const {
  double score = Score(sentence, target);
  if (score > 0) return PolarityLabel::FromProbabilities(0.8, 0.1, 0.1);
  if (score < 0) return PolarityLabel::FromProbabilities(0.1, 0.1, 0.8);
  return PolarityLabel::FromProbabilities(0.1, 0.8, 0.1);
}

const char *PolarityGroupName(PolarityGroup group) {
  switch (group) {
    case PolarityGroup::kPositive: return "positive";
    case PolarityGroup::kAmbivalent: return "ambivalent";
    case PolarityGroup::kNegative: return "negative";
    case PolarityGroup::kNone: return "none";
  }
  return "none";
}

std::optional<PolarityGroup> ParsePolarityGroup(std::string_view name) {
  if (name == "positive") return PolarityGroup::kPositive;
  if (name == "ambivalent") return PolarityGroup::kAmbivalent;
  if (name == "negative") return PolarityGroup::kNegative;
  if (name == "none") return PolarityGroup::kNone;
  return std::nullopt;
}

double PolarityScore(const PolarityCounts &counts) {
  const int polar = counts.positive + counts.negative;
  return static_cast<double>(counts.positive - counts.negative) /
         static_cast<double>(std::max(1, polar));
}

PolarityGroup GroupFor(const PolarityCounts &counts, double theta) {
  if (counts.total() == 0) return PolarityGroup::kNone;
  const double s = PolarityScore(counts);
  if (s >= theta) return PolarityGroup::kPositive;
  if (s <= -theta) return PolarityGroup::kNegative;
  return PolarityGroup::kAmbivalent;
}

ArticlePolarity AggregatePolarity(const std::string &article_id,
                                  const std::string &person_id,
                                  const std::vector<PolarityLabel> &labels,
                                  double theta) {
  ArticlePolarity out;
  out.article_id = article_id;
  out.person_id = person_id;
  for (const PolarityLabel &l : labels) {
    switch (l.label) {
      case Polarity::kPositive: ++out.counts.positive; break;
      case Polarity::kNegative: ++out.counts.negative; break;
      case Polarity::kNeutral: ++out.counts.neutral; break;
    }
  }
  out.score = PolarityScore(out.counts);
  out.group = GroupFor(out.counts, theta);
  return out;
}

}  // namespace newslens
