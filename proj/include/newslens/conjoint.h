#ifndef NEWSLENS_CONJOINT_H_
#define NEWSLENS_CONJOINT_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace newslens {

struct ConjointResponse {
  std::string respondent_id;
  int task_index = 0;
  std::map<std::string, std::string> attributes;  // attribute -> level
  double outcome = 0.0;
};

struct ConjointData {
  std::vector<std::string> attributes;  // in file column order
  std::vector<ConjointResponse> responses;
};

// CSV with header respondent_id,task_index,<attribute columns...>,outcome.
// Throws Error(kInvalidInput) with the offending line.
ConjointData ParseResponses(std::string_view csv);
ConjointData LoadResponses(const std::filesystem::path &path);
std::string SerializeResponses(const ConjointData &data);

enum class SeMode { kClassical, kClusterByRespondent };
std::optional<SeMode> ParseSeMode(std::string_view name);  // classical|cluster

struct AmceEstimate {
  std::string attribute;
  std::string level;
  double estimate = 0.0;
  double se = 0.0;
  double z = 0.0;
  double p = 1.0;  // two-sided normal tail
  bool is_baseline = false;
};

// "attr=level,attr=level". Throws Error(kInvalidConfig).
std::map<std::string, std::string> ParseBaselines(std::string_view spec);

// Joint OLS of the outcome on an intercept plus dummies for every
// non-baseline level of every attribute. Attributes without an entry in
// `baselines` use their lexicographically smallest level. Results list
// attributes in data order, baseline first, then the other levels sorted.
//
// Classical SEs use s^2 (X'X)^-1 with s^2 = RSS / (n - k). Cluster SEs are
// the respondent-clustered sandwich with the G/(G-1) * (n-1)/(n-k)
// small-sample factor.
//
// Throws kMissingBaseline (baseline level or attribute not in the data),
// kRankDeficient (a pivot below 1e-10 * max diagonal of X'X, including
// attributes with a single level, or n <= k), kInvalidInput (fewer than two
// respondents in cluster mode).
std::vector<AmceEstimate> EstimateAmce(
    const ConjointData &data, const std::map<std::string, std::string> &baselines,
    SeMode se_mode = SeMode::kClusterByRespondent);

// Two-sided standard normal tail probability P(|Z| > |z|).
double TwoSidedNormalP(double z);

// Fixed-width table in the style of a regression summary.
std::string FormatAmceTable(const std::vector<AmceEstimate> &estimates);
// One JSON object per line with the AmceEstimate fields.
std::string SerializeAmceRecords(const std::vector<AmceEstimate> &estimates);

// Fully randomized synthetic design with additive level effects and
// Gaussian noise. Levels are drawn uniformly and independently per task.
struct SyntheticAttribute {
  std::string name;
  std::vector<std::pair<std::string, double>> levels;  // level, true effect
};

struct SyntheticDesign {
  std::vector<SyntheticAttribute> attributes;
  double intercept = 50.0;
  double noise_sd = 2.0;
  int respondents = 1000;
  int tasks_per_respondent = 5;
};

// Four overview levels and two topics with fixed effects, 5000 responses.
SyntheticDesign DefaultSyntheticDesign();

ConjointData GenerateResponses(const SyntheticDesign &design, uint64_t seed);

}  // namespace newslens

#endif  // NEWSLENS_CONJOINT_H_
