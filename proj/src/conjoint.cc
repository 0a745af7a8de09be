#include "newslens/conjoint.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>

#include "json.hpp"
#include "newslens/csv.h"
#include "newslens/error.h"
#include "newslens/util.h"

namespace newslens {
namespace {

constexpr double kPivotTolerance = 1e-10;

using Matrix = std::vector<std::vector<double>>;

// Inverts a symmetric positive semi-definite matrix by Gauss-Jordan
// elimination with partial pivoting.
Matrix Invert(Matrix a) {
  const size_t k = a.size();
  double max_diag = 0.0;
  for (size_t i = 0; i < k; ++i) max_diag = std::max(max_diag, std::fabs(a[i][i]));
  const double tolerance = kPivotTolerance * max_diag;

  Matrix inv(k, std::vector<double>(k, 0.0));
  for (size_t i = 0; i < k; ++i) inv[i][i] = 1.0;
  for (size_t col = 0; col < k; ++col) {
    size_t pivot = col;
    for (size_t r = col + 1; r < k; ++r) {
      if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
    }
    if (!(std::fabs(a[pivot][col]) > tolerance)) {
      throw Error(ErrorCode::kRankDeficient,
                  "design matrix is singular (collinear dummies)");
    }
    std::swap(a[pivot], a[col]);
    std::swap(inv[pivot], inv[col]);
    const double d = a[col][col];
    for (size_t c = 0; c < k; ++c) {
      a[col][c] /= d;
      inv[col][c] /= d;
    }
    for (size_t r = 0; r < k; ++r) {
      if (r == col) continue;
      const double f = a[r][col];
      if (f == 0.0) continue;
      for (size_t c = 0; c < k; ++c) {
        a[r][c] -= f * a[col][c];
        inv[r][c] -= f * inv[col][c];
      }
    }
  }
  return inv;
}

Matrix Multiply(const Matrix &a, const Matrix &b) {
  const size_t n = a.size();
  const size_t m = b.front().size();
  Matrix out(n, std::vector<double>(m, 0.0));
  for (size_t i = 0; i < n; ++i) {
    for (size_t l = 0; l < b.size(); ++l) {
      if (a[i][l] == 0.0) continue;
      for (size_t j = 0; j < m; ++j) out[i][j] += a[i][l] * b[l][j];
    }
  }
  return out;
}

struct Column {
  std::string attribute;
  std::string level;
};

std::string FormatNumber(double v, int precision) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.*f", precision, v);
  return buffer;
}

std::string FormatP(double p) {
  if (p < 0.001) return "<.001***";
  std::string digits = FormatNumber(p, 3);
  if (digits.rfind("0.", 0) == 0) digits = digits.substr(1);
  if (p < 0.01) return digits + "**";
  if (p < 0.05) return digits + "*";
  return digits;
}

}  // namespace

ConjointData ParseResponses(std::string_view csv) {
  auto rows = ParseCsv(csv);
  if (rows.empty()) throw Error(ErrorCode::kInvalidInput, "empty response file");
  const auto &header = rows.front();
  if (header.size() < 4 || header.front() != "respondent_id" ||
      header[1] != "task_index" || header.back() != "outcome") {
    throw Error(ErrorCode::kInvalidInput, 1,
                "header must be respondent_id,task_index,<attributes...>,outcome");
  }
  ConjointData data;
  std::set<std::string> seen;
  for (size_t c = 2; c + 1 < header.size(); ++c) {
    if (header[c].empty() || !seen.insert(header[c]).second) {
      throw Error(ErrorCode::kInvalidInput, 1,
                  "attribute column names must be unique and non-empty");
    }
    data.attributes.push_back(header[c]);
  }
  for (size_t r = 1; r < rows.size(); ++r) {
    const auto &row = rows[r];
    const int line = static_cast<int>(r + 1);
    if (row.size() != header.size()) {
      throw Error(ErrorCode::kInvalidInput, line,
                  "expected " + std::to_string(header.size()) + " fields");
    }
    ConjointResponse response;
    response.respondent_id = row[0];
    if (response.respondent_id.empty()) {
      throw Error(ErrorCode::kInvalidInput, line, "empty respondent_id");
    }
    try {
      size_t used = 0;
      response.task_index = std::stoi(row[1], &used);
      if (used != row[1].size()) throw std::invalid_argument("trailing");
      response.outcome = std::stod(row.back(), &used);
      if (used != row.back().size()) throw std::invalid_argument("trailing");
    } catch (const std::exception &) {
      throw Error(ErrorCode::kInvalidInput, line, "task_index or outcome is not a number");
    }
    if (!std::isfinite(response.outcome)) {
      throw Error(ErrorCode::kInvalidInput, line, "outcome is not finite");
    }
    for (size_t c = 0; c < data.attributes.size(); ++c) {
      const std::string &level = row[c + 2];
      if (level.empty()) {
        throw Error(ErrorCode::kInvalidInput, line,
                    "empty level for attribute '" + data.attributes[c] + "'");
      }
      response.attributes[data.attributes[c]] = level;
    }
    data.responses.push_back(std::move(response));
  }
  return data;
}

ConjointData LoadResponses(const std::filesystem::path &path) {
  return ParseResponses(ReadFile(path));
}

std::string SerializeResponses(const ConjointData &data) {
  std::ostringstream out;
  out << "respondent_id,task_index";
  for (const std::string &a : data.attributes) out << ',' << CsvField(a);
  out << ",outcome\n";
  for (const ConjointResponse &r : data.responses) {
    out << CsvField(r.respondent_id) << ',' << r.task_index;
    for (const std::string &a : data.attributes) {
      out << ',' << CsvField(r.attributes.at(a));
    }
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.17g", r.outcome);
    out << ',' << buffer << '\n';
  }
  return out.str();
}

std::optional<SeMode> ParseSeMode(std::string_view name) {
  if (name == "classical") return SeMode::kClassical;
  if (name == "cluster") return SeMode::kClusterByRespondent;
  return std::nullopt;
}

std::map<std::string, std::string> ParseBaselines(std::string_view spec) {
  std::map<std::string, std::string> out;
  size_t start = 0;
  while (start <= spec.size()) {
    size_t comma = spec.find(',', start);
    std::string_view item = TrimWhitespace(spec.substr(
        start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (!item.empty()) {
      size_t eq = item.find('=');
      if (eq == std::string_view::npos || eq == 0 || eq + 1 == item.size()) {
        throw Error(ErrorCode::kInvalidConfig,
                    "baseline '" + std::string(item) + "' is not attr=level");
      }
      std::string attribute(TrimWhitespace(item.substr(0, eq)));
      std::string level(TrimWhitespace(item.substr(eq + 1)));
      if (!out.emplace(attribute, level).second) {
        throw Error(ErrorCode::kInvalidConfig,
                    "baseline for '" + attribute + "' given twice");
      }
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double TwoSidedNormalP(double z) { return std::erfc(std::fabs(z) / std::sqrt(2.0)); }

std::vector<AmceEstimate> EstimateAmce(
    const ConjointData &data, const std::map<std::string, std::string> &baselines,
    SeMode se_mode) {
  for (const auto &[attribute, level] : baselines) {
    if (std::find(data.attributes.begin(), data.attributes.end(), attribute) ==
        data.attributes.end()) {
      throw Error(ErrorCode::kMissingBaseline,
                  "baseline names unknown attribute '" + attribute + "'");
    }
  }

  // Level sets and the chosen baseline per attribute.
  std::vector<std::string> baseline_of;
  std::vector<Column> columns;  // non-intercept columns
  std::vector<std::unordered_map<std::string, int>> column_of(data.attributes.size());
  for (size_t a = 0; a < data.attributes.size(); ++a) {
    const std::string &attribute = data.attributes[a];
    std::set<std::string> levels;
    for (const ConjointResponse &r : data.responses) levels.insert(r.attributes.at(attribute));
    std::string baseline;
    if (auto it = baselines.find(attribute); it != baselines.end()) {
      baseline = it->second;
      if (levels.count(baseline) == 0) {
        throw Error(ErrorCode::kMissingBaseline,
                    "baseline level '" + baseline + "' of '" + attribute +
                        "' never occurs");
      }
    } else if (!levels.empty()) {
      baseline = *levels.begin();
    }
    if (levels.size() < 2) {
      throw Error(ErrorCode::kRankDeficient,
                  "attribute '" + attribute + "' has fewer than two levels");
    }
    baseline_of.push_back(baseline);
    for (const std::string &level : levels) {
      if (level == baseline) continue;
      column_of[a][level] = static_cast<int>(columns.size()) + 1;
      columns.push_back(Column{attribute, level});
    }
  }

  const size_t n = data.responses.size();
  const size_t k = columns.size() + 1;
  if (n <= k) {
    throw Error(ErrorCode::kRankDeficient,
                std::to_string(n) + " responses for " + std::to_string(k) + " coefficients");
  }

  // Sparse rows: intercept plus one active dummy per non-baseline attribute.
  std::vector<std::vector<int>> active(n);
  double mean = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const ConjointResponse &r = data.responses[i];
    active[i].push_back(0);
    for (size_t a = 0; a < data.attributes.size(); ++a) {
      auto it = column_of[a].find(r.attributes.at(data.attributes[a]));
      if (it != column_of[a].end()) active[i].push_back(it->second);
    }
    mean += r.outcome;
  }
  mean /= static_cast<double>(n);

  // The outcome is centred so that a constant shift only moves the
  // intercept and a constant outcome gives exact zeros.
  Matrix xtx(k, std::vector<double>(k, 0.0));
  std::vector<double> xty(k, 0.0);
  std::vector<double> y(n);
  for (size_t i = 0; i < n; ++i) {
    y[i] = data.responses[i].outcome - mean;
    for (int p : active[i]) {
      xty[p] += y[i];
      for (int q : active[i]) xtx[p][q] += 1.0;
    }
  }
  const Matrix inv = Invert(xtx);
  std::vector<double> beta(k, 0.0);
  for (size_t p = 0; p < k; ++p) {
    for (size_t q = 0; q < k; ++q) beta[p] += inv[p][q] * xty[q];
  }
  std::vector<double> residual(n);
  double rss = 0.0;
  for (size_t i = 0; i < n; ++i) {
    double fitted = 0.0;
    for (int p : active[i]) fitted += beta[p];
    residual[i] = y[i] - fitted;
    rss += residual[i] * residual[i];
  }

  Matrix cov;
  if (se_mode == SeMode::kClassical) {
    const double sigma2 = rss / static_cast<double>(n - k);
    cov = inv;
    for (auto &row : cov) {
      for (double &v : row) v *= sigma2;
    }
  } else {
    std::map<std::string, std::vector<double>> scores;
    for (size_t i = 0; i < n; ++i) {
      auto &s = scores[data.responses[i].respondent_id];
      if (s.empty()) s.assign(k, 0.0);
      for (int p : active[i]) s[p] += residual[i];
    }
    const size_t groups = scores.size();
    if (groups < 2) {
      throw Error(ErrorCode::kInvalidInput,
                  "cluster-robust errors need at least two respondents");
    }
    Matrix meat(k, std::vector<double>(k, 0.0));
    for (const auto &[id, s] : scores) {
      for (size_t p = 0; p < k; ++p) {
        if (s[p] == 0.0) continue;
        for (size_t q = 0; q < k; ++q) meat[p][q] += s[p] * s[q];
      }
    }
    const double g = static_cast<double>(groups);
    const double correction = (g / (g - 1.0)) *
                              (static_cast<double>(n - 1) / static_cast<double>(n - k));
    cov = Multiply(Multiply(inv, meat), inv);
    for (auto &row : cov) {
      for (double &v : row) v *= correction;
    }
  }

  std::vector<AmceEstimate> out;
  for (size_t a = 0; a < data.attributes.size(); ++a) {
    AmceEstimate base;
    base.attribute = data.attributes[a];
    base.level = baseline_of[a];
    base.is_baseline = true;
    out.push_back(base);
    for (size_t c = 0; c < columns.size(); ++c) {
      if (columns[c].attribute != data.attributes[a]) continue;
      AmceEstimate e;
      e.attribute = columns[c].attribute;
      e.level = columns[c].level;
      e.estimate = beta[c + 1];
      e.se = std::sqrt(std::max(0.0, cov[c + 1][c + 1]));
      if (e.se > 0.0) {
        e.z = e.estimate / e.se;
      } else {
        e.z = e.estimate == 0.0 ? 0.0 : std::copysign(INFINITY, e.estimate);
      }
      e.p = TwoSidedNormalP(e.z);
      out.push_back(std::move(e));
    }
  }
  return out;
}

std::string FormatAmceTable(const std::vector<AmceEstimate> &estimates) {
  size_t attr_width = 9;
  size_t level_width = 5;
  for (const AmceEstimate &e : estimates) {
    attr_width = std::max(attr_width, e.attribute.size());
    level_width = std::max(level_width, e.level.size() + (e.is_baseline ? 2 : 0));
  }
  auto pad = [](std::string s, size_t width, bool right) {
    if (s.size() >= width) return s;
    return right ? std::string(width - s.size(), ' ') + s
                 : s + std::string(width - s.size(), ' ');
  };
  std::ostringstream out;
  out << pad("Attribute", attr_width, false) << "  " << pad("Level", level_width, false)
      << "  " << pad("Est.", 8, true) << "  " << pad("SE", 7, true) << "  "
      << pad("z", 7, true) << "  " << "Pr(>|z|)\n";
  for (const AmceEstimate &e : estimates) {
    out << pad(e.attribute, attr_width, false) << "  ";
    if (e.is_baseline) {
      out << pad("(" + e.level + ")", level_width, false) << "  " << pad("0", 8, true)
          << "  " << pad("-", 7, true) << "  " << pad("-", 7, true) << "  -\n";
      continue;
    }
    out << pad(e.level, level_width, false) << "  "
        << pad(FormatNumber(e.estimate, 2), 8, true) << "  "
        << pad(FormatNumber(e.se, 2), 7, true) << "  "
        << pad(FormatNumber(e.z, 2), 7, true) << "  " << FormatP(e.p) << "\n";
  }
  return out.str();
}

std::string SerializeAmceRecords(const std::vector<AmceEstimate> &estimates) {
  std::string out;
  for (const AmceEstimate &e : estimates) {
    nlohmann::ordered_json j;
    j["attribute"] = e.attribute;
    j["level"] = e.level;
    j["estimate"] = e.estimate;
    j["se"] = e.se;
    j["z"] = e.z;
    j["p"] = e.p;
    j["is_baseline"] = e.is_baseline;
    out += j.dump();
    out += '\n';
  }
  return out;
}

SyntheticDesign DefaultSyntheticDesign() {
  SyntheticDesign design;
  design.attributes = {
      {"overview",
       {{"plain_none", 0.0},
        {"polsides_polsides", 7.8},
        {"mfap_none", 6.1},
        {"mfap_random", 5.8}}},
      {"topic", {{"gun_control", 0.0}, {"debt_ceiling", -1.5}}},
  };
  return design;
}

ConjointData GenerateResponses(const SyntheticDesign &design, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, design.noise_sd);
  ConjointData data;
  for (const auto &a : design.attributes) data.attributes.push_back(a.name);
  for (int r = 0; r < design.respondents; ++r) {
    for (int t = 0; t < design.tasks_per_respondent; ++t) {
      ConjointResponse response;
      response.respondent_id = "r" + std::to_string(r + 1);
      response.task_index = t + 1;
      double y = design.intercept;
      for (const auto &a : design.attributes) {
        std::uniform_int_distribution<size_t> pick(0, a.levels.size() - 1);
        const auto &[level, effect] = a.levels[pick(rng)];
        response.attributes[a.name] = level;
        y += effect;
      }
      response.outcome = y + noise(rng);
      data.responses.push_back(std::move(response));
    }
  }
  return data;
}

}  // namespace newslens
