#include "newslens/sidecar_client.h"

#include <algorithm>
#include <cmath>

#include "httplib.h"
#include "json.hpp"
#include "newslens/error.h"
#include "newslens/utf8.h"

namespace newslens {
namespace {

using Json = nlohmann::json;

class InFlightSlot {
 public:
  explicit InFlightSlot(std::counting_semaphore<1024> &s) : s_(s) { s_.acquire(); }
  ~InFlightSlot() { s_.release(); }
  InFlightSlot(const InFlightSlot &) = delete;
  InFlightSlot &operator=(const InFlightSlot &) = delete;

 private:
  std::counting_semaphore<1024> &s_;
};

std::unique_ptr<httplib::Client> MakeClient(const ParsedUrl &url, int timeout) {
  auto client = std::make_unique<httplib::Client>(
      url.scheme + "://" + url.host + ":" + std::to_string(url.port));
  client->set_connection_timeout(timeout, 0);
  client->set_read_timeout(timeout, 0);
  client->set_write_timeout(timeout, 0);
  return client;
}

std::string JoinPath(const std::string &base, const char *suffix) {
  std::string path = base;
  while (!path.empty() && path.back() == '/') path.pop_back();
  return path + suffix;
}

}  // namespace

std::string EncodeClassifyRequest(std::string_view sentence, Span target) {
  Json request;
  request["sentence"] = std::string(sentence);
  request["target_begin"] = utf8::CodepointOffset(sentence, target.begin);
  request["target_end"] = utf8::CodepointOffset(sentence, target.end);
  return request.dump();
}

PolarityLabel DecodeClassifyResponse(std::string_view body) {
  Json response;
  try {
    response = Json::parse(body);
  } catch (const Json::parse_error &e) {
    throw Error(ErrorCode::kSidecarUnavailable,
                std::string("malformed response: ") + e.what());
  }
  double p[3];
  const char *const kFields[3] = {"positive", "neutral", "negative"};
  for (int i = 0; i < 3; ++i) {
    if (!response.is_object() || !response.contains(kFields[i]) ||
        !response[kFields[i]].is_number()) {
      throw Error(ErrorCode::kSidecarUnavailable,
                  std::string("response lacks numeric '") + kFields[i] + "'");
    }
    p[i] = response[kFields[i]].get<double>();
    if (!std::isfinite(p[i]) || p[i] < 0.0) {
      throw Error(ErrorCode::kSidecarUnavailable,
                  std::string("invalid probability for ") + kFields[i]);
    }
  }
  if (std::fabs(p[0] + p[1] + p[2] - 1.0) > 1e-6) {
    throw Error(ErrorCode::kSidecarUnavailable,
                "probabilities do not sum to one");
  }
  return PolarityLabel::FromProbabilities(p[0], p[1], p[2]);
}

SidecarClassifier::SidecarClassifier(SidecarOptions options)
    : options_(std::move(options)),
      in_flight_(std::clamp(options_.max_in_flight, 1, 1024)) {
  auto parsed = ParseUrl(options_.url);
  if (!parsed) {
    throw Error(ErrorCode::kInvalidConfig,
                "invalid sidecar URL '" + options_.url + "'");
  }
  endpoint_ = *parsed;
  info_ = ClassifierInfo{"sidecar", ClassifierKind::kSidecar, std::nullopt};
}

PolarityLabel SidecarClassifier::Classify(std::string_view sentence,
                                          Span target) const {
  if (target.begin >= target.end || target.end > sentence.size()) {
    throw Error(ErrorCode::kInvalidInput, "target span outside sentence");
  }
  InFlightSlot slot(in_flight_);
  auto client = MakeClient(endpoint_, options_.timeout_seconds);
  auto response = client->Post(JoinPath(endpoint_.path, "/classify"),
                               EncodeClassifyRequest(sentence, target),
                               "application/json");
  if (!response) {
    throw Error(ErrorCode::kSidecarUnavailable,
                httplib::to_string(response.error()));
  }
  if (response->status != 200) {
    throw Error(ErrorCode::kSidecarUnavailable,
                "status " + std::to_string(response->status));
  }
  return DecodeClassifyResponse(response->body);
}

ClassifierInfo SidecarClassifier::Probe() {
  auto client = MakeClient(endpoint_, options_.timeout_seconds);
  auto response = client->Get(JoinPath(endpoint_.path, "/health"));
  if (!response || response->status != 200) {
    throw Error(ErrorCode::kSidecarUnavailable, "health check failed");
  }
  try {
    Json health = Json::parse(response->body);
    if (health.contains("name") && health["name"].is_string()) {
      info_.name = health["name"].get<std::string>();
    }
    if (health.contains("reported_f1") && health["reported_f1"].is_number()) {
      double f1 = health["reported_f1"].get<double>();
      if (f1 >= 0.0 && f1 <= 1.0) info_.reported_f1 = f1;
    }
  } catch (const Json::exception &) {
    // A plain-text health body still means the sidecar is up.
  }
  return info_;
}

PolarityLabel FallbackClassifier::Classify(std::string_view sentence,
                                           Span target) const {
  try {
    return primary_->Classify(sentence, target);
  } catch (const Error &e) {
    if (e.code() != ErrorCode::kSidecarUnavailable) throw;
    return fallback_->Classify(sentence, target);
  }
}

}  // namespace newslens
