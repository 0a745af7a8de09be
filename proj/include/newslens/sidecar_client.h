#ifndef NEWSLENS_SIDECAR_CLIENT_H_
#define NEWSLENS_SIDECAR_CLIENT_H_

#include <memory>
#include <semaphore>
#include <string>

#include "newslens/fetch.h"
#include "newslens/polarity.h"

namespace newslens {

// Wire protocol of the external TSC model server:
//   POST /classify  {"sentence": str, "target_begin": int, "target_end": int}
//                -> {"positive": num, "neutral": num, "negative": num}
//   GET  /health -> {"name": str, "kind": str, "reported_f1": num?}
// Target offsets on the wire count Unicode code points.
std::string EncodeClassifyRequest(std::string_view sentence, Span target);

// Throws Error(kSidecarUnavailable) unless the body is an object with three
// non-negative probabilities summing to 1 +- 1e-6.
PolarityLabel DecodeClassifyResponse(std::string_view body);

struct SidecarOptions {
  std::string url;  // e.g. http://127.0.0.1:8081
  int timeout_seconds = 5;
  int max_in_flight = 4;
};

class SidecarClassifier : public TargetClassifier {
 public:
  // Throws Error(kInvalidConfig) for an unusable URL.
  explicit SidecarClassifier(SidecarOptions options);

  ClassifierInfo Info() const override { return info_; }
  PolarityLabel Classify(std::string_view sentence, Span target) const override;

  // Reads /health and caches the model name. Throws kSidecarUnavailable.
  ClassifierInfo Probe();

 private:
  SidecarOptions options_;
  ParsedUrl endpoint_;
  ClassifierInfo info_;
  mutable std::counting_semaphore<1024> in_flight_;
};

// Uses `fallback` whenever `primary` reports kSidecarUnavailable.
class FallbackClassifier : public TargetClassifier {
 public:
  FallbackClassifier(std::shared_ptr<const TargetClassifier> primary,
                     std::shared_ptr<const TargetClassifier> fallback)
      : primary_(std::move(primary)), fallback_(std::move(fallback)) {}

  ClassifierInfo Info() const override { return primary_->Info(); }
  PolarityLabel Classify(std::string_view sentence, Span target) const override;

 private:
  std::shared_ptr<const TargetClassifier> primary_;
  std::shared_ptr<const TargetClassifier> fallback_;
};

}  // namespace newslens

#endif  // NEWSLENS_SIDECAR_CLIENT_H_
