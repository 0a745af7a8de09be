#ifndef NEWSLENS_ERROR_H_
#define NEWSLENS_ERROR_H_

#include <stdexcept>
#include <string>

namespace newslens {

enum class ErrorCode {
  kInvalidConfig,
  kIo,
  kInvalidInput,
  kEmptyCorpus,
  kMalformedRecord,
  kDuplicateId,
  kFetchFailed,
  kExtractionEmpty,
  kNoPersons,
  kSidecarUnavailable,
  kUnknownLayout,
  kArticleNotInTopic,
  kRankDeficient,
  kMissingBaseline,
  kBindFailed,
  kSnapshotCorrupt,
};

// Stable name used in error bodies and logs, e.g. "MalformedRecord".
const char *ErrorCodeName(ErrorCode code);

// Process exit status for the family the code belongs to. 0 is never
// returned.
int ExitStatus(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &detail);
  Error(ErrorCode code, int line, const std::string &detail);

  ErrorCode code() const { return code_; }
  // 1-based input line for record-level errors, 0 otherwise.
  int line() const { return line_; }
  const std::string &detail() const { return detail_; }

 private:
  ErrorCode code_;
  int line_ = 0;
  std::string detail_;
};

}  // namespace newslens

#endif  // NEWSLENS_ERROR_H_
