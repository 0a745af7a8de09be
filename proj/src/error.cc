#include "newslens/error.h"

namespace newslens {
namespace {

std::string Format(ErrorCode code, int line, const std::string &detail) {
  std::string out = ErrorCodeName(code);
  if (line > 0) out += " (line " + std::to_string(line) + ")";
  if (!detail.empty()) out += ": " + detail;
  return out;
}

}  // namespace

const char *ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kIo: return "Io";
    case ErrorCode::kInvalidInput: return "InvalidInput";
    case ErrorCode::kEmptyCorpus: return "EmptyCorpus";
    case ErrorCode::kMalformedRecord: return "MalformedRecord";
    case ErrorCode::kDuplicateId: return "DuplicateId";
    case ErrorCode::kFetchFailed: return "FetchFailed";
    case ErrorCode::kExtractionEmpty: return "ExtractionEmpty";
    case ErrorCode::kNoPersons: return "NoPersons";
    case ErrorCode::kSidecarUnavailable: return "SidecarUnavailable";
    case ErrorCode::kUnknownLayout: return "UnknownLayout";
    case ErrorCode::kArticleNotInTopic: return "ArticleNotInTopic";
    case ErrorCode::kRankDeficient: return "RankDeficient";
    case ErrorCode::kMissingBaseline: return "MissingBaseline";
    case ErrorCode::kBindFailed: return "BindFailed";
    case ErrorCode::kSnapshotCorrupt: return "SnapshotCorrupt";
  }
  return "Unknown";
}

int ExitStatus(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidConfig:
    case ErrorCode::kUnknownLayout:
      return 2;
    case ErrorCode::kIo:
    case ErrorCode::kInvalidInput:
    case ErrorCode::kEmptyCorpus:
    case ErrorCode::kMalformedRecord:
    case ErrorCode::kDuplicateId:
      return 3;
    case ErrorCode::kNoPersons:
    case ErrorCode::kArticleNotInTopic:
      return 4;
    case ErrorCode::kSidecarUnavailable:
      return 5;
    case ErrorCode::kRankDeficient:
    case ErrorCode::kMissingBaseline:
      return 6;
    case ErrorCode::kFetchFailed:
    case ErrorCode::kExtractionEmpty:
      return 7;
    case ErrorCode::kBindFailed:
    case ErrorCode::kSnapshotCorrupt:
      return 8;
  }
  return 1;
}

Error::Error(ErrorCode code, const std::string &detail)
    : Error(code, 0, detail) {}

Error::Error(ErrorCode code, int line, const std::string &detail)
    : std::runtime_error(Format(code, line, detail)),
      code_(code),
      line_(line),
      detail_(detail) {}

}  // namespace newslens
