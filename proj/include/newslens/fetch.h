#ifndef NEWSLENS_FETCH_H_
#define NEWSLENS_FETCH_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace newslens {

struct FetchOptions {
  bool allow_network = true;
  // Shortest acceptable main text block, in characters.
  size_t min_block_length = 300;
  int timeout_seconds = 10;
};

// Title and body recovered from a page. The caller supplies topic_id and
// orientation before the draft becomes an Article.
struct ArticleDraft {
  std::string url;
  std::string title;
  std::string body;
};

struct ExtractedText {
  std::string title;
  std::string body;
};

struct ParsedUrl {
  std::string scheme;  // "http" or "https"
  std::string host;
  int port = 0;
  std::string path;  // includes query, never empty
};

std::optional<ParsedUrl> ParseUrl(std::string_view url);

// Visible text of the longest text block. Blocks are delimited by
// structural tags (div, article, section, li, td, headings, ...); <p> and
// <br> only break paragraphs inside a block. Throws Error(kExtractionEmpty)
// when no block reaches `min_block_length` characters.
ExtractedText ExtractMainText(std::string_view html, size_t min_block_length);

// Throws Error(kFetchFailed) on transport failure or non-200 status,
// kExtractionEmpty from extraction, kInvalidConfig for a bad URL or when the
// network is disabled.
ArticleDraft FetchArticle(const std::string &url,
                          const FetchOptions &options = {});

}  // namespace newslens

#endif  // NEWSLENS_FETCH_H_
