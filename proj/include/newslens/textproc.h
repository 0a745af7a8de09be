#ifndef NEWSLENS_TEXTPROC_H_
#define NEWSLENS_TEXTPROC_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace newslens {

// Half-open byte range [begin, end) into UTF-8 text.
struct Span {
  size_t begin = 0;
  size_t end = 0;

  size_t size() const { return end - begin; }
  bool Overlaps(const Span &o) const { return begin < o.end && o.begin < end; }
  bool operator==(const Span &) const = default;
  auto operator<=>(const Span &) const = default;
};

struct Sentence {
  std::string article_id;
  int index = 0;
  Span span;  // into the article body
  std::string text;

  bool operator==(const Sentence &) const = default;
};

struct Token {
  Span span;  // into the tokenized text
  std::string_view text;
};

struct PersonMention {
  std::string article_id;
  int sentence_index = 0;
  Span span;  // into the sentence text
  std::string surface;
  // Set when the mention came from (or exactly matches) a gazetteer entry.
  std::optional<std::string> canonical;
  // Filled by ResolvePersons.
  std::optional<std::string> person_id;

  bool operator==(const PersonMention &) const = default;
};

// Surface form -> canonical name alias table.
class Gazetteer {
 public:
  Gazetteer() = default;

  // Throws Error(kInvalidInput) on a duplicate surface or empty field.
  void Add(std::string surface, std::string canonical);

  std::optional<std::string_view> Find(std::string_view surface) const;
  bool empty() const { return entries_.empty(); }
  size_t size() const { return entries_.size(); }
  const std::map<std::string, std::string, std::less<>> &entries() const {
    return entries_;
  }

  // TSV: surface<TAB>canonical_name per line. Blank lines and lines
  // starting with '#' are skipped.
  static Gazetteer Parse(std::string_view content);
  static Gazetteer Load(const std::filesystem::path &path);

 private:
  std::map<std::string, std::string, std::less<>> entries_;
};

// Rule-based splitting after . ! ? (plus closing quotes) when followed by
// whitespace and an uppercase letter or opening quote. Abbreviations and
// single-letter initials never end a sentence. Sentence spans exclude
// surrounding whitespace.
std::vector<Sentence> SegmentSentences(std::string_view body,
                                       std::string_view article_id = {});

// Maximal runs of letters, digits, apostrophes and hyphens that contain at
// least one letter or digit.
std::vector<Token> Tokenize(std::string_view text);

// Gazetteer hits (longest match, case-sensitive) plus capitalized name
// sequences. Overlaps are resolved longest-first; the result is ordered by
// span begin.
std::vector<PersonMention> DetectMentions(const Sentence &sentence,
                                          const Gazetteer &gazetteer);

}  // namespace newslens

#endif  // NEWSLENS_TEXTPROC_H_
