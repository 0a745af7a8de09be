#include "newslens/textproc.h"

#include <algorithm>
#include <unordered_set>

#include "newslens/error.h"
#include "newslens/utf8.h"
#include "newslens/util.h"

namespace newslens {
namespace {

const std::unordered_set<std::string_view> &Abbreviations() {
  static const std::unordered_set<std::string_view> kSet = {
      "Mr.",  "Mrs.", "Ms.",  "Dr.",  "Sen.", "Rep.",  "Gov.", "U.S.",
      "D.C.", "Jan.", "Feb.", "Mar.", "Apr.", "Jun.",  "Jul.", "Aug.",
      "Sep.", "Sept.", "Oct.", "Nov.", "Dec.",
  };
  return kSet;
}

// Capitalized words that never start or end a person name.
const std::unordered_set<std::string_view> &StopWords() {
  static const std::unordered_set<std::string_view> kSet = {
      // Function words.
      "The", "A", "An", "And", "But", "Or", "Nor", "So", "Yet", "If", "In",
      "On", "At", "By", "For", "From", "To", "Of", "With", "As", "After",
      "Before", "While", "When", "Where", "What", "Who", "Whom", "Why", "How",
      "This", "That", "These", "Those", "It", "Its", "He", "She", "They",
      "We", "You", "I", "His", "Her", "Their", "Our", "My", "Your", "There",
      "Here", "Some", "Many", "Most", "All", "Both", "Each", "Every", "No",
      "Not", "Yes", "Even", "Still", "Also", "Then", "Now", "Last", "Next",
      "Since", "Despite", "Although", "Though", "Because", "Under", "Over",
      "Among", "During", "Without", "Within", "About", "Against", "Just",
      "Only", "More", "Less", "One", "Two", "Three", "Several", "According",
      // Calendar.
      "Monday", "Tuesday", "Wednesday", "Thursday", "Friday", "Saturday",
      "Sunday", "January", "February", "March", "April", "May", "June",
      "July", "August", "September", "October", "November", "December",
      "Jan", "Feb", "Mar", "Apr", "Jun", "Jul", "Aug", "Sep", "Sept", "Oct",
      "Nov", "Dec",
      // Titles and honorifics.
      "Mr", "Mrs", "Ms", "Dr", "Sen", "Rep", "Gov", "President", "Senator",
      "Speaker", "Leader", "Secretary", "Minister", "Prime", "Deputy",
      "Representative", "Governor", "Chief", "Commissioner", "Premier",
      "Chair", "Chairman", "Vice", "Majority", "Minority", "Treasurer",
      "Former", "Acting", "Opposition", "Sheriff", "Mayor", "Judge",
      "Justice", "Captain", "Inspector", "Superintendent", "Councillor",
      // Institutions and groups that are frequently capitalized.
      "Congress", "Senate", "House", "White", "Capitol", "Treasury",
      "Democrats", "Democrat", "Democratic", "Republicans", "Republican",
      "GOP", "Administration", "Government", "Federal", "National",
      "American", "Americans", "Australian", "Australians", "Labor",
      "Liberal", "Greens", "Party", "Committee", "Office", "Department",
      "Budget", "State", "States", "United", "US", "U", "S", "News",
  };
  return kSet;
}

bool IsOpeningQuote(char32_t cp) {
  return cp == '"' || cp == '\'' || cp == 0x201C || cp == 0x2018 ||
         cp == '(' || cp == '[';
}

bool IsClosingPunct(char32_t cp) {
  return cp == '"' || cp == '\'' || cp == 0x201D || cp == 0x2019 ||
         cp == ')' || cp == ']';
}

bool IsTerminal(char c) { return c == '.' || c == '!' || c == '?'; }

bool IsUpper(char32_t cp) {
  return (cp >= 'A' && cp <= 'Z') ||
         (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7);
}

bool IsAlnum(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z') ||
           (cp >= '0' && cp <= '9');
  }
  if (cp <= 0xBF) return false;                   // Latin-1 punctuation
  if (cp == 0xD7 || cp == 0xF7) return false;     // x and division signs
  if (cp >= 0x2000 && cp <= 0x2BFF) return false;  // punctuation, symbols
  if (cp >= 0x3000 && cp <= 0x303F) return false;  // CJK punctuation
  if (cp == 0xFEFF || cp == 0xFFFD) return false;
  return true;
}

bool IsTokenJoiner(char32_t cp) { return cp == '\'' || cp == '-' || cp == 0x2019; }

// The whitespace-delimited word ending at `end` (exclusive), with leading
// opening quotes and brackets removed.
std::string_view WordBefore(std::string_view text, size_t end) {
  size_t start = end;
  while (start > 0 && !IsAsciiSpace(text[start - 1])) --start;
  std::string_view word = text.substr(start, end - start);
  while (!word.empty()) {
    size_t pos = 0;
    char32_t cp = utf8::Next(word, pos);
    if (!IsOpeningQuote(cp)) break;
    word.remove_prefix(pos);
  }
  return word;
}

bool IsInitial(std::string_view word) {
  return word.size() == 2 && word[0] >= 'A' && word[0] <= 'Z' && word[1] == '.';
}

bool IsCapitalized(std::string_view token) {
  size_t pos = 0;
  return IsUpper(utf8::Next(token, pos));
}

// Length of a trailing possessive ('s or ’s), 0 if none.
size_t PossessiveSuffix(std::string_view token) {
  if (token.size() > 2 && token.substr(token.size() - 2) == "'s") return 2;
  if (token.size() > 4 && token.substr(token.size() - 4) == "\xE2\x80\x99s") {
    return 4;
  }
  return 0;
}

// Trims trailing apostrophes and hyphens.
size_t TrimJoinersRight(std::string_view text, size_t begin, size_t end) {
  while (end > begin) {
    if (text[end - 1] == '\'' || text[end - 1] == '-') {
      --end;
    } else if (end - begin >= 3 && text.substr(end - 3, 3) == "\xE2\x80\x99") {
      end -= 3;
    } else {
      break;
    }
  }
  return end;
}

struct Candidate {
  Span span;
  std::optional<std::string> canonical;
  bool from_gazetteer = false;
};

void AddGazetteerCandidates(std::string_view text,
                            const std::vector<Token> &tokens,
                            const Gazetteer &gazetteer,
                            std::vector<Candidate> &out) {
  if (gazetteer.empty()) return;
  std::unordered_set<size_t> token_ends;
  for (const Token &t : tokens) {
    token_ends.insert(t.span.end);
    if (size_t p = PossessiveSuffix(t.text)) token_ends.insert(t.span.end - p);
  }
  for (const Token &t : tokens) {
    const std::string *best_surface = nullptr;
    const std::string *best_canonical = nullptr;
    for (const auto &[surface, canonical] : gazetteer.entries()) {
      if (best_surface != nullptr && surface.size() <= best_surface->size()) {
        continue;
      }
      if (text.compare(t.span.begin, surface.size(), surface) != 0) continue;
      if (token_ends.count(t.span.begin + surface.size()) == 0) continue;
      best_surface = &surface;
      best_canonical = &canonical;
    }
    if (best_surface != nullptr) {
      out.push_back(Candidate{
          Span{t.span.begin, t.span.begin + best_surface->size()},
          *best_canonical, true});
    }
  }
}

// Whether `sep` (text between two tokens) keeps a capitalized sequence
// together. Plain whitespace does; ". " does after a one-letter initial.
bool ContinuesName(std::string_view sep, const Token &previous) {
  if (sep.empty()) return false;
  bool initial = previous.text.size() == 1 && IsUpper(
      static_cast<unsigned char>(previous.text[0]));
  if (initial && sep[0] == '.') sep.remove_prefix(1);
  if (sep.empty()) return false;
  for (char c : sep) {
    if (c != ' ' && c != '\t') return false;
  }
  return true;
}

void AddCapitalizedCandidates(std::string_view text,
                              const std::vector<Token> &tokens,
                              const Gazetteer &gazetteer,
                              std::vector<Candidate> &out) {
  const auto &stop = StopWords();
  size_t i = 0;
  while (i < tokens.size()) {
    if (!IsCapitalized(tokens[i].text)) {
      ++i;
      continue;
    }
    size_t j = i + 1;
    while (j < tokens.size() && IsCapitalized(tokens[j].text)) {
      std::string_view sep = text.substr(
          tokens[j - 1].span.end, tokens[j].span.begin - tokens[j - 1].span.end);
      if (!ContinuesName(sep, tokens[j - 1])) break;
      // A possessive ends the name.
      if (PossessiveSuffix(tokens[j - 1].text) != 0) break;
      ++j;
    }
    size_t first = i;
    size_t last = j;  // exclusive
    i = j;

    auto is_stop = [&](size_t k) {
      std::string_view t = tokens[k].text;
      t = t.substr(0, t.size() - PossessiveSuffix(t));
      return stop.count(t) != 0;
    };
    while (first < last && is_stop(first)) ++first;
    while (last > first && is_stop(last - 1)) --last;
    if (first == last) continue;
    // A lone sentence-initial word is too ambiguous without the gazetteer.
    if (last - first == 1 && first == 0) continue;
    // Lone single letters are initials or list markers.
    if (last - first == 1 && tokens[first].text.size() == 1) continue;

    size_t begin = tokens[first].span.begin;
    size_t end = tokens[last - 1].span.end -
                 PossessiveSuffix(tokens[last - 1].text);
    end = TrimJoinersRight(text, begin, end);
    if (end <= begin) continue;
    Candidate c{Span{begin, end}, std::nullopt, false};
    if (auto canonical = gazetteer.Find(text.substr(begin, end - begin))) {
      c.canonical = std::string(*canonical);
    }
    out.push_back(std::move(c));
  }
}

}  // namespace

void Gazetteer::Add(std::string surface, std::string canonical) {
  if (surface.empty() || canonical.empty()) {
    throw Error(ErrorCode::kInvalidInput, "gazetteer entry has an empty field");
  }
  auto [it, inserted] = entries_.emplace(std::move(surface), std::move(canonical));
  if (!inserted) {
    throw Error(ErrorCode::kInvalidInput,
                "duplicate gazetteer surface '" + it->first + "'");
  }
}

std::optional<std::string_view> Gazetteer::Find(std::string_view surface) const {
  auto it = entries_.find(surface);
  if (it == entries_.end()) return std::nullopt;
  return std::string_view(it->second);
}

Gazetteer Gazetteer::Parse(std::string_view content) {
  Gazetteer g;
  int line_no = 0;
  for (std::string_view line : SplitLines(content)) {
    ++line_no;
    if (TrimWhitespace(line).empty() || line.front() == '#') continue;
    size_t tab = line.find('\t');
    if (tab == std::string_view::npos || line.find('\t', tab + 1) != std::string_view::npos) {
      throw Error(ErrorCode::kInvalidInput, line_no,
                  "gazetteer line must have exactly two tab-separated columns");
    }
    std::string_view surface = TrimWhitespace(line.substr(0, tab));
    std::string_view canonical = TrimWhitespace(line.substr(tab + 1));
    try {
      g.Add(std::string(surface), std::string(canonical));
    } catch (const Error &e) {
      throw Error(e.code(), line_no, e.detail());
    }
  }
  return g;
}

Gazetteer Gazetteer::Load(const std::filesystem::path &path) {
  return Parse(ReadFile(path));
}

std::vector<Sentence> SegmentSentences(std::string_view body,
                                       std::string_view article_id) {
  std::vector<Sentence> sentences;
  const size_t n = body.size();
  size_t start = 0;
  while (start < n && IsAsciiSpace(body[start])) ++start;

  auto emit = [&](size_t begin, size_t end) {
    while (end > begin && IsAsciiSpace(body[end - 1])) --end;
    if (end <= begin) return;
    Sentence s;
    s.article_id = std::string(article_id);
    s.index = static_cast<int>(sentences.size());
    s.span = Span{begin, end};
    s.text = std::string(body.substr(begin, end - begin));
    sentences.push_back(std::move(s));
  };

  size_t i = start;
  while (i < n) {
    if (!IsTerminal(body[i])) {
      ++i;
      continue;
    }
    size_t punct = i;
    size_t j = i + 1;
    while (j < n && IsTerminal(body[j])) ++j;
    while (j < n) {
      size_t pos = j;
      char32_t cp = utf8::Next(body, pos);
      if (!IsClosingPunct(cp)) break;
      j = pos;
    }
    if (j >= n || !IsAsciiSpace(body[j])) {
      i = j;
      continue;
    }
    size_t k = j;
    while (k < n && IsAsciiSpace(body[k])) ++k;
    if (k >= n) break;
    size_t pos = k;
    char32_t next = utf8::Next(body, pos);
    if (!IsUpper(next) && !IsOpeningQuote(next)) {
      i = k;
      continue;
    }
    if (body[punct] == '.' && j == punct + 1) {
      std::string_view word = WordBefore(body, punct + 1);
      if (Abbreviations().count(word) != 0 || IsInitial(word)) {
        i = k;
        continue;
      }
    }
    emit(start, j);
    start = k;
    i = k;
  }
  emit(start, n);
  return sentences;
}

std::vector<Token> Tokenize(std::string_view text) {
  std::vector<Token> tokens;
  size_t pos = 0;
  size_t begin = 0;
  bool in_token = false;
  bool has_alnum = false;
  auto close = [&](size_t end) {
    if (in_token && has_alnum) {
      tokens.push_back(Token{Span{begin, end}, text.substr(begin, end - begin)});
    }
    in_token = false;
    has_alnum = false;
  };
  while (pos < text.size()) {
    size_t at = pos;
    char32_t cp = utf8::Next(text, pos);
    bool alnum = IsAlnum(cp);
    if (alnum || IsTokenJoiner(cp)) {
      if (!in_token) {
        in_token = true;
        begin = at;
      }
      has_alnum = has_alnum || alnum;
    } else {
      close(at);
    }
  }
  close(text.size());
  return tokens;
}

std::vector<PersonMention> DetectMentions(const Sentence &sentence,
                                          const Gazetteer &gazetteer) {
  const std::string_view text = sentence.text;
  std::vector<Token> tokens = Tokenize(text);
  std::vector<Candidate> candidates;
  AddGazetteerCandidates(text, tokens, gazetteer, candidates);
  AddCapitalizedCandidates(text, tokens, gazetteer, candidates);

  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate &a, const Candidate &b) {
                     if (a.span.size() != b.span.size()) {
                       return a.span.size() > b.span.size();
                     }
                     if (a.from_gazetteer != b.from_gazetteer) {
                       return a.from_gazetteer;
                     }
                     return a.span.begin < b.span.begin;
                   });
  std::vector<Candidate> accepted;
  for (Candidate &c : candidates) {
    bool overlaps = std::any_of(
        accepted.begin(), accepted.end(),
        [&](const Candidate &a) { return a.span.Overlaps(c.span); });
    if (!overlaps) accepted.push_back(std::move(c));
  }
  std::sort(accepted.begin(), accepted.end(),
            [](const Candidate &a, const Candidate &b) {
              return a.span.begin < b.span.begin;
            });

  std::vector<PersonMention> mentions;
  mentions.reserve(accepted.size());
  for (Candidate &c : accepted) {
    PersonMention m;
    m.article_id = sentence.article_id;
    m.sentence_index = sentence.index;
    m.span = c.span;
    m.surface = std::string(text.substr(c.span.begin, c.span.size()));
    m.canonical = std::move(c.canonical);
    mentions.push_back(std::move(m));
  }
  return mentions;
}

}  // namespace newslens
