#include "newslens/fetch.h"

#include <algorithm>
#include <cctype>
#include <regex>
#include <unordered_map>
#include <vector>

#include "httplib.h"
#include "newslens/error.h"
#include "newslens/utf8.h"
#include "newslens/util.h"

namespace newslens {
namespace {

enum class TagRole { kInline, kParagraph, kBlock, kSkip, kTitle };

TagRole RoleOf(const std::string &name) {
  static const std::unordered_map<std::string, TagRole> kRoles = {
      {"p", TagRole::kParagraph},       {"br", TagRole::kParagraph},
      {"blockquote", TagRole::kParagraph}, {"pre", TagRole::kParagraph},
      {"html", TagRole::kBlock},        {"body", TagRole::kBlock},
      {"header", TagRole::kBlock},      {"footer", TagRole::kBlock},
      {"nav", TagRole::kBlock},         {"aside", TagRole::kBlock},
      {"article", TagRole::kBlock},     {"main", TagRole::kBlock},
      {"section", TagRole::kBlock},     {"div", TagRole::kBlock},
      {"table", TagRole::kBlock},       {"thead", TagRole::kBlock},
      {"tbody", TagRole::kBlock},       {"tr", TagRole::kBlock},
      {"td", TagRole::kBlock},          {"th", TagRole::kBlock},
      {"ul", TagRole::kBlock},          {"ol", TagRole::kBlock},
      {"li", TagRole::kBlock},          {"dl", TagRole::kBlock},
      {"dt", TagRole::kBlock},          {"dd", TagRole::kBlock},
      {"form", TagRole::kBlock},        {"figure", TagRole::kBlock},
      {"figcaption", TagRole::kBlock},  {"h1", TagRole::kBlock},
      {"h2", TagRole::kBlock},          {"h3", TagRole::kBlock},
      {"h4", TagRole::kBlock},          {"h5", TagRole::kBlock},
      {"h6", TagRole::kBlock},          {"script", TagRole::kSkip},
      {"style", TagRole::kSkip},        {"noscript", TagRole::kSkip},
      {"template", TagRole::kSkip},     {"svg", TagRole::kSkip},
      {"iframe", TagRole::kSkip},       {"button", TagRole::kSkip},
      {"select", TagRole::kSkip},       {"title", TagRole::kTitle},
  };
  auto it = kRoles.find(name);
  return it == kRoles.end() ? TagRole::kInline : it->second;
}

void AppendEntity(std::string_view entity, std::string &out) {
  static const std::unordered_map<std::string_view, char32_t> kNamed = {
      {"amp", '&'},       {"lt", '<'},        {"gt", '>'},
      {"quot", '"'},      {"apos", '\''},     {"nbsp", ' '},
      {"mdash", 0x2014},  {"ndash", 0x2013},  {"rsquo", 0x2019},
      {"lsquo", 0x2018},  {"ldquo", 0x201C},  {"rdquo", 0x201D},
      {"hellip", 0x2026}, {"copy", 0xA9},
  };
  if (!entity.empty() && entity[0] == '#') {
    char32_t cp = 0;
    try {
      if (entity.size() > 1 && (entity[1] == 'x' || entity[1] == 'X')) {
        cp = static_cast<char32_t>(
            std::stoul(std::string(entity.substr(2)), nullptr, 16));
      } else {
        cp = static_cast<char32_t>(
            std::stoul(std::string(entity.substr(1)), nullptr, 10));
      }
    } catch (const std::exception &) {
      cp = 0;
    }
    if (cp == 0xA0) cp = ' ';
    if (cp > 0 && cp < 0x110000) {
      utf8::Append(out, cp);
      return;
    }
  } else if (auto it = kNamed.find(entity); it != kNamed.end()) {
    utf8::Append(out, it->second);
    return;
  }
  out += '&';
  out += entity;
  out += ';';
}

// Accumulates visible text into blocks of paragraphs with collapsed
// whitespace.
class BlockCollector {
 public:
  void Text(std::string_view raw) {
    for (size_t i = 0; i < raw.size(); ++i) {
      char c = raw[i];
      if (c == '&') {
        size_t semi = raw.find(';', i + 1);
        if (semi != std::string_view::npos && semi - i <= 10) {
          std::string decoded;
          AppendEntity(raw.substr(i + 1, semi - i - 1), decoded);
          for (char d : decoded) Char(d);
          i = semi;
          continue;
        }
      }
      Char(c);
    }
  }

  void Paragraph() {
    FlushParagraph();
  }

  void Block() {
    FlushParagraph();
    if (!paragraphs_.empty()) {
      std::string block;
      for (const std::string &p : paragraphs_) {
        if (!block.empty()) block += "\n\n";
        block += p;
      }
      blocks_.push_back(std::move(block));
      paragraphs_.clear();
    }
  }

  const std::vector<std::string> &blocks() const { return blocks_; }

 private:
  void Char(char c) {
    if (IsAsciiSpace(c)) {
      pending_space_ = !current_.empty();
      return;
    }
    if (pending_space_) current_ += ' ';
    pending_space_ = false;
    current_ += c;
  }

  void FlushParagraph() {
    if (!current_.empty()) paragraphs_.push_back(std::move(current_));
    current_.clear();
    pending_space_ = false;
  }

  std::string current_;
  bool pending_space_ = false;
  std::vector<std::string> paragraphs_;
  std::vector<std::string> blocks_;
};

std::string LowerAscii(std::string_view s) {
  std::string out(s);
  for (char &c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// Parses "<name ...>" or "</name>" at html[pos] (pos at '<'). Returns the
// lowercase name and whether it closes; advances pos past '>'.
bool ReadTag(std::string_view html, size_t &pos, std::string &name,
             bool &closing) {
  size_t i = pos + 1;
  closing = i < html.size() && html[i] == '/';
  if (closing) ++i;
  size_t start = i;
  while (i < html.size() &&
         (std::isalnum(static_cast<unsigned char>(html[i])) != 0)) {
    ++i;
  }
  if (i == start) return false;
  name = LowerAscii(html.substr(start, i - start));
  // Skip attributes, honouring quoted values.
  char quote = 0;
  while (i < html.size()) {
    char c = html[i];
    if (quote != 0) {
      if (c == quote) quote = 0;
    } else if (c == '"' || c == '\'') {
      quote = c;
    } else if (c == '>') {
      break;
    }
    ++i;
  }
  pos = i < html.size() ? i + 1 : html.size();
  return true;
}

std::string CollapseWhitespace(std::string_view raw) {
  BlockCollector c;
  c.Text(raw);
  c.Block();
  return c.blocks().empty() ? std::string() : c.blocks().front();
}

}  // namespace

std::optional<ParsedUrl> ParseUrl(std::string_view url) {
  static const std::regex kPattern(
      R"(^(https?)://([A-Za-z0-9.\-]+|\[[0-9A-Fa-f:.]+\])(:(\d{1,5}))?(/[^\s#]*)?(#\S*)?$)",
      std::regex::icase);
  std::match_results<std::string_view::const_iterator> m;
  if (!std::regex_match(url.begin(), url.end(), m, kPattern)) {
    return std::nullopt;
  }
  ParsedUrl parsed;
  parsed.scheme = LowerAscii(m[1].str());
  parsed.host = m[2].str();
  parsed.port = parsed.scheme == "https" ? 443 : 80;
  if (m[4].matched) {
    int port = std::stoi(m[4].str());
    if (port <= 0 || port > 65535) return std::nullopt;
    parsed.port = port;
  }
  parsed.path = m[5].matched ? m[5].str() : "/";
  return parsed;
}

ExtractedText ExtractMainText(std::string_view html, size_t min_block_length) {
  BlockCollector collector;
  std::string title;
  std::string first_h1;
  size_t pos = 0;
  size_t text_start = 0;
  size_t h1_start = std::string_view::npos;

  auto flush_text = [&](size_t end) {
    if (end > text_start) collector.Text(html.substr(text_start, end - text_start));
  };

  while (pos < html.size()) {
    if (html[pos] != '<') {
      ++pos;
      continue;
    }
    if (html.compare(pos, 4, "<!--") == 0) {
      flush_text(pos);
      size_t end = html.find("-->", pos + 4);
      pos = end == std::string_view::npos ? html.size() : end + 3;
      text_start = pos;
      continue;
    }
    if (pos + 1 < html.size() && (html[pos + 1] == '!' || html[pos + 1] == '?')) {
      flush_text(pos);
      size_t end = html.find('>', pos);
      pos = end == std::string_view::npos ? html.size() : end + 1;
      text_start = pos;
      continue;
    }
    size_t tag_start = pos;
    std::string name;
    bool closing = false;
    if (!ReadTag(html, pos, name, closing)) {
      ++pos;
      continue;
    }
    flush_text(tag_start);
    text_start = pos;
    TagRole role = RoleOf(name);
    if ((role == TagRole::kSkip || role == TagRole::kTitle) && !closing) {
      std::string close = "</" + name;
      size_t end = pos;
      while (true) {
        end = html.find('<', end);
        if (end == std::string_view::npos) break;
        if (LowerAscii(html.substr(end, close.size())) == close) break;
        ++end;
      }
      if (end == std::string_view::npos) end = html.size();
      if (role == TagRole::kTitle && title.empty()) {
        title = CollapseWhitespace(html.substr(pos, end - pos));
      }
      size_t gt = end < html.size() ? html.find('>', end) : end;
      pos = gt == std::string_view::npos ? html.size() : gt + 1;
      text_start = pos;
      continue;
    }
    if (name == "h1") {
      if (!closing) {
        h1_start = pos;
      } else if (h1_start != std::string_view::npos && first_h1.empty()) {
        std::string inner;
        // Strip nested tags from the heading.
        bool in_tag = false;
        for (char c : html.substr(h1_start, tag_start - h1_start)) {
          if (c == '<') in_tag = true;
          else if (c == '>') in_tag = false;
          else if (!in_tag) inner += c;
        }
        first_h1 = CollapseWhitespace(inner);
      }
    }
    if (role == TagRole::kParagraph) collector.Paragraph();
    if (role == TagRole::kBlock) collector.Block();
  }
  flush_text(html.size());
  collector.Block();

  const std::string *best = nullptr;
  size_t best_length = 0;
  for (const std::string &block : collector.blocks()) {
    size_t length = utf8::CodepointCount(block);
    if (length > best_length) {
      best = &block;
      best_length = length;
    }
  }
  if (best == nullptr || best_length < min_block_length) {
    throw Error(ErrorCode::kExtractionEmpty,
                "longest text block has " + std::to_string(best_length) +
                    " characters, need " + std::to_string(min_block_length));
  }
  return ExtractedText{title.empty() ? first_h1 : title, *best};
}

ArticleDraft FetchArticle(const std::string &url, const FetchOptions &options) {
  if (!options.allow_network) {
    throw Error(ErrorCode::kInvalidConfig, "network access is disabled");
  }
  auto parsed = ParseUrl(url);
  if (!parsed) throw Error(ErrorCode::kInvalidConfig, "invalid URL '" + url + "'");

  httplib::Client client(parsed->scheme + "://" + parsed->host + ":" +
                         std::to_string(parsed->port));
  client.set_connection_timeout(options.timeout_seconds, 0);
  client.set_read_timeout(options.timeout_seconds, 0);
  client.set_follow_location(true);
  auto response = client.Get(parsed->path);
  if (!response) {
    throw Error(ErrorCode::kFetchFailed,
                "status 0: " + httplib::to_string(response.error()));
  }
  if (response->status != 200) {
    throw Error(ErrorCode::kFetchFailed,
                "status " + std::to_string(response->status));
  }
  ExtractedText text = ExtractMainText(response->body, options.min_block_length);
  return ArticleDraft{url, std::move(text.title), std::move(text.body)};
}

}  // namespace newslens
