#ifndef NEWSLENS_UTF8_H_
#define NEWSLENS_UTF8_H_

#include <cstddef>
#include <string>
#include <string_view>

namespace newslens::utf8 {

// Decodes the code point starting at `pos` and advances `pos` past it.
// Malformed bytes decode as U+FFFD and advance by one.
char32_t Next(std::string_view s, size_t &pos);

void Append(std::string &out, char32_t cp);

size_t CodepointCount(std::string_view s);

// Number of code points in s[0, byte_offset).
size_t CodepointOffset(std::string_view s, size_t byte_offset);

// Largest byte offset <= limit that does not split a code point.
size_t FloorBoundary(std::string_view s, size_t limit);

}  // namespace newslens::utf8

#endif  // NEWSLENS_UTF8_H_
