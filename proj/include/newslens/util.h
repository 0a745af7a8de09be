#ifndef NEWSLENS_UTIL_H_
#define NEWSLENS_UTIL_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace newslens {

// Throws Error(kIo) when the file cannot be read.
std::string ReadFile(const std::filesystem::path &path);

// Writes through a temporary sibling and renames into place.
void WriteFile(const std::filesystem::path &path, std::string_view content);

std::string_view TrimWhitespace(std::string_view s);
bool IsAsciiSpace(char c);

std::vector<std::string_view> SplitLines(std::string_view content);

// Lowercase hex SHA-256 of the bytes.
std::string Sha256Hex(std::string_view bytes);

}  // namespace newslens

#endif  // NEWSLENS_UTIL_H_
