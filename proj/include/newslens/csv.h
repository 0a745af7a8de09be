#ifndef NEWSLENS_CSV_H_
#define NEWSLENS_CSV_H_

#include <string>
#include <string_view>
#include <vector>

namespace newslens {

// RFC 4180 records: comma separated, double-quoted fields may contain
// commas, doubled quotes and line breaks. Blank lines are skipped. Throws
// Error(kInvalidInput) on an unterminated quote.
std::vector<std::vector<std::string>> ParseCsv(std::string_view content);

// Quotes the field when it contains a comma, quote or line break.
std::string CsvField(std::string_view field);

}  // namespace newslens

#endif  // NEWSLENS_CSV_H_
