#pragma once

#include <string>
#include <vector>

namespace maskpipe {

// Minimal RFC-4180-ish CSV: comma separated, double quotes for fields
// containing commas/quotes/newlines. Rows include the header.
std::vector<std::vector<std::string>> read_csv(const std::string& path);
std::vector<std::vector<std::string>> parse_csv(const std::string& text);

std::string csv_field(const std::string& value);
std::string csv_row(const std::vector<std::string>& fields);
void write_csv(const std::string& path, const std::vector<std::vector<std::string>>& rows);

}  // namespace maskpipe
