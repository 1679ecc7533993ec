#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace denseval {

// Minimal RFC 4180 reader: quoted fields, escaped quotes, embedded commas
// and newlines. Throws ParseError with the line number on malformed input.
std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path);

std::string csv_escape(const std::string& field);
void write_csv(const std::filesystem::path& path,
               const std::vector<std::vector<std::string>>& rows);

}  // namespace denseval
