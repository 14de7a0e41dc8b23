#pragma once

#include <string>
#include <vector>

namespace profilecast::csv {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

// RFC-4180 reader: quoted fields, embedded commas/newlines, doubled quotes,
// CRLF line endings. The first record is taken as the header.
Table read_file(const std::string& path);
Table parse(const std::string& text);

// Quotes a field only when it needs it (comma, quote, newline).
std::string escape_field(const std::string& field);
std::string write(const Table& table);
void write_file(const std::string& path, const Table& table);

} // namespace profilecast::csv
