#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "kz/errors.hpp"

namespace kz::detail {

// One RFC-4180 record; `line` is the 1-based line the record starts on.
struct CsvRecord {
    std::vector<std::string> fields;
    std::size_t line = 0;
};

// Splits text into records, handling quoted fields (embedded commas, doubled
// quotes, newlines) and LF/CRLF endings. Blank lines are skipped.
inline std::vector<CsvRecord> scan_csv(std::string_view text) {
    std::vector<CsvRecord> records;
    std::size_t line = 1;
    std::size_t i = 0;
    const std::size_t n = text.size();

    while (i < n) {
        CsvRecord record;
        record.line = line;
        std::string field;
        bool done = false;
        while (!done) {
            if (i < n && text[i] == '"') {
                ++i; // opening quote
                for (;;) {
                    if (i >= n) {
                        throw ParseError("line " + std::to_string(record.line) +
                                         ": unterminated quoted field");
                    }
                    const char c = text[i++];
                    if (c == '"') {
                        if (i < n && text[i] == '"') {
                            field.push_back('"');
                            ++i;
                        } else {
                            break;
                        }
                    } else {
                        if (c == '\n') ++line;
                        field.push_back(c);
                    }
                }
                if (i < n && text[i] != ',' && text[i] != '\n' && text[i] != '\r') {
                    throw ParseError("line " + std::to_string(line) +
                                     ": unexpected character after closing quote");
                }
            } else {
                while (i < n && text[i] != ',' && text[i] != '\n' && text[i] != '\r') {
                    field.push_back(text[i++]);
                }
            }
            if (i >= n) {
                record.fields.push_back(std::move(field));
                done = true;
            } else if (text[i] == ',') {
                ++i;
                record.fields.push_back(std::move(field));
                field.clear();
            } else { // \n or \r
                if (text[i] == '\r' && i + 1 < n && text[i + 1] == '\n') ++i;
                ++i;
                ++line;
                record.fields.push_back(std::move(field));
                done = true;
            }
        }
        // A lone newline (or trailing newline) yields one empty field; skip it.
        if (record.fields.size() == 1 && record.fields[0].empty()) continue;
        records.push_back(std::move(record));
    }
    return records;
}

inline std::string csv_quote(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string quoted = "\"";
    for (char c : field) {
        if (c == '"') quoted += "\"\"";
        else quoted.push_back(c);
    }
    quoted.push_back('"');
    return quoted;
}

} // namespace kz::detail
