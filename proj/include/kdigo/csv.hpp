#pragma once

// Minimal streaming reader for delimited text with a header row. Quoted
// fields follow RFC 4180 (doubled quotes inside quotes); embedded newlines
// are not supported.

#include <cstddef>
#include <fstream>
#include <istream>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "kdigo/errors.hpp"

namespace kdigo::csv {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline void split(std::string_view line, char delim, std::vector<std::string>& out) {
    out.clear();
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
        } else if (c == '"' && trim(field).empty()) {
            field.clear();
            quoted = true;
        } else if (c == delim) {
            out.emplace_back(trim(field));
            field.clear();
        } else {
            field.push_back(c);
        }
    }
    out.emplace_back(trim(field));
}

class Reader {
public:
    Reader(std::istream& in, std::string name, char delim = ',')
        : in_(&in), name_(std::move(name)), delim_(delim) {
        read_header();
    }

    Reader(const std::string& path, char delim = ',')
        : owned_(std::make_unique<std::ifstream>(path)), in_(owned_.get()), name_(path), delim_(delim) {
        if (!*owned_) throw IoError("cannot open " + path);
        read_header();
    }

    const std::vector<std::string>& header() const { return header_; }
    const std::string& name() const { return name_; }

    /// 1-based line number of the last row returned by next().
    std::size_t line() const { return line_; }

    /// Reads the next non-blank row; false at end of input.
    bool next(std::vector<std::string>& row) {
        std::string buf;
        while (std::getline(*in_, buf)) {
            ++line_;
            if (trim(buf).empty()) continue;
            split(buf, delim_, row);
            return true;
        }
        if (in_->bad()) throw IoError("read failure in " + name_);
        return false;
    }

private:
    void read_header() {
        std::string buf;
        while (std::getline(*in_, buf)) {
            ++line_;
            if (trim(buf).empty()) continue;
            if (buf.size() >= 3 && buf.compare(0, 3, "\xEF\xBB\xBF") == 0) buf.erase(0, 3);
            split(buf, delim_, header_);
            return;
        }
        throw SchemaError(name_ + ": missing header row");
    }

    std::unique_ptr<std::ifstream> owned_;
    std::istream* in_;
    std::string name_;
    char delim_;
    std::size_t line_ = 0;
    std::vector<std::string> header_;
};

/// Maps each expected column to its index; throws SchemaError on missing or
/// unexpected columns.
inline std::vector<std::size_t> bind_columns(const std::vector<std::string>& header,
                                             const std::vector<std::string_view>& expected,
                                             const std::string& source,
                                             const std::vector<std::string_view>& ignorable = {}) {
    std::vector<std::size_t> index(expected.size(), header.size());
    for (std::size_t h = 0; h < header.size(); ++h) {
        bool matched = false;
        for (std::size_t e = 0; e < expected.size(); ++e) {
            if (header[h] == expected[e]) {
                if (index[e] != header.size())
                    throw SchemaError(source + ": duplicate column '" + header[h] + "'");
                index[e] = h;
                matched = true;
            }
        }
        if (!matched) {
            bool skip = false;
            for (auto ign : ignorable) skip = skip || header[h] == ign;
            if (!skip) throw SchemaError(source + ": unexpected column '" + header[h] + "'");
        }
    }
    for (std::size_t e = 0; e < expected.size(); ++e)
        if (index[e] == header.size())
            throw SchemaError(source + ": missing column '" + std::string(expected[e]) + "'");
    return index;
}

} // namespace kdigo::csv
