#include "cubeproto/csv.hpp"

namespace cubeproto::csv {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

}  // namespace

bool read_record(std::istream& in, Record& out) {
    out.clear();
    if (in.peek() == std::char_traits<char>::eof()) return false;

    std::string field;
    bool quoted = false;     // inside quotes
    bool was_quoted = false; // current field started with a quote
    for (;;) {
        const int c = in.get();
        if (c == std::char_traits<char>::eof()) {
            out.push_back(was_quoted ? field : trim(field));
            return true;
        }
        const char ch = static_cast<char>(c);
        if (quoted) {
            if (ch == '"') {
                if (in.peek() == '"') {
                    field.push_back('"');
                    in.get();
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(ch);
            }
            continue;
        }
        if (ch == '"' && !was_quoted && trim(field).empty()) {
            field.clear();
            quoted = true;
            was_quoted = true;
        } else if (ch == ',') {
            out.push_back(was_quoted ? field : trim(field));
            field.clear();
            was_quoted = false;
        } else if (ch == '\n' || ch == '\r') {
            if (ch == '\r' && in.peek() == '\n') in.get();
            out.push_back(was_quoted ? field : trim(field));
            return true;
        } else if (!was_quoted) {
            field.push_back(ch);
        }
    }
}

std::vector<Record> read_all(std::istream& in) {
    std::vector<Record> records;
    Record r;
    while (read_record(in, r)) {
        if (r.size() == 1 && r.front().empty()) continue;  // blank line
        records.push_back(r);
    }
    return records;
}

std::string escape(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

}  // namespace cubeproto::csv
