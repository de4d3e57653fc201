#pragma once

#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace cubeproto::csv {

using Record = std::vector<std::string>;

// RFC 4180 reader: quoted fields, doubled quotes, CRLF or LF line endings.
// Unquoted fields are trimmed of surrounding spaces and tabs.
// Returns false at end of input.
bool read_record(std::istream& in, Record& out);

std::vector<Record> read_all(std::istream& in);

// Quotes the field only when needed.
std::string escape(std::string_view field);

}  // namespace cubeproto::csv
