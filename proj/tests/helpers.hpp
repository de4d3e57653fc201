#pragma once

#include <sstream>
#include <string>

#include "cubeproto/data.hpp"

namespace testing {

inline cubeproto::Dataset from_text(const std::string& text, const std::string& label = "") {
    std::istringstream in(text);
    auto records = cubeproto::csv::read_all(in);
    auto header = records.front();
    records.erase(records.begin());
    auto schema = cubeproto::infer_schema(header, records);
    std::istringstream again(text);
    if (label.empty()) return cubeproto::load_csv(again, schema);
    return cubeproto::load_csv(again, schema, label);
}

inline std::string data_path(const std::string& name) { return std::string(CUBEPROTO_DATA_DIR) + "/" + name + ".csv"; }

}  // namespace testing
