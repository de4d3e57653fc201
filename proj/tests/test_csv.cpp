#include <sstream>

#include "cubeproto/csv.hpp"
#include "doctest.h"

using cubeproto::csv::Record;

namespace {

std::vector<Record> parse(const std::string& text) {
    std::istringstream in(text);
    return cubeproto::csv::read_all(in);
}

}  // namespace

TEST_CASE("plain fields are split and trimmed") {
    auto r = parse("a, b ,c\n1,2,3\n");
    REQUIRE(r.size() == 2);
    CHECK(r[0] == Record{"a", "b", "c"});
    CHECK(r[1] == Record{"1", "2", "3"});
}

TEST_CASE("quoted fields keep commas, quotes, newlines and spaces") {
    auto r = parse("\"x, y\",\"he said \"\"hi\"\"\",\" pad \"\r\n\"two\nlines\",b,c\r\n");
    REQUIRE(r.size() == 2);
    CHECK(r[0] == Record{"x, y", "he said \"hi\"", " pad "});
    CHECK(r[1][0] == "two\nlines");
}

TEST_CASE("empty fields and blank lines") {
    auto r = parse("a,,c\n\n,\n");
    REQUIRE(r.size() == 2);
    CHECK(r[0] == Record{"a", "", "c"});
    CHECK(r[1] == Record{"", ""});
}

TEST_CASE("missing final newline") {
    auto r = parse("1,2");
    REQUIRE(r.size() == 1);
    CHECK(r[0] == Record{"1", "2"});
}

TEST_CASE("escape quotes only when needed") {
    CHECK(cubeproto::csv::escape("plain") == "plain");
    CHECK(cubeproto::csv::escape("a,b") == "\"a,b\"");
    CHECK(cubeproto::csv::escape("say \"x\"") == "\"say \"\"x\"\"\"");
    for (std::string s : {"a,b", "q\"q", "line\nbreak", "plain"}) {
        auto back = parse(cubeproto::csv::escape(s) + "\n");
        REQUIRE(back.size() == 1);
        CHECK(back[0][0] == s);
    }
}
