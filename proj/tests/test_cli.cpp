#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
    const std::string cmd = std::string(CUBEPROTO_CLI) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path = fs::temp_directory_path() / ("cubeproto_cli_" + std::to_string(::getpid()));
    TempDir() { fs::create_directories(path); }
    ~TempDir() { fs::remove_all(path); }
};

const std::string heart = testing::data_path("heart");

}  // namespace

TEST_CASE("subcommands chain through files") {
    TempDir tmp;
    const auto p = tmp.path;
    CHECK(run("probabilities -i " + heart + " --label class -N 50 -o " + (p / "pi.csv").string()) == 0);
    CHECK(slurp(p / "pi.csv").rfind("row_index,size,pi\n", 0) == 0);
    CHECK(run("sample -i " + heart + " --label class -N 50 --seed 3 -o " + (p / "s.csv").string()) == 0);
    CHECK(run("cluster -i " + heart + " --label class --k 2 --seed 3 --sample " + (p / "s.csv").string() + " -o " +
              (p / "a.csv").string()) == 0);
    CHECK(run("evaluate -i " + heart + " --label class --assignments " + (p / "a.csv").string() + " -o " +
              (p / "e.csv").string()) == 0);
    CHECK(slurp(p / "e.csv").rfind("cluster,size,majority_label,majority_count\n", 0) == 0);
}

TEST_CASE("run output is reproducible") {
    TempDir tmp;
    const auto a = (tmp.path / "a.csv").string(), b = (tmp.path / "b.csv").string();
    const std::string args = "run -i " + heart + " --label class --method cube -N 100 --num-seeds 3 --summary ";
    CHECK(run(args + (tmp.path / "sa.csv").string() + " -o " + a) == 0);
    CHECK(run(args + (tmp.path / "sb.csv").string() + " -o " + b) == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(slurp(tmp.path / "sa.csv") == slurp(tmp.path / "sb.csv"));
    CHECK(slurp(a).rfind("dataset,method,algo,N,k,seed,fitted,ca,iterations,status\n", 0) == 0);
}

TEST_CASE("exit codes") {
    CHECK(run("run -i " + heart + " --label class --method bogus") == 2);
    CHECK(run("run -i " + heart + " --label class --method cube -N 999999") == 2);
    CHECK(run("run -i " + heart + " --label class --gamma nope") == 2);
    CHECK(run("run -i /nonexistent.csv --label class") == 3);
    CHECK(run("run -i " + heart + " --label no_such_column") == 3);
    CHECK(run("frobnicate") == 2);
}
