#include <sstream>

#include "cubeproto/errors.hpp"
#include "cubeproto/pipeline.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace cubeproto;

namespace {

const Dataset& heart() {
    static const Dataset ds = load_csv_inferred(testing::data_path("heart"), "class");
    return ds;
}

RunConfig base_config(SamplingMethod method, std::size_t N) {
    RunConfig c;
    c.dataset = "heart";
    c.method = method;
    c.sample_size = N;
    c.seeds = {0, 1, 2};
    return c;
}

std::string render(const RunSummary& s) {
    std::ostringstream out;
    write_run_header(out, false);
    write_run_rows(out, s, false);
    write_summary_header(out);
    write_summary_row(out, s);
    return out.str();
}

}  // namespace

TEST_CASE("identical configs give byte-identical output") {
    for (auto m : {SamplingMethod::None, SamplingMethod::Random, SamplingMethod::Cube}) {
        auto cfg = base_config(m, 100);
        CHECK(render(run_pipeline(heart(), cfg)) == render(run_pipeline(heart(), cfg)));
    }
}

TEST_CASE("cube on the whole population equals no sampling") {
    auto none = run_pipeline(heart(), base_config(SamplingMethod::None, 0));
    auto cube = run_pipeline(heart(), base_config(SamplingMethod::Cube, heart().rows()));
    REQUIRE(none.results.size() == cube.results.size());
    for (std::size_t s = 0; s < none.results.size(); ++s) {
        CHECK(cube.results[s].ok);
        CHECK(none.results[s].assignments == cube.results[s].assignments);
        CHECK(none.results[s].ca == cube.results[s].ca);
    }
}

TEST_CASE("summary fields") {
    auto cfg = base_config(SamplingMethod::Random, 50);
    auto s = run_pipeline(heart(), cfg);
    CHECK(s.config.k == 2);
    CHECK(s.config.gamma.has_value());
    CHECK(s.failures == 0);
    CHECK(s.population == 303);
    for (const auto& r : s.results) {
        CHECK(r.fitted == 50);
        CHECK(r.assignments.size() == 303);
        CHECK(r.ca >= 164.0 / 303.0 - 1e-12);
    }
}

TEST_CASE("configuration errors") {
    auto cfg = base_config(SamplingMethod::Cube, 400);
    CHECK_THROWS_AS(run_pipeline(heart(), cfg), ArgumentError);
    cfg.sample_size = 50;
    cfg.seeds.clear();
    CHECK_THROWS_AS(run_pipeline(heart(), cfg), ArgumentError);
    cfg.seeds = {1};
    cfg.gamma = -1.0;
    CHECK_THROWS_AS(run_pipeline(heart(), cfg), ArgumentError);
}

TEST_CASE("per-seed failures are recorded") {
    auto cfg = base_config(SamplingMethod::Random, 2);
    cfg.k = 5;  // more clusters than sampled rows
    auto s = run_pipeline(heart(), cfg);
    CHECK(s.failures == 3);
    for (const auto& r : s.results) CHECK_FALSE(r.ok);
    CHECK(render(s).find("error: ") != std::string::npos);
}

TEST_CASE("sweeps") {
    auto cfg = base_config(SamplingMethod::Cube, 0);
    std::ostringstream empty;
    write_sweep(empty, run_sweep(heart(), cfg, {}));
    CHECK(empty.str() == "N,ca_mean,ca_std,failures\n");
    auto pts = run_sweep(heart(), cfg, {50, 100});
    REQUIRE(pts.size() == 2);
    CHECK(pts[1].sample_size == 100);
    CHECK_THROWS_AS(run_sweep(heart(), cfg, {1000}), ArgumentError);
}

TEST_CASE("assignment and sample files") {
    std::vector<std::int32_t> a{1, 0, 1};
    std::stringstream io;
    write_assignments(io, a);
    CHECK(read_assignments(io, 3) == a);
    std::istringstream bad("cluster\n1\n");
    CHECK_THROWS_AS(read_assignments(bad, 1), SchemaError);
    std::istringstream gap("row_index,cluster\n0,1\n");
    CHECK_THROWS_AS(read_assignments(gap, 2), ArgumentError);

    Sample s;
    s.indices = {3, 7};
    s.weights = {2.0, 2.5};
    std::stringstream sio;
    write_sample(sio, s);
    CHECK(read_sample_indices(sio) == s.indices);
    std::istringstream dup("row_index,weight\n1,2\n1,2\n");
    CHECK_THROWS_AS(read_sample_indices(dup), IngestError);
}
