#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cubeproto/data.hpp"
#include "cubeproto/kproto.hpp"
#include "cubeproto/sampling.hpp"

namespace cubeproto {

enum class SamplingMethod { None, Random, Cube };

std::string_view to_string(SamplingMethod method);
SamplingMethod parse_sampling_method(std::string_view text);

struct RunConfig {
    std::string dataset;  // name written to the output rows
    SamplingMethod method = SamplingMethod::None;
    std::size_t sample_size = 0;  // ignored for SamplingMethod::None
    std::size_t balance_dims = 1;
    Algorithm algo = Algorithm::KPrototype;
    std::size_t k = 0;  // 0: number of classes in the labels
    std::optional<double> gamma;  // empty: default_gamma() of the full feature view
    bool standardize = true;
    std::vector<std::uint64_t> seeds;
    std::size_t max_iter = 300;
};

struct SeedResult {
    std::uint64_t seed = 0;
    bool ok = false;
    std::string error;
    double ca = 0.0;
    std::size_t iterations = 0;
    std::size_t fitted = 0;  // rows the model was fitted on
    double sample_ms = 0.0;
    double cluster_ms = 0.0;  // fit + reverse mapping
    std::vector<std::int32_t> assignments;
};

struct RunSummary {
    RunConfig config;  // with k resolved
    std::size_t population = 0;
    std::vector<SeedResult> results;  // in config.seeds order
    double ca_mean = 0.0;
    double ca_std = 0.0;  // sample std over successful seeds
    std::size_t failures = 0;
};

// Throws ArgumentError for an invalid configuration; errors inside a single
// seed are recorded in that seed's result instead.
RunSummary run_pipeline(const Dataset& dataset, const RunConfig& config);

struct SweepPoint {
    std::size_t sample_size;
    double ca_mean;
    double ca_std;
    std::size_t failures;
};

std::vector<SweepPoint> run_sweep(const Dataset& dataset, const RunConfig& config,
                                  const std::vector<std::size_t>& sizes);

// dataset,method,algo,N,k,seed,fitted,ca,iterations,status[,sample_ms,cluster_ms]
void write_run_header(std::ostream& out, bool timing);
void write_run_rows(std::ostream& out, const RunSummary& summary, bool timing);
// dataset,method,algo,N,k,gamma,seeds,failures,ca_mean,ca_std
void write_summary_header(std::ostream& out);
void write_summary_row(std::ostream& out, const RunSummary& summary);
// N,ca_mean,ca_std,failures
void write_sweep(std::ostream& out, const std::vector<SweepPoint>& points);

// row_index,<value> files.
void write_assignments(std::ostream& out, std::span<const std::int32_t> assignments);
std::vector<std::int32_t> read_assignments(std::istream& in, std::size_t expected_rows);
void write_sample(std::ostream& out, const Sample& sample);
std::vector<std::size_t> read_sample_indices(std::istream& in);
void write_probabilities(std::ostream& out, const InclusionPlan& plan);

std::string format_real(double v, int digits = 6);

}  // namespace cubeproto
