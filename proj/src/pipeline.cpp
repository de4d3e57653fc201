#include "cubeproto/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <set>

#include "cubeproto/errors.hpp"
#include "cubeproto/metrics.hpp"

namespace cubeproto {

std::string_view to_string(SamplingMethod method) {
    switch (method) {
        case SamplingMethod::None: return "none";
        case SamplingMethod::Random: return "random";
        case SamplingMethod::Cube: return "cube";
    }
    return "?";
}

SamplingMethod parse_sampling_method(std::string_view text) {
    if (text == "none") return SamplingMethod::None;
    if (text == "random") return SamplingMethod::Random;
    if (text == "cube") return SamplingMethod::Cube;
    throw ArgumentError("unknown sampling method '" + std::string(text) + "'");
}

std::string format_real(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
    return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

std::pair<double, double> mean_std(const std::vector<double>& v) {
    if (v.empty()) return {0.0, 0.0};
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    if (v.size() < 2) return {mean, 0.0};
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / static_cast<double>(v.size() - 1))};
}

SeedResult run_seed(const Dataset& dataset, const MixedData& features, const RunConfig& cfg, std::uint64_t seed) {
    SeedResult res;
    res.seed = seed;
    try {
        const auto n = dataset.rows();
        const auto t0 = Clock::now();
        std::vector<std::size_t> indices;
        switch (cfg.method) {
            case SamplingMethod::None:
                indices.resize(n);
                std::iota(indices.begin(), indices.end(), std::size_t{0});
                break;
            case SamplingMethod::Random: indices = random_sample(n, cfg.sample_size, seed).indices; break;
            case SamplingMethod::Cube:
                indices = cube_sample(dataset, cfg.sample_size, cfg.balance_dims, seed).indices;
                break;
        }
        res.sample_ms = elapsed_ms(t0);
        res.fitted = indices.size();

        const auto t1 = Clock::now();
        FitOptions fo;
        fo.k = cfg.k;
        fo.gamma = *cfg.gamma;
        fo.seed = seed;
        fo.max_iter = cfg.max_iter;
        const auto fitted = features.subset(indices);
        const auto model = fit(fitted, fo);
        res.assignments = reverse_map(features, model, indices);
        res.cluster_ms = elapsed_ms(t1);
        res.iterations = model.iterations;
        res.ca = clustering_accuracy(res.assignments, dataset.labels()).ca;
        res.ok = true;
    } catch (const std::exception& e) {
        res.ok = false;
        res.error = e.what();
    }
    return res;
}

}  // namespace

RunSummary run_pipeline(const Dataset& dataset, const RunConfig& config) {
    RunSummary summary;
    summary.config = config;
    auto& cfg = summary.config;
    summary.population = dataset.rows();

    if (cfg.seeds.empty()) throw ArgumentError("at least one seed is required");
    if (!dataset.has_labels()) throw ArgumentError("evaluation needs a label column");
    if (cfg.k == 0) cfg.k = dataset.class_count();
    if (cfg.k == 0) throw ArgumentError("k must be at least 1");
    if (cfg.method != SamplingMethod::None && (cfg.sample_size < 1 || cfg.sample_size > dataset.rows()))
        throw ArgumentError("sample size " + std::to_string(cfg.sample_size) + " outside [1, " +
                            std::to_string(dataset.rows()) + "]");
    if (cfg.method == SamplingMethod::None) cfg.sample_size = dataset.rows();

    const auto features = make_features(dataset, cfg.algo, cfg.standardize);
    if (!cfg.gamma) cfg.gamma = default_gamma(features);
    if (*cfg.gamma < 0.0) throw ArgumentError("gamma must be non-negative");
    std::vector<double> cas;
    for (auto seed : cfg.seeds) {
        auto r = run_seed(dataset, features, cfg, seed);
        if (r.ok)
            cas.push_back(r.ca);
        else
            ++summary.failures;
        summary.results.push_back(std::move(r));
    }
    std::tie(summary.ca_mean, summary.ca_std) = mean_std(cas);
    return summary;
}

std::vector<SweepPoint> run_sweep(const Dataset& dataset, const RunConfig& config,
                                  const std::vector<std::size_t>& sizes) {
    for (auto s : sizes)
        if (s > dataset.rows()) throw ArgumentError("sweep size " + std::to_string(s) + " exceeds population");
    std::vector<SweepPoint> out;
    for (auto s : sizes) {
        auto cfg = config;
        cfg.sample_size = s;
        const auto summary = run_pipeline(dataset, cfg);
        out.push_back({s, summary.ca_mean, summary.ca_std, summary.failures});
    }
    return out;
}

void write_run_header(std::ostream& out, bool timing) {
    out << "dataset,method,algo,N,k,seed,fitted,ca,iterations,status";
    if (timing) out << ",sample_ms,cluster_ms";
    out << '\n';
}

void write_run_rows(std::ostream& out, const RunSummary& s, bool timing) {
    const auto& c = s.config;
    for (const auto& r : s.results) {
        out << csv::escape(c.dataset) << ',' << to_string(c.method) << ',' << to_string(c.algo) << ','
            << c.sample_size << ',' << c.k << ',' << r.seed << ',' << r.fitted << ','
            << (r.ok ? format_real(r.ca) : "") << ',' << r.iterations << ','
            << csv::escape(r.ok ? "ok" : "error: " + r.error);
        if (timing) out << ',' << format_real(r.sample_ms, 3) << ',' << format_real(r.cluster_ms, 3);
        out << '\n';
    }
}

void write_summary_header(std::ostream& out) { out << "dataset,method,algo,N,k,gamma,seeds,failures,ca_mean,ca_std\n"; }

void write_summary_row(std::ostream& out, const RunSummary& s) {
    const auto& c = s.config;
    out << csv::escape(c.dataset) << ',' << to_string(c.method) << ',' << to_string(c.algo) << ',' << c.sample_size
        << ',' << c.k << ',' << format_real(c.gamma.value_or(0.0)) << ',' << s.results.size() << ',' << s.failures << ',' << format_real(s.ca_mean) << ','
        << format_real(s.ca_std) << '\n';
}

void write_sweep(std::ostream& out, const std::vector<SweepPoint>& points) {
    out << "N,ca_mean,ca_std,failures\n";
    for (const auto& p : points)
        out << p.sample_size << ',' << format_real(p.ca_mean) << ',' << format_real(p.ca_std) << ',' << p.failures
            << '\n';
}

void write_assignments(std::ostream& out, std::span<const std::int32_t> assignments) {
    out << "row_index,cluster\n";
    for (std::size_t i = 0; i < assignments.size(); ++i) out << i << ',' << assignments[i] << '\n';
}

namespace {

template <typename T>
T parse_int(const std::string& s, std::size_t row) {
    T v{};
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
        throw IngestError("row " + std::to_string(row) + ": '" + s + "' is not an integer", row);
    return v;
}

}  // namespace

std::vector<std::int32_t> read_assignments(std::istream& in, std::size_t expected_rows) {
    auto records = csv::read_all(in);
    if (records.empty() || records[0].size() < 2 || records[0][0] != "row_index")
        throw SchemaError("assignments file must start with a row_index,cluster header");
    std::vector<std::int32_t> out(expected_rows, -1);
    for (std::size_t r = 1; r < records.size(); ++r) {
        if (records[r].size() < 2) throw IngestError("row " + std::to_string(r) + " is too short", r);
        const auto idx = parse_int<std::size_t>(records[r][0], r);
        if (idx >= expected_rows) throw IngestError("row index " + std::to_string(idx) + " out of range", r);
        out[idx] = parse_int<std::int32_t>(records[r][1], r);
    }
    for (std::size_t i = 0; i < expected_rows; ++i)
        if (out[i] < 0) throw ArgumentError("no assignment for row " + std::to_string(i));
    return out;
}

void write_sample(std::ostream& out, const Sample& sample) {
    out << "row_index,weight\n";
    for (std::size_t j = 0; j < sample.indices.size(); ++j)
        out << sample.indices[j] << ',' << format_real(sample.weights[j], 10) << '\n';
}

std::vector<std::size_t> read_sample_indices(std::istream& in) {
    auto records = csv::read_all(in);
    if (records.empty() || records[0].empty() || records[0][0] != "row_index")
        throw SchemaError("sample file must start with a row_index header");
    std::set<std::size_t> seen;
    std::vector<std::size_t> out;
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto idx = parse_int<std::size_t>(records[r].at(0), r);
        if (!seen.insert(idx).second) throw IngestError("duplicate row index " + std::to_string(idx), r);
        out.push_back(idx);
    }
    return out;
}

void write_probabilities(std::ostream& out, const InclusionPlan& plan) {
    out << "row_index,size,pi\n";
    for (std::size_t i = 0; i < plan.pi.size(); ++i)
        out << i << ',' << format_real(plan.sizes[i], 10) << ',' << format_real(plan.pi[i], 10) << '\n';
}

}  // namespace cubeproto
