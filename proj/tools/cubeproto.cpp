// cubeproto: cube sampling, K-Prototype clustering and clustering accuracy
// from the command line. See README.md for the subcommands and file formats.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cubeproto/errors.hpp"
#include "cubeproto/metrics.hpp"
#include "cubeproto/pipeline.hpp"

namespace {

using namespace cubeproto;

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

struct DataArgs {
    std::string input;
    std::string schema;
    std::string label;
};

struct Output {
    std::string path;
    std::unique_ptr<std::ofstream> file;

    std::ostream& stream() {
        if (path.empty() || path == "-") return std::cout;
        if (!file) {
            file = std::make_unique<std::ofstream>(path, std::ios::binary);
            if (!*file) throw ArgumentError("cannot write " + path);
        }
        return *file;
    }
};

std::uint64_t default_seed() {
    if (const char* env = std::getenv("CUBEPROTO_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw ArgumentError(std::string("CUBEPROTO_SEED is not an unsigned integer: ") + env);
        }
    }
    return 0;
}

void add_data_options(CLI::App* cmd, DataArgs& args, bool label_required = false) {
    cmd->add_option("--input,-i", args.input, "CSV file with a header row")->required();
    cmd->add_option("--schema", args.schema,
                    "JSON object mapping column name to numeric|categorical|label|ignore; "
                    "columns not listed are inferred (numeric iff every non-missing value parses as a number, "
                    "categorical when there is no evidence)")
        ->check(CLI::ExistingFile);
    auto* label = cmd->add_option("--label", args.label, "name of the class label column (never inferred)");
    if (label_required) label->required();
}

Dataset load(const DataArgs& args) {
    std::unordered_map<std::string, ColumnKind> overrides;
    if (!args.schema.empty()) overrides = read_schema_overrides(args.schema);
    std::optional<std::string> label;
    if (!args.label.empty()) label = args.label;
    return load_csv_inferred(args.input, label, overrides);
}

std::string stem(const std::string& path) {
    auto name = std::filesystem::path(path).stem().string();
    return name.empty() ? path : name;
}

std::vector<std::uint64_t> resolve_seeds(const std::vector<std::uint64_t>& listed, std::optional<std::uint64_t> base,
                                         std::size_t count) {
    if (!listed.empty()) return listed;
    const auto first = base ? *base : default_seed();
    std::vector<std::uint64_t> seeds;
    for (std::size_t i = 0; i < count; ++i) seeds.push_back(first + i);
    return seeds;
}

std::optional<double> parse_gamma(const std::string& text) {
    if (text == "auto") return std::nullopt;
    try {
        std::size_t pos = 0;
        const double g = std::stod(text, &pos);
        if (pos == text.size() && g >= 0.0) return g;
    } catch (const std::exception&) {
    }
    throw ArgumentError("--gamma must be 'auto' or a non-negative number, got '" + text + "'");
}

struct RunArgs {
    DataArgs data;
    std::string name;
    std::string method = "cube";
    std::size_t sample_size = 0;
    std::size_t balance_dims = 1;
    std::string algo = "kprototype";
    std::size_t k = 0;
    std::string gamma = "auto";
    bool no_standardize = false;
    std::vector<std::uint64_t> seeds;
    std::optional<std::uint64_t> seed;
    std::size_t num_seeds = 10;
    std::size_t max_iter = 300;
};

void add_run_options(CLI::App* cmd, RunArgs& a) {
    add_data_options(cmd, a.data, true);
    cmd->add_option("--name", a.name, "dataset name written to output rows (default: input file stem)");
    cmd->add_option("--method", a.method, "sampling before clustering")
        ->check(CLI::IsMember({"none", "random", "cube"}))
        ->capture_default_str();
    cmd->add_option("--sample-size,-N", a.sample_size, "sample size N (ignored for --method none)");
    cmd->add_option("--balance-dims,-q", a.balance_dims, "principal components balanced besides the sample size")
        ->capture_default_str();
    cmd->add_option("--algo", a.algo)->check(CLI::IsMember({"kprototype", "kmeans", "kmodes"}))->capture_default_str();
    cmd->add_option("--k", a.k, "number of clusters (default: number of classes)");
    cmd->add_option("--gamma", a.gamma, "weight of categorical mismatches, or auto (half the mean numeric std)")
        ->capture_default_str();
    cmd->add_flag("--no-standardize", a.no_standardize, "cluster on raw numeric values instead of z-scores");
    cmd->add_option("--seeds", a.seeds, "explicit seed list")->delimiter(',');
    cmd->add_option("--seed", a.seed, "first seed when --seeds is absent (default: $CUBEPROTO_SEED or 0)");
    cmd->add_option("--num-seeds", a.num_seeds, "consecutive seeds when --seeds is absent")->capture_default_str();
    cmd->add_option("--max-iter", a.max_iter)->capture_default_str();
}

RunConfig to_config(const RunArgs& a) {
    RunConfig cfg;
    cfg.dataset = a.name.empty() ? stem(a.data.input) : a.name;
    cfg.method = parse_sampling_method(a.method);
    cfg.sample_size = a.sample_size;
    cfg.balance_dims = a.balance_dims;
    cfg.algo = parse_algorithm(a.algo);
    cfg.k = a.k;
    cfg.gamma = parse_gamma(a.gamma);
    cfg.standardize = !a.no_standardize;
    cfg.seeds = resolve_seeds(a.seeds, a.seed, a.num_seeds);
    cfg.max_iter = a.max_iter;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cube-sampled K-Prototype clustering for mixed numeric/categorical data"};
    app.require_subcommand(1);

    // probabilities
    DataArgs prob_data;
    std::size_t prob_n = 0;
    Output prob_out;
    auto* prob = app.add_subcommand("probabilities", "inclusion probabilities from the first principal component");
    add_data_options(prob, prob_data);
    prob->add_option("--sample-size,-N", prob_n, "sample size N")->required();
    prob->add_option("--out,-o", prob_out.path, "output CSV: row_index,size,pi (default stdout)");

    // sample
    DataArgs samp_data;
    std::size_t samp_n = 0, samp_q = 1;
    std::string samp_method = "cube";
    std::optional<std::uint64_t> samp_seed;
    Output samp_out;
    auto* samp = app.add_subcommand("sample", "draw a cube or simple random sample");
    add_data_options(samp, samp_data);
    samp->add_option("--sample-size,-N", samp_n, "sample size N")->required();
    samp->add_option("--balance-dims,-q", samp_q, "principal components balanced besides the sample size")
        ->capture_default_str();
    samp->add_option("--method", samp_method)->check(CLI::IsMember({"cube", "random"}))->capture_default_str();
    samp->add_option("--seed", samp_seed, "random seed (default: $CUBEPROTO_SEED or 0)");
    samp->add_option("--out,-o", samp_out.path, "output CSV: row_index,weight (default stdout)");

    // cluster
    DataArgs clu_data;
    std::string clu_algo = "kprototype", clu_sample;
    std::size_t clu_k = 0, clu_iter = 300;
    std::string clu_gamma = "auto";
    bool clu_raw = false;
    std::optional<std::uint64_t> clu_seed;
    Output clu_out;
    auto* clu = app.add_subcommand("cluster", "fit clusters (optionally on a sample) and assign every row");
    add_data_options(clu, clu_data);
    clu->add_option("--k", clu_k, "number of clusters (default: number of classes of --label)");
    clu->add_option("--gamma", clu_gamma, "weight of categorical mismatches, or auto (half the mean numeric std)")
        ->capture_default_str();
    clu->add_option("--seed", clu_seed, "random seed (default: $CUBEPROTO_SEED or 0)");
    clu->add_option("--max-iter", clu_iter)->capture_default_str();
    clu->add_option("--algo", clu_algo)->check(CLI::IsMember({"kprototype", "kmeans", "kmodes"}))->capture_default_str();
    clu->add_flag("--no-standardize", clu_raw, "cluster on raw numeric values instead of z-scores");
    clu->add_option("--sample", clu_sample, "sample CSV (row_index,...) to fit on; other rows are reverse mapped")
        ->check(CLI::ExistingFile);
    clu->add_option("--out,-o", clu_out.path, "output CSV: row_index,cluster (default stdout)");

    // evaluate
    DataArgs ev_data;
    std::string ev_assign;
    Output ev_out;
    auto* ev = app.add_subcommand("evaluate", "clustering accuracy of an assignments file");
    add_data_options(ev, ev_data, true);
    ev->add_option("--assignments,-a", ev_assign, "CSV: row_index,cluster")->required();
    ev->add_option("--out,-o", ev_out.path, "per-cluster CSV: cluster,size,majority_label,majority_count");

    // run
    RunArgs run_args;
    Output run_out, run_summary;
    bool run_timing = false;
    auto* run = app.add_subcommand("run", "sample, cluster, reverse map and evaluate over several seeds");
    add_run_options(run, run_args);
    run->add_option("--out,-o", run_out.path, "per-seed CSV (default stdout)");
    run->add_option("--summary", run_summary.path, "aggregate CSV (default: printed to stderr)");
    run->add_flag("--timing", run_timing, "add sample_ms and cluster_ms columns (output no longer reproducible)");

    // sweep
    RunArgs sw_args;
    std::vector<std::size_t> sw_sizes;
    Output sw_out;
    auto* sw = app.add_subcommand("sweep", "mean and std of clustering accuracy across sample sizes");
    add_run_options(sw, sw_args);
    sw->add_option("--sizes", sw_sizes, "sample sizes")->delimiter(',');
    sw->add_option("--out,-o", sw_out.path, "CSV: N,ca_mean,ca_std,failures (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (*prob) {
            const auto data = load(prob_data);
            write_probabilities(prob_out.stream(), pca_inclusion_plan(data, prob_n));
        } else if (*samp) {
            const auto data = load(samp_data);
            const auto seed = samp_seed ? *samp_seed : default_seed();
            const auto sample = samp_method == "cube" ? cube_sample(data, samp_n, samp_q, seed)
                                                      : random_sample(data.rows(), samp_n, seed);
            write_sample(samp_out.stream(), sample);
            std::cerr << "selected " << sample.indices.size() << " of " << data.rows() << " rows\n";
        } else if (*clu) {
            const auto data = load(clu_data);
            const auto algo = parse_algorithm(clu_algo);
            const auto features = make_features(data, algo, !clu_raw);
            std::vector<std::size_t> indices;
            if (!clu_sample.empty()) {
                std::ifstream in(clu_sample);
                indices = read_sample_indices(in);
            } else {
                indices.resize(data.rows());
                std::iota(indices.begin(), indices.end(), std::size_t{0});
            }
            FitOptions fo;
            fo.k = clu_k ? clu_k : data.class_count();
            if (fo.k == 0) throw ArgumentError("--k is required without --label");
            fo.gamma = parse_gamma(clu_gamma).value_or(default_gamma(features));
            fo.seed = clu_seed ? *clu_seed : default_seed();
            fo.max_iter = clu_iter;
            const auto model = fit(features.subset(indices), fo);
            write_assignments(clu_out.stream(), reverse_map(features, model, indices));
            std::cerr << "iterations=" << model.iterations << " converged=" << (model.converged ? "yes" : "no")
                      << " final_cost=" << format_real(model.final_cost) << '\n';
        } else if (*ev) {
            const auto data = load(ev_data);
            std::ifstream in(ev_assign);
            const auto assignments = read_assignments(in, data.rows());
            const auto report = clustering_accuracy(assignments, data.labels());
            std::cout << "CA = " << format_real(report.ca) << " (" << report.n_total << " rows)\n";
            std::cout << "cluster  size  majority_label  majority_count\n";
            for (const auto& c : report.per_cluster)
                std::cout << c.cluster << "  " << c.size << "  " << data.label_names().name(c.majority_label) << "  "
                          << c.majority_count << '\n';
            if (!ev_out.path.empty()) {
                auto& out = ev_out.stream();
                out << "cluster,size,majority_label,majority_count\n";
                for (const auto& c : report.per_cluster)
                    out << c.cluster << ',' << c.size << ',' << csv::escape(data.label_names().name(c.majority_label))
                        << ',' << c.majority_count << '\n';
            }
        } else if (*run) {
            const auto data = load(run_args.data);
            const auto summary = run_pipeline(data, to_config(run_args));
            auto& out = run_out.stream();
            write_run_header(out, run_timing);
            write_run_rows(out, summary, run_timing);
            if (run_summary.path.empty()) {
                write_summary_header(std::cerr);
                write_summary_row(std::cerr, summary);
            } else {
                auto& s = run_summary.stream();
                write_summary_header(s);
                write_summary_row(s, summary);
            }
            if (summary.failures == summary.results.size()) return kExitNumeric;
        } else if (*sw) {
            const auto data = load(sw_args.data);
            write_sweep(sw_out.stream(), run_sweep(data, to_config(sw_args), sw_sizes));
        }
    } catch (const ArgumentError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const IngestError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const SchemaError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const ConvergenceError& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const LandingError& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return kExitNumeric;
    }
    return 0;
}
