#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "cubeproto/data.hpp"
#include "cubeproto/matrix.hpp"

namespace cubeproto {

enum class Algorithm { KPrototype, KMeans, KModes };

std::string_view to_string(Algorithm algo);
Algorithm parse_algorithm(std::string_view text);

// Clustering features: n x m_r numeric matrix plus n x m_t category ids.
class MixedData {
public:
    MixedData() = default;
    MixedData(Matrix numeric, std::vector<std::int32_t> categorical, std::vector<std::size_t> levels);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t numeric_count() const noexcept { return numeric_.cols(); }
    std::size_t categorical_count() const noexcept { return levels_.size(); }
    const std::vector<std::size_t>& levels() const noexcept { return levels_; }

    std::span<const double> numeric_row(std::size_t i) const { return numeric_.row(i); }
    std::span<const std::int32_t> categorical_row(std::size_t i) const {
        const auto m = categorical_count();
        return {categorical_.data() + i * m, m};
    }

    MixedData subset(std::span<const std::size_t> indices) const;

private:
    std::size_t rows_ = 0;
    Matrix numeric_;
    std::vector<std::int32_t> categorical_;
    std::vector<std::size_t> levels_;
};

// Feature view used by each algorithm:
//   KPrototype: numerics (z-scored when `standardize`) and raw category ids;
//   KMeans:     the encoded matrix (numerics and one-hot blocks, z-scored when
//               `standardize`), no categorical part;
//   KModes:     category ids only. Throws ArgumentError without categoricals.
MixedData make_features(const Dataset& dataset, Algorithm algo, bool standardize = true);

struct Prototype {
    std::vector<double> numeric;        // per-feature means
    std::vector<std::int32_t> categorical;  // per-feature modes

    friend bool operator==(const Prototype&, const Prototype&) = default;
};

// Huang's default categorical weight: half the mean sample standard deviation
// of the numeric features (0.5 on z-scored data), or 1 without numerics.
double default_gamma(const MixedData& data);

// Squared Euclidean distance over numerics plus gamma times the number of
// categorical mismatches. Throws ArgumentError on an arity mismatch.
double dist(std::span<const double> numeric, std::span<const std::int32_t> categorical, const Prototype& proto,
            double gamma);

struct KPrototypeModel {
    std::vector<Prototype> prototypes;
    double gamma = 0.0;
    std::vector<std::int32_t> assignments;  // one per fitted row
    std::size_t iterations = 0;             // assignment passes
    bool converged = false;
    double final_cost = 0.0;
    std::vector<std::size_t> initial_centers;
};

struct IterationTrace {
    std::size_t iteration;                        // 1-based
    const std::vector<Prototype>& prototypes;     // prototypes the pass assigned against
    const std::vector<std::int32_t>& assignments;
    double cost;
};

struct FitOptions {
    std::size_t k = 2;
    double gamma = 0.5;
    std::uint64_t seed = 0;
    std::size_t max_iter = 300;
    // Row positions of the starting prototypes; drawn at random when empty.
    std::vector<std::size_t> initial_centers;
    std::function<void(const IterationTrace&)> on_iteration;
};

// Lloyd-style alternation: assign every row to its nearest prototype (ties to
// the lowest cluster), then recompute means and modes (mode ties to the
// smallest category id). Stops when a pass leaves the assignments unchanged
// or after max_iter passes. A cluster left empty is reseeded at the row
// farthest from its own prototype.
// Throws ArgumentError when k is 0 or exceeds the row count.
KPrototypeModel fit(const MixedData& data, const FitOptions& options);

// Nearest prototype for each row, ties to the lowest cluster index.
std::vector<std::int32_t> assign(const MixedData& data, const std::vector<Prototype>& prototypes, double gamma);

// Total cost: sum over rows of dist(row, prototype of its cluster).
double cost(const KPrototypeModel& model, const MixedData& data);
double cost(const MixedData& data, const std::vector<Prototype>& prototypes,
            std::span<const std::int32_t> assignments, double gamma);

// Assignment for all rows of `full`: sampled rows keep their fitted cluster,
// the rest go to their nearest prototype. sample_indices[j] is the row of
// `full` that was fitted row j.
std::vector<std::int32_t> reverse_map(const MixedData& full, const KPrototypeModel& model,
                                      std::span<const std::size_t> sample_indices);

}  // namespace cubeproto
