#include "cubeproto/kproto.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "cubeproto/errors.hpp"
#include "cubeproto/random.hpp"

namespace cubeproto {

std::string_view to_string(Algorithm algo) {
    switch (algo) {
        case Algorithm::KPrototype: return "kprototype";
        case Algorithm::KMeans: return "kmeans";
        case Algorithm::KModes: return "kmodes";
    }
    return "?";
}

Algorithm parse_algorithm(std::string_view text) {
    if (text == "kprototype") return Algorithm::KPrototype;
    if (text == "kmeans") return Algorithm::KMeans;
    if (text == "kmodes") return Algorithm::KModes;
    throw ArgumentError("unknown algorithm '" + std::string(text) + "'");
}

MixedData::MixedData(Matrix numeric, std::vector<std::int32_t> categorical, std::vector<std::size_t> levels)
    : numeric_(std::move(numeric)), categorical_(std::move(categorical)), levels_(std::move(levels)) {
    const auto mt = levels_.size();
    if (numeric_.cols() > 0 || numeric_.rows() > 0)
        rows_ = numeric_.rows();
    else
        rows_ = mt ? categorical_.size() / mt : 0;
    if (categorical_.size() != rows_ * mt) throw ArgumentError("categorical storage does not match row count");
    if (numeric_.cols() == 0 && numeric_.rows() != rows_) numeric_ = Matrix(rows_, 0);
}

MixedData MixedData::subset(std::span<const std::size_t> indices) const {
    Matrix num(indices.size(), numeric_count());
    std::vector<std::int32_t> cat;
    cat.reserve(indices.size() * categorical_count());
    for (std::size_t r = 0; r < indices.size(); ++r) {
        const auto i = indices[r];
        if (i >= rows_) throw ArgumentError("subset index out of range");
        std::copy_n(numeric_row(i).begin(), numeric_count(), num.row(r).begin());
        auto c = categorical_row(i);
        cat.insert(cat.end(), c.begin(), c.end());
    }
    return MixedData(std::move(num), std::move(cat), levels_);
}

MixedData make_features(const Dataset& dataset, Algorithm algo, bool standardize) {
    const auto n = dataset.rows();
    const auto mr = dataset.numeric_count();
    const auto mt = dataset.categorical_count();
    std::vector<std::size_t> levels(mt);
    for (std::size_t t = 0; t < mt; ++t) levels[t] = dataset.categories(t).size();

    switch (algo) {
        case Algorithm::KMeans: {
            if (standardize) return MixedData(encode(dataset).values, {}, {});
            std::size_t d = mr;
            for (auto l : levels) d += l;
            Matrix x(n, d);
            for (std::size_t i = 0; i < n; ++i) {
                auto num = dataset.numeric_row(i);
                std::copy(num.begin(), num.end(), x.row(i).begin());
                std::size_t off = mr;
                for (std::size_t t = 0; t < mt; ++t) {
                    x(i, off + static_cast<std::size_t>(dataset.categorical_row(i)[t])) = 1.0;
                    off += levels[t];
                }
            }
            return MixedData(std::move(x), {}, {});
        }
        case Algorithm::KModes: {
            if (mt == 0) throw ArgumentError("k-modes needs categorical features");
            auto cat = dataset.categorical_values();
            return MixedData(Matrix(n, 0), std::vector<std::int32_t>(cat.begin(), cat.end()), std::move(levels));
        }
        case Algorithm::KPrototype: break;
    }

    Matrix x(n, mr);
    for (std::size_t i = 0; i < n; ++i) {
        auto num = dataset.numeric_row(i);
        std::copy(num.begin(), num.end(), x.row(i).begin());
    }
    if (standardize && mr > 0) {
        // Same z-scoring as encode(): sample std, constant columns to zero.
        const auto enc = encode(dataset);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < mr; ++j) x(i, j) = enc.values(i, j);
    }
    auto cat = dataset.categorical_values();
    return MixedData(std::move(x), std::vector<std::int32_t>(cat.begin(), cat.end()), std::move(levels));
}

double default_gamma(const MixedData& data) {
    const auto n = data.rows();
    const auto mr = data.numeric_count();
    if (mr == 0 || n < 2) return 1.0;
    double total = 0.0;
    for (std::size_t j = 0; j < mr; ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) mean += data.numeric_row(i)[j];
        mean /= static_cast<double>(n);
        double ss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double c = data.numeric_row(i)[j] - mean;
            ss += c * c;
        }
        total += std::sqrt(ss / static_cast<double>(n - 1));
    }
    return 0.5 * total / static_cast<double>(mr);
}

double dist(std::span<const double> numeric, std::span<const std::int32_t> categorical, const Prototype& proto,
            double gamma) {
    if (numeric.size() != proto.numeric.size() || categorical.size() != proto.categorical.size())
        throw ArgumentError("record and prototype arities differ");
    double d = 0.0;
    for (std::size_t r = 0; r < numeric.size(); ++r) {
        const double diff = numeric[r] - proto.numeric[r];
        d += diff * diff;
    }
    std::size_t mismatches = 0;
    for (std::size_t t = 0; t < categorical.size(); ++t) mismatches += categorical[t] != proto.categorical[t];
    return d + gamma * static_cast<double>(mismatches);
}

namespace {

Prototype prototype_of(const MixedData& data, std::size_t row) {
    auto num = data.numeric_row(row);
    auto cat = data.categorical_row(row);
    return {{num.begin(), num.end()}, {cat.begin(), cat.end()}};
}

std::int32_t nearest(const MixedData& data, std::size_t row, const std::vector<Prototype>& protos, double gamma) {
    const auto num = data.numeric_row(row);
    const auto cat = data.categorical_row(row);
    std::int32_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l < protos.size(); ++l) {
        const double d = dist(num, cat, protos[l], gamma);
        if (d < best_d) {
            best_d = d;
            best = static_cast<std::int32_t>(l);
        }
    }
    return best;
}

// Means and modes of each cluster; returns the member count per cluster.
// Empty clusters keep their previous prototype.
std::vector<std::size_t> update_prototypes(const MixedData& data, std::span<const std::int32_t> assignments,
                                           std::vector<Prototype>& protos) {
    const auto k = protos.size();
    const auto mr = data.numeric_count();
    const auto mt = data.categorical_count();
    const auto& levels = data.levels();

    std::vector<std::size_t> count(k, 0);
    std::vector<std::vector<double>> sums(k, std::vector<double>(mr, 0.0));
    std::vector<std::vector<std::vector<std::size_t>>> freq(k);
    for (auto& f : freq) {
        f.resize(mt);
        for (std::size_t t = 0; t < mt; ++t) f[t].assign(levels[t], 0);
    }
    for (std::size_t i = 0; i < data.rows(); ++i) {
        const auto l = static_cast<std::size_t>(assignments[i]);
        ++count[l];
        const auto num = data.numeric_row(i);
        for (std::size_t r = 0; r < mr; ++r) sums[l][r] += num[r];
        const auto cat = data.categorical_row(i);
        for (std::size_t t = 0; t < mt; ++t) ++freq[l][t][static_cast<std::size_t>(cat[t])];
    }
    for (std::size_t l = 0; l < k; ++l) {
        if (count[l] == 0) continue;
        for (std::size_t r = 0; r < mr; ++r) protos[l].numeric[r] = sums[l][r] / static_cast<double>(count[l]);
        for (std::size_t t = 0; t < mt; ++t) {
            const auto& f = freq[l][t];
            // max_element returns the first maximum: the smallest id wins ties.
            protos[l].categorical[t] = static_cast<std::int32_t>(std::max_element(f.begin(), f.end()) - f.begin());
        }
    }
    return count;
}

void reseed_empty(const MixedData& data, std::span<const std::int32_t> assignments, std::vector<Prototype>& protos,
                  const std::vector<std::size_t>& count, double gamma) {
    std::vector<std::size_t> empty;
    for (std::size_t l = 0; l < protos.size(); ++l)
        if (count[l] == 0) empty.push_back(l);
    if (empty.empty()) return;

    std::vector<double> far(data.rows());
    for (std::size_t i = 0; i < data.rows(); ++i)
        far[i] = dist(data.numeric_row(i), data.categorical_row(i), protos[static_cast<std::size_t>(assignments[i])],
                      gamma);
    std::vector<std::size_t> order(data.rows());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return far[a] > far[b]; });
    for (std::size_t e = 0; e < empty.size() && e < order.size(); ++e) protos[empty[e]] = prototype_of(data, order[e]);
}

}  // namespace

std::vector<std::int32_t> assign(const MixedData& data, const std::vector<Prototype>& prototypes, double gamma) {
    if (prototypes.empty()) throw ArgumentError("no prototypes");
    std::vector<std::int32_t> out(data.rows());
    for (std::size_t i = 0; i < data.rows(); ++i) out[i] = nearest(data, i, prototypes, gamma);
    return out;
}

double cost(const MixedData& data, const std::vector<Prototype>& prototypes, std::span<const std::int32_t> assignments,
            double gamma) {
    if (assignments.size() != data.rows()) throw ArgumentError("assignment count does not match row count");
    double c = 0.0;
    for (std::size_t i = 0; i < data.rows(); ++i)
        c += dist(data.numeric_row(i), data.categorical_row(i), prototypes.at(static_cast<std::size_t>(assignments[i])),
                  gamma);
    return c;
}

double cost(const KPrototypeModel& model, const MixedData& data) {
    return cost(data, model.prototypes, model.assignments, model.gamma);
}

KPrototypeModel fit(const MixedData& data, const FitOptions& options) {
    const auto n = data.rows();
    const auto k = options.k;
    if (k == 0) throw ArgumentError("k must be at least 1");
    if (k > n) throw ArgumentError("k = " + std::to_string(k) + " exceeds the " + std::to_string(n) + " rows to fit");
    if (options.max_iter == 0) throw ArgumentError("max_iter must be at least 1");
    if (options.gamma < 0.0) throw ArgumentError("gamma must be non-negative");

    KPrototypeModel model;
    model.gamma = options.gamma;
    if (!options.initial_centers.empty()) {
        if (options.initial_centers.size() != k) throw ArgumentError("initial_centers must hold k rows");
        for (auto c : options.initial_centers)
            if (c >= n) throw ArgumentError("initial center out of range");
        model.initial_centers = options.initial_centers;
    } else {
        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        auto rng = Rng::stream(options.seed, 0x6b70);
        for (std::size_t i = 0; i < k; ++i) std::swap(perm[i], perm[i + static_cast<std::size_t>(rng.below(n - i))]);
        model.initial_centers.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(k));
    }
    for (auto c : model.initial_centers) model.prototypes.push_back(prototype_of(data, c));

    auto& protos = model.prototypes;
    auto current = assign(data, protos, options.gamma);
    model.iterations = 1;
    if (options.on_iteration)
        options.on_iteration({1, protos, current, cost(data, protos, current, options.gamma)});

    while (model.iterations < options.max_iter) {
        const auto count = update_prototypes(data, current, protos);
        reseed_empty(data, current, protos, count, options.gamma);
        auto next = assign(data, protos, options.gamma);
        ++model.iterations;
        if (options.on_iteration)
            options.on_iteration({model.iterations, protos, next, cost(data, protos, next, options.gamma)});
        const bool same = next == current;
        current = std::move(next);
        if (same) {
            model.converged = true;
            break;
        }
    }
    model.assignments = std::move(current);
    model.final_cost = cost(data, protos, model.assignments, options.gamma);
    return model;
}

std::vector<std::int32_t> reverse_map(const MixedData& full, const KPrototypeModel& model,
                                      std::span<const std::size_t> sample_indices) {
    if (sample_indices.size() != model.assignments.size())
        throw ArgumentError("sample index count does not match fitted rows");
    const auto n = full.rows();
    std::vector<std::int32_t> out(n, -1);
    for (std::size_t j = 0; j < sample_indices.size(); ++j) {
        if (sample_indices[j] >= n) throw ArgumentError("sample index out of range");
        out[sample_indices[j]] = model.assignments[j];
    }
    for (std::size_t i = 0; i < n; ++i)
        if (out[i] < 0) out[i] = nearest(full, i, model.prototypes, model.gamma);
    return out;
}

}  // namespace cubeproto
