#include "cubeproto/inclusion.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "cubeproto/errors.hpp"

namespace cubeproto {

std::vector<double> sizes_from_scores(std::span<const double> scores) {
    if (scores.empty()) throw ArgumentError("no scores");
    const auto [lo, hi] = std::minmax_element(scores.begin(), scores.end());
    const double range = *hi - *lo;
    if (!(range > 0.0)) return std::vector<double>(scores.size(), 1.0);
    const double delta = 0.01 * range;
    std::vector<double> sizes(scores.size());
    std::transform(scores.begin(), scores.end(), sizes.begin(), [&](double s) { return (s - *lo) + delta; });
    return sizes;
}

InclusionPlan inclusion_probabilities(std::span<const double> sizes, std::size_t sample_size) {
    const auto n = sizes.size();
    if (sample_size < 1 || sample_size > n)
        throw ArgumentError("sample size " + std::to_string(sample_size) + " outside [1, " + std::to_string(n) + "]");
    for (double s : sizes)
        if (!(s > 0.0) || !std::isfinite(s)) throw ArgumentError("sizes must be positive and finite");

    InclusionPlan plan;
    plan.sizes.assign(sizes.begin(), sizes.end());
    plan.sample_size = sample_size;
    const double total = std::accumulate(sizes.begin(), sizes.end(), 0.0);

    if (sample_size == n) {
        plan.pi.assign(n, 1.0);
        plan.z_star = total / *std::min_element(sizes.begin(), sizes.end());
        return plan;
    }

    // h is piecewise linear with breakpoints X / s_i. Walking the sizes in
    // descending order, after capping the c largest units the remaining mass
    // N - c is spread proportionally over the rest; the first c for which the
    // largest uncapped unit stays <= 1 gives the segment holding N.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return sizes[a] > sizes[b]; });

    std::vector<double> tail(n + 1, 0.0);  // tail[c] = sum of sizes ranked c..n-1
    for (std::size_t r = n; r-- > 0;) tail[r] = tail[r + 1] + sizes[order[r]];

    std::size_t capped = 0;
    while (capped < sample_size) {
        const double remaining = static_cast<double>(sample_size - capped);
        if (remaining * sizes[order[capped]] <= tail[capped]) break;
        ++capped;
    }
    // capped < N always: with N - c = 1 the test reduces to s <= tail.
    const double remaining = static_cast<double>(sample_size - capped);
    plan.z_star = remaining * total / tail[capped];
    plan.pi.resize(n);
    // one rounding per unit: N' s_i / tail
    for (std::size_t i = 0; i < n; ++i) plan.pi[i] = std::min(1.0, remaining * sizes[i] / tail[capped]);
    return plan;
}

}  // namespace cubeproto
