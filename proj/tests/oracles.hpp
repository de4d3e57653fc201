#pragma once

// Plain reference implementations used to cross-check the clustering code.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

namespace testing {

using Points = std::vector<std::vector<double>>;
using Codes = std::vector<std::vector<int>>;

// Inclusion probabilities by bisection on h(z) = sum min(z s_i / X, 1) = N.
inline std::vector<double> bisection_pi(const std::vector<double>& s, double N) {
    const double X = std::accumulate(s.begin(), s.end(), 0.0);
    auto h = [&](double z) {
        double t = 0;
        for (double v : s) t += std::min(z * v / X, 1.0);
        return t;
    };
    double lo = 0, hi = X / *std::min_element(s.begin(), s.end());
    for (int it = 0; it < 300; ++it) {
        const double mid = 0.5 * (lo + hi);
        (h(mid) < N ? lo : hi) = mid;
    }
    std::vector<double> pi;
    for (double v : s) pi.push_back(std::min(hi * v / X, 1.0));
    return pi;
}

// Lloyd iterations from the given starting rows. Returns the assignment of
// every pass; ties go to the lowest cluster, an empty cluster restarts at the
// point farthest from its current centre (stable on ties).
inline std::vector<std::vector<int>> lloyd(const Points& x, std::vector<std::size_t> init, std::size_t max_iter) {
    const auto n = x.size(), d = x.empty() ? 0 : x[0].size(), k = init.size();
    Points c;
    for (auto i : init) c.push_back(x[i]);
    auto sq = [&](const std::vector<double>& a, const std::vector<double>& b) {
        double s = 0;
        for (std::size_t j = 0; j < d; ++j) s += (a[j] - b[j]) * (a[j] - b[j]);
        return s;
    };
    auto pass = [&] {
        std::vector<int> a(n);
        for (std::size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t l = 0; l < k; ++l)
                if (double v = sq(x[i], c[l]); v < best) best = v, a[i] = static_cast<int>(l);
        }
        return a;
    };
    std::vector<std::vector<int>> history{pass()};
    while (history.size() < max_iter) {
        const auto& a = history.back();
        Points sum(k, std::vector<double>(d, 0.0));
        std::vector<std::size_t> cnt(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            ++cnt[a[i]];
            for (std::size_t j = 0; j < d; ++j) sum[a[i]][j] += x[i][j];
        }
        for (std::size_t l = 0; l < k; ++l)
            if (cnt[l])
                for (std::size_t j = 0; j < d; ++j) c[l][j] = sum[l][j] / static_cast<double>(cnt[l]);
        std::vector<std::size_t> order(n);
        for (std::size_t i = 0; i < n; ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(),
                         [&](auto p, auto q) { return sq(x[p], c[a[p]]) > sq(x[q], c[a[q]]); });
        std::size_t next = 0;
        for (std::size_t l = 0; l < k; ++l)
            if (!cnt[l] && next < n) c[l] = x[order[next++]];
        auto b = pass();
        const bool same = b == a;
        history.push_back(std::move(b));
        if (same) break;
    }
    return history;
}

// K-Modes from the given starting rows: Hamming assignment by exhaustive scan,
// mode updates with ties to the smallest code.
inline std::vector<std::vector<int>> kmodes(const Codes& x, std::vector<std::size_t> init, int levels,
                                            std::size_t max_iter) {
    const auto n = x.size(), m = x.empty() ? 0 : x[0].size(), k = init.size();
    Codes c;
    for (auto i : init) c.push_back(x[i]);
    auto ham = [&](const std::vector<int>& a, const std::vector<int>& b) {
        int s = 0;
        for (std::size_t j = 0; j < m; ++j) s += a[j] != b[j];
        return s;
    };
    auto pass = [&] {
        std::vector<int> a(n);
        for (std::size_t i = 0; i < n; ++i) {
            int best = std::numeric_limits<int>::max();
            for (std::size_t l = 0; l < k; ++l)
                if (int v = ham(x[i], c[l]); v < best) best = v, a[i] = static_cast<int>(l);
        }
        return a;
    };
    std::vector<std::vector<int>> history{pass()};
    while (history.size() < max_iter) {
        const auto& a = history.back();
        for (std::size_t l = 0; l < k; ++l) {
            bool any = false;
            for (std::size_t i = 0; i < n; ++i) any |= a[i] == static_cast<int>(l);
            if (!any) continue;
            for (std::size_t j = 0; j < m; ++j) {
                int best = 0, best_count = -1;
                for (int v = 0; v < levels; ++v) {
                    int count = 0;
                    for (std::size_t i = 0; i < n; ++i) count += a[i] == static_cast<int>(l) && x[i][j] == v;
                    if (count > best_count) best = v, best_count = count;
                }
                c[l][j] = best;
            }
        }
        std::vector<std::size_t> order(n);
        for (std::size_t i = 0; i < n; ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(),
                         [&](auto p, auto q) { return ham(x[p], c[a[p]]) > ham(x[q], c[a[q]]); });
        std::size_t next = 0;
        for (std::size_t l = 0; l < k; ++l) {
            bool any = false;
            for (std::size_t i = 0; i < n; ++i) any |= a[i] == static_cast<int>(l);
            if (!any && next < n) c[l] = x[order[next++]];
        }
        auto b = pass();
        const bool same = b == a;
        history.push_back(std::move(b));
        if (same) break;
    }
    return history;
}

}  // namespace testing
