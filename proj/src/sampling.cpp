#include "cubeproto/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <string>

#include "cubeproto/errors.hpp"

namespace cubeproto {

namespace {

constexpr double kRankTolerance = 1e-12;

bool is_fractional(double p) { return p > 0.0 && p < 1.0; }

// Non-zero vector u with b * u = 0, scaled to unit max-norm, or nothing when
// b has full column rank. Gauss-Jordan elimination with partial pivoting.
std::optional<std::vector<double>> null_vector(Matrix b) {
    const auto rows = b.rows();
    const auto cols = b.cols();
    double scale = 0.0;
    for (double v : b.data()) scale = std::max(scale, std::abs(v));
    const double tol = kRankTolerance * std::max(1.0, scale);

    std::vector<std::size_t> pivot_col;  // pivot column of each reduced row
    std::vector<bool> is_pivot(cols, false);
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t best = r;
        for (std::size_t i = r + 1; i < rows; ++i)
            if (std::abs(b(i, c)) > std::abs(b(best, c))) best = i;
        if (std::abs(b(best, c)) <= tol) continue;
        if (best != r)
            for (std::size_t j = 0; j < cols; ++j) std::swap(b(r, j), b(best, j));
        const double piv = b(r, c);
        for (std::size_t j = c; j < cols; ++j) b(r, j) /= piv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || b(i, c) == 0.0) continue;
            const double f = b(i, c);
            for (std::size_t j = c; j < cols; ++j) b(i, j) -= f * b(r, j);
        }
        pivot_col.push_back(c);
        is_pivot[c] = true;
        ++r;
    }
    const auto free_it = std::find(is_pivot.begin(), is_pivot.end(), false);
    if (free_it == is_pivot.end()) return std::nullopt;
    const auto free_col = static_cast<std::size_t>(free_it - is_pivot.begin());

    std::vector<double> u(cols, 0.0);
    u[free_col] = 1.0;
    for (std::size_t i = 0; i < pivot_col.size(); ++i) u[pivot_col[i]] = -b(i, free_col);
    double m = 0.0;
    for (double v : u) m = std::max(m, std::abs(v));
    for (auto& v : u) v /= m;
    return u;
}

// Largest t >= 0 keeping pi + t * dir inside [0, 1] on the window, and the
// window position that binds first.
std::pair<double, std::size_t> max_step(const std::vector<double>& pi, const std::vector<std::size_t>& window,
                                        const std::vector<double>& dir) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    for (std::size_t k = 0; k < window.size(); ++k) {
        const double p = pi[window[k]];
        double t = std::numeric_limits<double>::infinity();
        if (dir[k] > 0.0)
            t = (1.0 - p) / dir[k];
        else if (dir[k] < 0.0)
            t = p / -dir[k];
        if (t < best) {
            best = t;
            arg = k;
        }
    }
    return {best, arg};
}

}  // namespace

BalanceSystem build_balance_system(const InclusionPlan& plan, const Matrix& aux) {
    const auto n = plan.pi.size();
    if (!aux.empty() && aux.cols() != n)
        throw ArgumentError("auxiliary matrix has " + std::to_string(aux.cols()) + " columns, expected " +
                            std::to_string(n));
    const auto q = aux.empty() ? 0 : aux.rows();
    BalanceSystem sys;
    sys.a = Matrix(q + 1, n);
    sys.totals.assign(q + 1, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        const double p = plan.pi[j];
        if (!(p > 0.0)) throw ArgumentError("unit " + std::to_string(j) + " has zero inclusion probability");
        sys.a(0, j) = 1.0;
        for (std::size_t r = 0; r < q; ++r) {
            const double v = aux(r, j) / p;
            if (!std::isfinite(v)) throw ArgumentError("non-finite balancing entry at unit " + std::to_string(j));
            sys.a(r + 1, j) = v;
        }
    }
    for (std::size_t r = 0; r <= q; ++r) {
        double t = 0.0;
        for (std::size_t j = 0; j < n; ++j) t += sys.a(r, j) * plan.pi[j];
        sys.totals[r] = t;
    }
    return sys;
}

FlightState flight_phase(const BalanceSystem& system, const InclusionPlan& plan, Rng& rng,
                         const FlightObserver& observer) {
    const auto n = system.units();
    const auto p = system.dims();
    if (plan.pi.size() != n) throw ArgumentError("plan and balance system disagree on population size");

    FlightState state;
    state.pi = plan.pi;
    auto& pi = state.pi;

    std::vector<bool> parked(n, false);  // ejected from the walk, left for landing
    std::vector<std::size_t> window;
    std::size_t cursor = 0;

    for (;;) {
        while (window.size() < p + 1 && cursor < n) {
            if (is_fractional(pi[cursor]) && !parked[cursor]) window.push_back(cursor);
            ++cursor;
        }
        if (window.empty()) break;

        Matrix b(p, window.size());
        for (std::size_t r = 0; r < p; ++r)
            for (std::size_t k = 0; k < window.size(); ++k) b(r, k) = system.a(r, window[k]);
        auto u = null_vector(std::move(b));
        if (!u) break;

        auto [up, up_arg] = max_step(pi, window, *u);
        std::vector<double> neg(u->size());
        std::transform(u->begin(), u->end(), neg.begin(), [](double v) { return -v; });
        auto [down, down_arg] = max_step(pi, window, neg);

        if (up == 0.0 && down == 0.0) {
            parked[window[up_arg]] = true;
            window.erase(window.begin() + static_cast<std::ptrdiff_t>(up_arg));
            continue;
        }

        // Martingale step: E[change] = up * P(up) - down * P(down) = 0.
        const bool go_up = rng.uniform() * (up + down) < down;
        const double t = go_up ? up : -down;
        const std::size_t binding = go_up ? up_arg : down_arg;
        for (std::size_t k = 0; k < window.size(); ++k) {
            auto& v = pi[window[k]];
            v += t * (*u)[k];
            if (v < 0.0) v = 0.0;
            if (v > 1.0) v = 1.0;
        }
        {
            auto& v = pi[window[binding]];
            v = (v < 0.5) ? 0.0 : 1.0;
        }
        ++state.steps;
        if (observer) observer(pi);

        std::erase_if(window, [&](std::size_t unit) { return !is_fractional(pi[unit]); });
    }

    for (std::size_t i = 0; i < n; ++i)
        if (is_fractional(pi[i])) state.fractional.push_back(i);
    return state;
}

double landing_cost(const BalanceSystem& system, std::span<const double> completed,
                    std::span<const double> flight_pi) {
    double cost = 0.0;
    for (std::size_t r = 0; r < system.dims(); ++r) {
        double diff = 0.0;
        for (std::size_t j = 0; j < system.units(); ++j) {
            const double delta = completed[j] - flight_pi[j];
            if (delta != 0.0) diff += system.a(r, j) * delta;
        }
        const double rel = diff / (std::abs(system.totals[r]) + 1e-12);
        cost += rel * rel;
    }
    return cost;
}

Sample landing_phase(const BalanceSystem& system, const FlightState& state, const InclusionPlan& plan) {
    const auto& frac = state.fractional;
    const auto count = frac.size();
    if (count > kMaxLandingUnits)
        throw LandingError(std::to_string(count) + " fractional units left after flight; at most " +
                           std::to_string(kMaxLandingUnits) + " can be enumerated");

    // Same sums as landing_cost, restricted to the units that can change.
    const auto dims = system.dims();
    auto cost_of = [&](std::uint64_t mask) {
        double cost = 0.0;
        for (std::size_t r = 0; r < dims; ++r) {
            double diff = 0.0;
            for (std::size_t j = 0; j < count; ++j) {
                const double bit = ((mask >> (count - 1 - j)) & 1U) ? 1.0 : 0.0;
                const double delta = bit - state.pi[frac[j]];
                if (delta != 0.0) diff += system.a(r, frac[j]) * delta;
            }
            const double rel = diff / (std::abs(system.totals[r]) + 1e-12);
            cost += rel * rel;
        }
        return cost;
    };

    double best_cost = std::numeric_limits<double>::infinity();
    std::uint64_t best_mask = 0;
    const std::uint64_t total = std::uint64_t{1} << count;
    // The first unit owns the most significant bit, so ascending masks are in
    // lexicographic order and strict '<' keeps the smallest tie.
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        const double c = cost_of(mask);
        if (c < best_cost) {
            best_cost = c;
            best_mask = mask;
        }
    }
    std::vector<double> completed = state.pi;
    for (std::size_t j = 0; j < count; ++j) completed[frac[j]] = ((best_mask >> (count - 1 - j)) & 1U) ? 1.0 : 0.0;

    Sample s;
    s.method = SampleMethod::Cube;
    s.flight_steps = state.steps;
    s.landing_units = count;
    s.landing_cost = count ? best_cost : 0.0;
    for (std::size_t i = 0; i < completed.size(); ++i)
        if (completed[i] == 1.0) {
            s.indices.push_back(i);
            s.weights.push_back(1.0 / plan.pi[i]);
        }
    return s;
}

InclusionPlan pca_inclusion_plan(const Dataset& dataset, std::size_t sample_size, const PcaOptions& pca) {
    const auto n = dataset.rows();
    if (sample_size < 1 || sample_size > n)
        throw ArgumentError("sample size " + std::to_string(sample_size) + " outside [1, " + std::to_string(n) + "]");
    if (n == 1) return inclusion_probabilities(std::vector<double>{1.0}, 1);
    const auto enc = encode(dataset);
    const auto comp = first_component(enc, pca);
    return inclusion_probabilities(sizes_from_scores(comp.scores), sample_size);
}

CubeResult cube_sample_detailed(const Dataset& dataset, const CubeOptions& options) {
    const auto n = dataset.rows();
    const auto N = options.sample_size;
    if (N < 1 || N > n) throw ArgumentError("sample size " + std::to_string(N) + " outside [1, " + std::to_string(n) + "]");

    CubeResult result;
    if (N == n) {
        result.plan.pi.assign(n, 1.0);
        result.plan.sizes.assign(n, 1.0);
        result.plan.sample_size = n;
        result.sample.method = SampleMethod::Cube;
        result.sample.indices.resize(n);
        std::iota(result.sample.indices.begin(), result.sample.indices.end(), std::size_t{0});
        result.sample.weights.assign(n, 1.0);
        return result;
    }

    const auto enc = encode(dataset);
    const auto q = options.balance_dims;
    if (q > enc.values.cols())
        throw ArgumentError("balance dims " + std::to_string(q) + " exceed encoded width " +
                            std::to_string(enc.values.cols()));
    result.components = principal_components(enc.values, std::max<std::size_t>(1, q), options.pca);
    result.plan = inclusion_probabilities(sizes_from_scores(result.components.front().scores), N);

    Matrix aux;
    if (q > 0) {
        aux = Matrix(q, n);
        for (std::size_t r = 0; r < q; ++r)
            for (std::size_t j = 0; j < n; ++j) aux(r, j) = result.components[r].scores[j];
    }
    const auto system = build_balance_system(result.plan, aux);
    auto rng = Rng::stream(options.seed, 0xc0be);
    const auto state = flight_phase(system, result.plan, rng);
    result.sample = landing_phase(system, state, result.plan);
    return result;
}

Sample cube_sample(const Dataset& dataset, std::size_t sample_size, std::size_t balance_dims, std::uint64_t seed) {
    CubeOptions opts;
    opts.sample_size = sample_size;
    opts.balance_dims = balance_dims;
    opts.seed = seed;
    return cube_sample_detailed(dataset, opts).sample;
}

Sample random_sample(std::size_t population, std::size_t sample_size, std::uint64_t seed) {
    if (sample_size < 1 || sample_size > population)
        throw ArgumentError("sample size " + std::to_string(sample_size) + " outside [1, " +
                            std::to_string(population) + "]");
    std::vector<std::size_t> perm(population);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    auto rng = Rng::stream(seed, 0x5a3d);
    for (std::size_t i = 0; i < sample_size; ++i) {
        const auto j = i + static_cast<std::size_t>(rng.below(population - i));
        std::swap(perm[i], perm[j]);
    }
    Sample s;
    s.method = SampleMethod::Random;
    s.indices.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(sample_size));
    std::sort(s.indices.begin(), s.indices.end());
    s.weights.assign(sample_size, static_cast<double>(population) / static_cast<double>(sample_size));
    return s;
}

}  // namespace cubeproto
