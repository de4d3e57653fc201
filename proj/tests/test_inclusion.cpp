#include <algorithm>
#include <cmath>
#include <numeric>

#include "cubeproto/errors.hpp"
#include "cubeproto/inclusion.hpp"
#include "cubeproto/random.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace cubeproto;

namespace {

std::vector<double> random_sizes(Rng& rng, std::size_t n) {
    std::vector<double> s(n);
    // heavy right tail so caps bind often
    for (auto& v : s) v = std::exp(4.0 * rng.uniform()) * (0.01 + rng.uniform());
    return s;
}

}  // namespace

TEST_CASE("sizes from scores") {
    auto a = sizes_from_scores(std::vector<double>{0, 1, 2});
    CHECK(a[0] == doctest::Approx(0.02));
    CHECK(a[1] == doctest::Approx(1.02));
    CHECK(a[2] == doctest::Approx(2.02));
    auto b = sizes_from_scores(std::vector<double>{3.7, 3.7, 3.7});
    CHECK(b == std::vector<double>{1, 1, 1});
    auto c = sizes_from_scores(std::vector<double>{-5, 5});
    CHECK(c[0] == doctest::Approx(0.1));
    CHECK(c[1] == doctest::Approx(10.1));
}

TEST_CASE("hand cases") {
    auto eq = inclusion_probabilities(std::vector<double>(6, 1.0), 3);
    for (double p : eq.pi) CHECK(p == 0.5);

    auto a = inclusion_probabilities(std::vector<double>{1, 2, 3, 4}, 2);
    CHECK(a.pi == std::vector<double>{0.2, 0.4, 0.6, 0.8});
    CHECK(a.z_star == doctest::Approx(2.0));

    auto b = inclusion_probabilities(std::vector<double>{10, 1, 1}, 2);
    CHECK(b.pi == std::vector<double>{1.0, 0.5, 0.5});

    auto all = inclusion_probabilities(std::vector<double>{1, 5, 2}, 3);
    CHECK(all.pi == std::vector<double>{1, 1, 1});
}

TEST_CASE("argument errors") {
    const std::vector<double> s{1, 2, 3};
    CHECK_THROWS_AS(inclusion_probabilities(s, 0), ArgumentError);
    CHECK_THROWS_AS(inclusion_probabilities(s, 4), ArgumentError);
    CHECK_THROWS_AS(inclusion_probabilities(std::vector<double>{1, 0, 2}, 1), ArgumentError);
    CHECK_THROWS_AS(inclusion_probabilities(std::vector<double>{1, -1}, 1), ArgumentError);
    CHECK_THROWS_AS(inclusion_probabilities(std::vector<double>{1, NAN}, 1), ArgumentError);
}

TEST_CASE("random instances against the bisection oracle") {
    Rng rng(2024);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto n = 1 + rng.below(50);
        const auto N = 1 + rng.below(n);
        const auto s = random_sizes(rng, n);
        const auto plan = inclusion_probabilities(s, N);
        const auto oracle = testing::bisection_pi(s, static_cast<double>(N));
        CHECK(std::abs(std::accumulate(plan.pi.begin(), plan.pi.end(), 0.0) - static_cast<double>(N)) <= 1e-6);
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(plan.pi[i] > 0.0);
            CHECK(plan.pi[i] <= 1.0);
            CHECK(std::abs(plan.pi[i] - oracle[i]) <= 1e-8);
            for (std::size_t j = 0; j < n; ++j)
                if (s[i] >= s[j]) CHECK(plan.pi[i] >= plan.pi[j]);
        }
        const double c = 0.001 + 1000 * rng.uniform();
        auto scaled = s;
        for (auto& v : scaled) v *= c;
        const auto again = inclusion_probabilities(scaled, N);
        for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(again.pi[i] - plan.pi[i]) <= 1e-12);
    }
}
