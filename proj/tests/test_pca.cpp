#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "cubeproto/pca.hpp"
#include "cubeproto/random.hpp"
#include "doctest.h"

using namespace cubeproto;

namespace {

Matrix random_matrix(Rng& rng, std::size_t n, std::size_t d) {
    Matrix x(n, d);
    // column scales spread out so the top eigenvalue is usually well separated
    for (std::size_t j = 0; j < d; ++j) {
        const double scale = 1.0 + 3.0 * static_cast<double>(j);
        for (std::size_t i = 0; i < n; ++i) x(i, j) = scale * (rng.uniform() - 0.5) + 0.3 * x(i, 0);
    }
    return x;
}

double variance(const std::vector<double>& v) {
    const double m = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    double ss = 0;
    for (double x : v) ss += (x - m) * (x - m);
    return ss / static_cast<double>(v.size() - 1);
}

Eigen::MatrixXd to_eigen(const Matrix& m) {
    Eigen::MatrixXd e(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
    return e;
}

}  // namespace

TEST_CASE("one column: scores are the centred values") {
    Matrix x(3, 1);
    x(0, 0) = -1;
    x(1, 0) = 0;
    x(2, 0) = 1;
    auto pc = first_component(x);
    CHECK(pc.axis[0] == doctest::Approx(1.0));
    CHECK(pc.scores[0] == doctest::Approx(-1.0));
    CHECK(pc.scores[1] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(pc.scores[2] == doctest::Approx(1.0));
}

TEST_CASE("points on y = x") {
    Matrix x(3, 2);
    for (std::size_t i = 0; i < 3; ++i) x(i, 0) = x(i, 1) = static_cast<double>(i + 1);
    auto pc = first_component(x);
    CHECK(pc.axis[0] == doctest::Approx(1 / std::sqrt(2.0)));
    CHECK(pc.axis[1] == doctest::Approx(1 / std::sqrt(2.0)));
    const double c[] = {-1, 0, 1};
    for (std::size_t i = 0; i < 3; ++i) CHECK(pc.scores[i] == doctest::Approx(std::sqrt(2.0) * c[i]).epsilon(1e-9));
    CHECK(pc.explained_variance_ratio == doctest::Approx(1.0));
}

TEST_CASE("isotropic data: any unit axis with the top variance") {
    Matrix x(4, 2);
    const double pts[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 2; ++j) x(i, j) = pts[i][j];
    auto pc = first_component(x);
    const double norm = std::hypot(pc.axis[0], pc.axis[1]);
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_eigen(sample_covariance(x)));
    CHECK(std::abs(variance(pc.scores) - es.eigenvalues()(1)) <= 1e-6);
}

TEST_CASE("top eigenvalue agrees with a dense eigensolver") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        Rng rng(seed);
        const auto d = 1 + rng.below(10);
        const auto n = d + 2 + rng.below(50);
        auto x = random_matrix(rng, n, d);
        auto pc = first_component(x, {seed, 1e-12, 20000});
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_eigen(sample_covariance(x)));
        const double top = es.eigenvalues()(static_cast<Eigen::Index>(d - 1));
        CHECK(std::abs(variance(pc.scores) - top) <= 1e-6 * std::max(1.0, top));
        CHECK(std::abs(pc.eigenvalue - top) <= 1e-6 * std::max(1.0, top));

        // Rayleigh quotient beats every coordinate axis
        const auto cov = sample_covariance(x);
        double rq = 0;
        for (std::size_t a = 0; a < d; ++a)
            for (std::size_t b = 0; b < d; ++b) rq += pc.axis[a] * cov(a, b) * pc.axis[b];
        for (std::size_t a = 0; a < d; ++a) CHECK(rq >= cov(a, a) - 1e-9);

        // sign convention
        const auto big = std::max_element(pc.axis.begin(), pc.axis.end(),
                                          [](double p, double q) { return std::abs(p) < std::abs(q); });
        CHECK(*big > 0);
    }
}

TEST_CASE("scores follow a row permutation") {
    Rng rng(7);
    auto x = random_matrix(rng, 30, 4);
    auto base = first_component(x);
    std::vector<std::size_t> perm(30);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t i = 29; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);
    Matrix y(30, 4);
    for (std::size_t i = 0; i < 30; ++i)
        for (std::size_t j = 0; j < 4; ++j) y(i, j) = x(perm[i], j);
    auto moved = first_component(y);
    for (std::size_t i = 0; i < 30; ++i) CHECK(std::abs(moved.scores[i] - base.scores[perm[i]]) <= 1e-8);
}

TEST_CASE("deflated components are orthonormal and ordered") {
    Rng rng(3);
    auto x = random_matrix(rng, 80, 5);
    auto pcs = principal_components(x, 3, {0, 1e-12, 20000});
    REQUIRE(pcs.size() == 3);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_eigen(sample_covariance(x)));
    for (std::size_t c = 0; c < 3; ++c) {
        CHECK(pcs[c].eigenvalue == doctest::Approx(es.eigenvalues()(static_cast<Eigen::Index>(4 - c))).epsilon(1e-6));
        for (std::size_t e = 0; e <= c; ++e) {
            double dot = 0;
            for (std::size_t j = 0; j < 5; ++j) dot += pcs[c].axis[j] * pcs[e].axis[j];
            CHECK(dot == doctest::Approx(c == e ? 1.0 : 0.0).epsilon(1e-6).scale(1.0));
        }
    }
}

TEST_CASE("constant data gives zero scores") {
    Matrix x(5, 2, 3.0);
    auto pc = first_component(x);
    for (double s : pc.scores) CHECK(s == doctest::Approx(0.0));
}
