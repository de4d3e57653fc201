#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "cubeproto/data.hpp"
#include "cubeproto/matrix.hpp"

namespace cubeproto {

struct PcaOptions {
    std::uint64_t seed = 0;
    double tol = 1e-10;
    std::size_t max_iter = 1000;
};

struct ComponentScores {
    std::vector<double> scores;       // projection of each row onto the axis
    std::vector<double> axis;         // unit-norm eigenvector
    double eigenvalue = 0.0;          // variance of the scores
    double explained_variance_ratio = 0.0;
    std::size_t iterations = 0;
};

// d x d sample covariance (n - 1 divisor) of the column-centred matrix.
Matrix sample_covariance(const Matrix& x);

// Dominant principal component by power iteration on the sample covariance.
// The axis is sign-fixed so its largest-magnitude coordinate is positive.
// Throws ConvergenceError when successive estimates still differ by more than
// `tol` after `max_iter` iterations.
ComponentScores first_component(const Matrix& x, const PcaOptions& options = {});
inline ComponentScores first_component(const EncodedMatrix& m, const PcaOptions& options = {}) {
    return first_component(m.values, options);
}

// Leading `count` components, each found by power iteration on the covariance
// deflated by the components before it.
std::vector<ComponentScores> principal_components(const Matrix& x, std::size_t count, const PcaOptions& options = {});

}  // namespace cubeproto
