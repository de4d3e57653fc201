#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace cubeproto {

struct InclusionPlan {
    std::vector<double> pi;     // inclusion probabilities, 0 < pi <= 1, sum = sample_size
    std::vector<double> sizes;  // positive size measure each pi is proportional to (below the cap)
    std::size_t sample_size = 0;
    double z_star = 0.0;        // solution of h(z) = N, h(z) = sum_i min(z s_i / X, 1)
};

// Shifts component scores to strictly positive sizes: s_i = score_i - min + delta,
// delta = 1% of the score range. A zero range yields uniform sizes of 1.
std::vector<double> sizes_from_scores(std::span<const double> scores);

// pi_i = min(1, z* s_i / X) with X = sum s_i and z* solving h(z) = N exactly on
// the linear piece of h that contains N.
// Throws ArgumentError unless 1 <= N <= n and every size is positive and finite.
InclusionPlan inclusion_probabilities(std::span<const double> sizes, std::size_t sample_size);

}  // namespace cubeproto
