#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "cubeproto/data.hpp"
#include "cubeproto/inclusion.hpp"
#include "cubeproto/matrix.hpp"
#include "cubeproto/pca.hpp"
#include "cubeproto/random.hpp"

namespace cubeproto {

// Balancing equations of the cube method. Column j of `a` is x_j / pi_j where
// x_j stacks pi_j (row 0, so row 0 is all ones and fixes the sample size) and
// the auxiliary variables of unit j. `totals` = a * pi, the population totals
// every balanced sample reproduces.
struct BalanceSystem {
    Matrix a;                   // p x n
    std::vector<double> totals; // p

    std::size_t dims() const noexcept { return a.rows(); }
    std::size_t units() const noexcept { return a.cols(); }
};

// `aux` holds one auxiliary variable per row (q x n; q may be zero).
// Throws ArgumentError on a zero probability, a shape mismatch or a
// non-finite entry.
BalanceSystem build_balance_system(const InclusionPlan& plan, const Matrix& aux);

struct FlightState {
    std::vector<double> pi;                  // current probabilities
    std::vector<std::size_t> fractional;     // units with 0 < pi < 1, ascending
    std::size_t steps = 0;
};

// Called after every flight step with the current probability vector.
using FlightObserver = std::function<void(std::span<const double>)>;

// Fast flight phase: random walk on the hyperplane a * pi = totals, run on a
// moving window of p + 1 fractional units. Every step fixes at least one unit
// at 0 or 1, so there are at most n steps. Ends once the active units' columns
// admit no null vector, leaving at most p fractional units.
FlightState flight_phase(const BalanceSystem& system, const InclusionPlan& plan, Rng& rng,
                         const FlightObserver& observer = {});

// Relative balance violation of a completed 0/1 vector against the flight
// end point: sum_r ((a_r (pi - pi_flight)) / (|total_r| + 1e-12))^2.
double landing_cost(const BalanceSystem& system, std::span<const double> completed,
                    std::span<const double> flight_pi);

enum class SampleMethod { Cube, Random };

struct Sample {
    std::vector<std::size_t> indices;  // ascending, unique
    std::vector<double> weights;       // 1 / pi_i of each selected unit
    SampleMethod method = SampleMethod::Cube;
    // Cube diagnostics.
    std::size_t flight_steps = 0;
    std::size_t landing_units = 0;
    double landing_cost = 0.0;
};

inline constexpr std::size_t kMaxLandingUnits = 20;

// Exhaustive landing: tries all 2^p' roundings of the fractional units and
// keeps the one with the smallest landing_cost, ties going to the
// lexicographically smallest bit vector (units in index order).
// Throws LandingError when p' > kMaxLandingUnits.
Sample landing_phase(const BalanceSystem& system, const FlightState& state, const InclusionPlan& plan);

struct CubeOptions {
    std::size_t sample_size = 0;
    std::size_t balance_dims = 1;  // principal-component rows besides pi
    std::uint64_t seed = 0;
    PcaOptions pca{};
};

struct CubeResult {
    Sample sample;
    InclusionPlan plan;
    std::vector<ComponentScores> components;
};

// encode -> principal components -> sizes -> inclusion probabilities ->
// balance system -> flight -> landing.
CubeResult cube_sample_detailed(const Dataset& dataset, const CubeOptions& options);
Sample cube_sample(const Dataset& dataset, std::size_t sample_size, std::size_t balance_dims, std::uint64_t seed);

// Inclusion probabilities used by cube sampling, without drawing a sample.
InclusionPlan pca_inclusion_plan(const Dataset& dataset, std::size_t sample_size, const PcaOptions& pca = {});

// Simple random sample without replacement (partial Fisher-Yates), weights n / N.
Sample random_sample(std::size_t population, std::size_t sample_size, std::uint64_t seed);

}  // namespace cubeproto
