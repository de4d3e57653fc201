#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace cubeproto {

struct ClusterSummary {
    std::int32_t cluster;
    std::size_t size;
    std::int32_t majority_label;  // smallest label id among the most frequent
    std::size_t majority_count;
};

struct EvaluationReport {
    double ca = 0.0;
    std::vector<ClusterSummary> per_cluster;  // ascending cluster id, non-empty clusters only
    std::size_t n_total = 0;
};

// Clustering accuracy: the fraction of units carrying the majority true label
// of their cluster. Throws ArgumentError on empty input or a length mismatch.
EvaluationReport clustering_accuracy(std::span<const std::int32_t> assignments, std::span<const std::int32_t> labels);

}  // namespace cubeproto
